// Copyright 2026 The datamarket-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "common/bytes.hpp"
#include "common/types.hpp"
#include "contracts/records.hpp"
#include "ledger/ledger.hpp"

// Argument encoders for every contract entry point. Each returns the
// function name and byte-encoded arguments for a SignedTransaction.
namespace dm::contracts::calls {

struct Call {
  std::string function;
  Bytes args;
};

Call deploy_data_owner(const Policy& policy);
Call deploy_data_broker(const BrokerConfig& config);

Call request_data(const crypto::Digest& op, std::span<const std::string> data);
Call request_owners(const crypto::Digest& op, std::span<const AccountId> owners);
Call register_owner(const crypto::Digest& op, AccountId consumer, Amount price);
Call confirm(std::span<const AccountId> owners);
Call computation_complete(std::uint64_t idx, const crypto::Digest& result_key_hash);
Call complete_transaction(std::uint64_t idx, ByteView result_key);
Call cancel(std::uint64_t idx);
Call revoke();

// Record index returned by a successful Request, if one was created.
std::optional<std::uint64_t> record_index(const ledger::Receipt& receipt);

}  // namespace dm::contracts::calls
