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

#include <cstdint>
#include <string>
#include <variant>

#include "common/bytes.hpp"
#include "common/types.hpp"
#include "crypto/crypto.hpp"

namespace dm::ledger {

// A Deploy target creates a contract; the function names the contract kind.
struct Deploy {
  bool operator==(const Deploy&) const = default;
};
using Target = std::variant<Deploy, AccountId, ContractId>;

std::string target_label(const Target& target);

struct SignedTransaction {
  AccountId sender;
  Target target;
  std::string function;
  Bytes args;
  Amount value = 0;
  std::uint64_t nonce = 0;
  crypto::Signature signature{};

  // Everything except the signature, canonically encoded.
  Bytes signing_payload() const;
  Bytes serialize() const;
  static SignedTransaction parse(ByteView wire);  // throws kMalformed
  crypto::Digest id() const;
};

SignedTransaction make_transaction(const crypto::SigningKey& key, AccountId sender, Target target,
                                   std::string function, Bytes args, Amount value,
                                   std::uint64_t nonce);

}  // namespace dm::ledger
