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
#include <string>
#include <string_view>
#include <vector>

#include "common/bytes.hpp"
#include "common/types.hpp"
#include "crypto/crypto.hpp"

namespace dm::contracts {

// Usage terms a data owner publishes with a C_DO contract.
struct Policy {
  std::vector<std::string> dataset;  // data descriptors
  Amount price = 0;
  crypto::Digest operation;  // measurement of the authorized enclave program
  std::vector<AccountId> consumers;
  Millis request_timeout{0};

  Bytes encode() const;
  static Policy decode(ByteReader& in);
  // Throws kMalformedPolicy.
  void validate() const;
};

struct BrokerConfig {
  std::vector<crypto::Digest> operations;
  Millis request_timeout{0};

  Bytes encode() const;
  static BrokerConfig decode(ByteReader& in);
  void validate() const;
};

enum class RecordStatus { kWaitComputation, kWaitComplete, kComplete, kCanceled };
std::string_view to_string(RecordStatus status);
std::optional<RecordStatus> parse_record_status(std::string_view text);
bool is_terminal(RecordStatus status);
// WAIT_COMPUTATION -> {WAIT_COMPLETE, CANCELED}; WAIT_COMPLETE -> {COMPLETE, CANCELED}.
bool is_allowed_transition(RecordStatus from, RecordStatus to);

struct Payout {
  AccountId owner;
  Amount amount = 0;
};

struct UsageRecord {
  std::uint64_t idx = 0;
  crypto::Digest op;
  std::vector<std::string> data;       // C_DO: requested descriptors
  std::vector<AccountId> target_owners;  // C_DB: requested owners
  AccountId consumer;
  Millis request_time{0};
  RecordStatus status = RecordStatus::kWaitComputation;
  std::optional<crypto::Digest> result_key_hash;
  std::optional<Bytes> result_key;
  Amount escrow = 0;
  std::vector<Payout> payouts;  // C_DB: per-owner amounts fixed at Request
};

}  // namespace dm::contracts
