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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "common/bytes.hpp"
#include "contracts/records.hpp"
#include "protocol/market.hpp"
#include "sim/transcript.hpp"
#include "tee/messages.hpp"

namespace dm::harness {

struct RecordState {
  tee::Binding binding;
  contracts::RecordStatus status = contracts::RecordStatus::kWaitComputation;
  std::optional<crypto::Digest> key_hash;
  std::optional<Bytes> key;
  Amount escrow = 0;
};

struct EnclaveState {
  std::uint64_t instance = 0;
  std::string host;
  std::string program;
  bool sanitized = false;
  bool halted = false;
  std::size_t keys = 0;
  std::size_t plaintext = 0;
};

// Final state of a run plus what an outside observer could see. Plain data,
// so checker self-tests can build violating instances by hand.
struct Evidence {
  sim::Transcript transcript;
  // Every byte string that left a party: message payloads, finalized
  // transactions, cloud storage.
  std::vector<Bytes> visible;

  std::vector<Bytes> data_keys;      // every owner's K_data
  std::vector<std::string> canaries;  // one per owner dataset

  std::vector<EnclaveState> enclaves;
  std::vector<RecordState> records;  // every usage record on chain

  std::vector<tee::Binding> dc_bindings;
  std::optional<tee::ResultBundle> dc_bundle;  // verified by the DC
  std::optional<Bytes> dc_plaintext;

  Amount minted = 0;
  Amount total_supply = 0;
  std::map<std::string, Amount> balances;  // account label -> final balance

  const RecordState* record(const tee::Binding& b) const;
};

Evidence collect_evidence(const protocol::Market& market);

}  // namespace dm::harness
