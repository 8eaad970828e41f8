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

#include "common/types.hpp"
#include "sim/transcript.hpp"

namespace dm::harness {

// Everything here is recomputed from transcript lines alone.
struct Metrics {
  // First attestation request queued to last report issued, onboarding stage.
  std::optional<Millis> onboarding_makespan;
  std::size_t onboarding_attestations = 0;
  // DC's first Request submission to its decryption.
  std::optional<Millis> flow_runtime;
  std::map<std::string, std::size_t> calls;  // successful finalized calls by function
  std::size_t flow_calls = 0;                // Request + ComputationComplete + CompleteTransaction
  std::size_t finalized = 0;
  std::size_t reverted = 0;
  std::map<std::string, std::string> accounts;   // account label -> actor
  std::map<std::string, Amount> genesis;         // account label -> genesis
  std::map<std::string, Amount> balance_delta;   // account label -> net change
  std::map<std::string, std::string> records;    // "c0.0" -> status
  std::map<std::string, Amount> record_escrow;   // "c0.0" -> deposit at Request

  std::string render() const;
  bool operator==(const Metrics&) const = default;
};

Metrics derive_metrics(const sim::Transcript& transcript);

// Flow-time functions, the ones counted per data transaction.
bool is_flow_call(std::string_view function);

}  // namespace dm::harness
