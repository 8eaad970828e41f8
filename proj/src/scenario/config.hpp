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

#include <string>
#include <string_view>

#include "harness/scenario.hpp"

namespace dm::scenario {

// Flat INI text:
//
//   [scenario]  preset name seed sweep sweep_max_delay_ms expect paradigm
//   [market]    owners workers endpoints rows columns price deposit
//               consumer_funds timeout_ms broker_mode quality_rejects
//   [ledger]    finalization_delay_ms congestion_penalty_ms
//   [ias]       revocation_list_latency_ms report_latency_ms reachable
//   [network]   latency_ms reorder_window_ms
//   [adversary] policy compromised rule halt attack blocked_endpoints
//
// Later sources win: preset, then adversary.policy, then explicit keys.
// Amounts are micro-ether. Lists are comma separated; rule and halt may
// repeat. Throws kConfigError on unknown keys, bad values or a scenario
// that fails validation.
harness::Scenario parse_config(std::string_view text);
harness::Scenario load_config(const std::string& path);  // kIo if unreadable

// Inverse of parse_config for everything it reads.
std::string render_config(const harness::Scenario& s);

}  // namespace dm::scenario
