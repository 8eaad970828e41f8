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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "harness/evidence.hpp"
#include "harness/invariants.hpp"
#include "harness/metrics.hpp"
#include "protocol/config.hpp"

namespace dm::harness {

// What a scenario expects of the outcome, beyond the invariants.
enum class Expectation : std::uint8_t {
  kNone,
  kHonest,           // every record COMPLETE, result correct, owners paid
  kDbControlsCloud,  // no payment without a DC commitment, DC made whole
  kDcControlsCloud,  // completes iff an endpoint is reachable
  kTimeoutCancel,    // canceled, everyone whole
};
std::string_view to_string(Expectation e);
std::optional<Expectation> parse_expectation(std::string_view text);

// db-controls-cloud variants.
enum class CloudAttack : std::uint8_t { kSuppress, kModify, kNone };
std::string_view to_string(CloudAttack a);
std::optional<CloudAttack> parse_cloud_attack(std::string_view text);

struct Scenario {
  protocol::ScenarioConfig config;
  Expectation expect = Expectation::kNone;
  CloudAttack attack = CloudAttack::kSuppress;
  std::size_t blocked_endpoints = 0;  // dc-controls-cloud
};

inline constexpr const char* kScenarioNames[] = {
    "honest-ida",      "honest-db",      "db-controls-cloud",
    "dc-controls-cloud", "timeout-cancel", "random-adversary-sweep",
};

// Throws kConfigError on an unknown name.
Scenario named_scenario(std::string_view name);

// Rewrites the adversary policy from the scenario's attack knobs. Called by
// run(); exposed so config files can be inspected after it.
protocol::ScenarioConfig effective_config(const Scenario& s);

// Throws kConfigError on anything run() would reject.
void validate(const Scenario& s);

struct RunResult {
  sim::Transcript transcript;
  Metrics metrics;
  Verdict verdict;
  std::string metrics_text;  // metrics.render() plus scenario extras
  std::string outcome = "none";  // the DC's view of its flow
  std::size_t runs = 1;
};

// A single run, or a sweep when config.sweep > 0.
RunResult run(const Scenario& s);
RunResult run_single(const Scenario& s);

// One adversary policy per sweep index; pure function of (base seed, index).
struct SweepSample {
  std::uint64_t seed = 0;
  sim::AdversaryPolicy policy;
};
SweepSample sweep_sample(const protocol::ScenarioConfig& base, std::size_t index);
RunResult run_sweep(const Scenario& s);

// Onboarding makespan with N owners attesting the broker at once.
struct AttestBenchRow {
  std::size_t workers = 0;
  Millis makespan{0};
  std::size_t attestations = 0;
};
std::vector<AttestBenchRow> bench_attest(std::size_t owners, const std::vector<std::size_t>& workers);

// Flow-time on-chain calls of one data transaction in each paradigm.
struct ParadigmRow {
  std::size_t owners = 0;
  std::size_t ida_flow_calls = 0;
  std::size_t db_flow_calls = 0;
  std::size_t db_setup_calls = 0;  // Register and Confirm
  bool ida_completed = false;
  bool db_completed = false;
};
ParadigmRow compare_paradigms(std::size_t owners);

}  // namespace dm::harness
