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

#include "doctest.h"

#include <iostream>
#include <set>

#include "harness/scenario.hpp"

using namespace dm;
using namespace dm::harness;

namespace {

void dump_on_fail(const RunResult& r) {
  if (r.verdict.passed()) return;
  std::cerr << r.verdict.render();
  if (getenv("DUMP")) std::cerr << r.transcript.render();
}

}  // namespace

TEST_CASE("named scenarios pass their verdicts") {
  for (const char* name : {"honest-db", "honest-ida", "db-controls-cloud", "dc-controls-cloud",
                           "timeout-cancel"}) {
    CAPTURE(name);
    auto s = named_scenario(name);
    s.config.rows = 40;
    auto r = run(s);
    dump_on_fail(r);
    CHECK(r.verdict.passed());
    CHECK(r.verdict.results.size() == 8);
  }
}

TEST_CASE("db-controls-cloud variants") {
  for (auto attack : {CloudAttack::kSuppress, CloudAttack::kModify, CloudAttack::kNone}) {
    CAPTURE(to_string(attack));
    auto s = named_scenario("db-controls-cloud");
    s.config.rows = 40;
    s.attack = attack;
    auto r = run(s);
    dump_on_fail(r);
    CHECK(r.verdict.passed());
    CHECK(r.outcome == (attack == CloudAttack::kNone ? "completed" : "canceled"));
  }
}

TEST_CASE("dc-controls-cloud by blocked endpoints") {
  for (std::size_t k = 0; k <= 5; ++k) {
    CAPTURE(k);
    auto s = named_scenario("dc-controls-cloud");
    s.config.rows = 40;
    s.blocked_endpoints = k;
    auto r = run(s);
    dump_on_fail(r);
    CHECK(r.verdict.passed());
    CHECK(r.outcome == (k < 5 ? "completed" : "canceled"));
    CHECK(r.metrics.calls.count("CompleteTransaction") == (k < 5 ? 1u : 0u));
  }
}

TEST_CASE("validation rejects bad configs") {
  auto s = named_scenario("honest-db");
  s.config.ledger.finalization_delay = Millis{0};
  CHECK_THROWS_AS(run(s), Error);
  s = named_scenario("honest-db");
  s.config.endpoints = 0;
  CHECK_THROWS_AS(run(s), Error);
  s = named_scenario("dc-controls-cloud");
  s.blocked_endpoints = 6;
  CHECK_THROWS_AS(run(s), Error);
  s = named_scenario("honest-db");
  s.config.quality_rejects = {3};
  CHECK_THROWS_AS(run(s), Error);
  CHECK_THROWS_AS(named_scenario("honest"), Error);
}

TEST_CASE("empty scenario yields an empty transcript") {
  Scenario s;
  s.config.owners = 0;
  auto r = run(s);
  CHECK(r.transcript.empty());
  CHECK(r.verdict.passed());
}

TEST_CASE("runs are deterministic per seed") {
  for (const char* name : {"honest-db", "honest-ida", "timeout-cancel"}) {
    CAPTURE(name);
    auto s = named_scenario(name);
    s.config.rows = 30;
    auto a = run(s);
    auto b = run(s);
    CHECK(a.transcript.render() == b.transcript.render());
    s.config.seed = 2;
    auto c = run(s);
    CHECK(a.transcript.render() != c.transcript.render());
    CHECK(a.verdict.render() == c.verdict.render());
  }
}

TEST_CASE("metrics are recomputable from the rendered transcript") {
  auto s = named_scenario("honest-db");
  s.config.rows = 30;
  auto r = run(s);
  const auto text = r.transcript.render();
  const auto reparsed = sim::Transcript::parse(text);
  CHECK(reparsed.render() == text);
  CHECK(derive_metrics(reparsed) == r.metrics);
  CHECK(r.metrics.flow_calls == 3);
}

TEST_CASE("sweep samples are reproducible and varied") {
  protocol::ScenarioConfig base;
  auto a = sweep_sample(base, 7);
  auto b = sweep_sample(base, 7);
  CHECK(a.seed == b.seed);
  CHECK(a.policy.render() == b.policy.render());
  std::set<std::string> distinct;
  for (std::size_t i = 0; i < 40; ++i) distinct.insert(sweep_sample(base, i).policy.render());
  CHECK(distinct.size() > 30);
}

TEST_CASE("small adversary sweep finds no violations") {
  auto s = named_scenario("random-adversary-sweep");
  s.config.sweep = 60;
  s.config.rows = 20;
  auto r = run(s);
  dump_on_fail(r);
  CHECK(r.runs == 60);
  CHECK(r.verdict.passed());
  CHECK(r.metrics_text.find("sweep_failed_runs=0") != std::string::npos);
}

TEST_CASE("attestation bench follows the queue formula") {
  auto rows = bench_attest(20, {1, 8, 64});
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) {
    const auto rounds = (20 + row.workers - 1) / row.workers;
    CHECK(row.makespan == Millis{static_cast<long>(rounds * 600)});
    CHECK(row.attestations == 20);
  }
  CHECK_THROWS_AS(bench_attest(0, {1}), Error);
}

TEST_CASE("paradigm call counts") {
  for (std::size_t n : {1u, 2u, 5u}) {
    auto row = compare_paradigms(n);
    CHECK(row.ida_completed);
    CHECK(row.db_completed);
    CHECK(row.ida_flow_calls == 3 * n);
    CHECK(row.db_flow_calls == 3);
    CHECK(row.db_setup_calls == n + 1);
  }
}
