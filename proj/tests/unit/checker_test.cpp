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

#include "harness/evidence.hpp"
#include "harness/invariants.hpp"
#include "harness/scenario.hpp"

using namespace dm;
using namespace dm::harness;

namespace {

Evidence evidence_of(const char* name) {
  auto s = named_scenario(name);
  s.config.rows = 20;
  auto market = protocol::build_market(effective_config(s));
  market.world->run();
  return collect_evidence(market);
}

sim::Transcript without(const sim::Transcript& t, std::string_view event) {
  sim::Transcript out;
  for (const auto& e : t.entries()) {
    if (e.actor == "chain" && e.step == "event" && e.get("event") == event) continue;
    out.add(e.time, e.actor, e.step, e.fields);
  }
  return out;
}

void expect_only(const Verdict& v, std::string_view name) {
  const auto* r = v.find(name);
  REQUIRE(r);
  CHECK_FALSE(r->pass);
  CHECK_FALSE(r->detail.empty());
  CHECK(v.render().find(std::string(name) + ": FAIL") != std::string::npos);
}

}  // namespace

TEST_CASE("honest evidence passes every checker") {
  for (const char* name : {"honest-db", "honest-ida", "timeout-cancel"}) {
    auto v = check_invariants(evidence_of(name));
    CHECK(v.passed());
    CHECK(v.results.size() == std::size(kInvariantNames));
  }
}

TEST_CASE("payment without a matching key trips atomicity") {
  auto ev = evidence_of("timeout-cancel");
  const auto rec = ev.dc_bindings.front();
  ev.transcript.add(Millis{999'999}, "chain", "event",
                    {{"tx", "00"}, {"contract", contract_label(rec.contract)},
                     {"event", "payout"}, {"idx", std::to_string(rec.idx)},
                     {"to", "a2"}, {"amount", "10000"}});
  auto r = check_atomicity(ev);
  CHECK_FALSE(r.pass);
  CHECK_FALSE(r.slice.empty());
  expect_only(check_invariants(ev), "atomicity");
}

TEST_CASE("complete record whose key the DC cannot use trips atomicity") {
  auto ev = evidence_of("honest-db");
  ev.dc_bundle->key_hashes[0].bytes[0] ^= 1;
  CHECK_FALSE(check_atomicity(ev).pass);
}

TEST_CASE("unaccounted balance trips conservation") {
  auto ev = evidence_of("honest-db");
  ev.balances.begin()->second += 1;
  expect_only(check_invariants(ev), "conservation");
  ev = evidence_of("honest-db");
  ev.total_supply += 5;
  CHECK_FALSE(check_conservation(ev).pass);
}

TEST_CASE("leaked data key trips key confinement") {
  auto ev = evidence_of("honest-db");
  auto leak = to_bytes("prefix");
  leak.insert(leak.end(), ev.data_keys[1].begin(), ev.data_keys[1].end());
  ev.visible.push_back(leak);
  expect_only(check_invariants(ev), "key-confinement");

  ev = evidence_of("honest-db");
  ev.transcript.add(Millis{1}, "db", "debug", {{"key", to_hex(ev.data_keys[0])}});
  CHECK_FALSE(check_key_confinement(ev).pass);
}

TEST_CASE("leaked canary trips plaintext confinement") {
  auto ev = evidence_of("honest-ida");
  ev.visible.push_back(to_bytes("x," + ev.canaries[2] + ",y"));
  expect_only(check_invariants(ev), "plaintext-confinement");
}

TEST_CASE("residual enclave state trips sanitization") {
  auto ev = evidence_of("honest-db");
  for (auto& e : ev.enclaves) {
    if (e.program == "column-stats") e.keys = 2;
  }
  expect_only(check_invariants(ev), "sanitization");
}

TEST_CASE("completion without a commitment trips step ordering") {
  auto ev = evidence_of("honest-db");
  ev.transcript = without(ev.transcript, "computation-complete");
  auto r = check_step_ordering(ev);
  CHECK_FALSE(r.pass);
  CHECK_FALSE(r.slice.empty());
}

TEST_CASE("channel without attestation trips step ordering") {
  auto ev = evidence_of("honest-db");
  sim::Transcript t;
  for (const auto& e : ev.transcript.entries()) {
    if (e.step == "3:attest") continue;
    t.add(e.time, e.actor, e.step, e.fields);
  }
  ev.transcript = t;
  CHECK_FALSE(check_step_ordering(ev).pass);
}

TEST_CASE("missing refund trips refund safety") {
  auto ev = evidence_of("timeout-cancel");
  ev.transcript = without(ev.transcript, "refund");
  auto r = check_refund_safety(ev);
  CHECK_FALSE(r.pass);
  CHECK(r.detail.find("refunded 0") != std::string::npos);
}
