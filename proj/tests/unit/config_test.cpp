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

#include <fstream>

#include "common/error.hpp"
#include "scenario/config.hpp"

using namespace dm;
using namespace dm::harness;
using dm::scenario::parse_config;
using dm::scenario::render_config;

namespace {

ErrorCode code_of(std::string_view text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

}  // namespace

TEST_CASE("empty config is the documented default") {
  auto s = parse_config("");
  const protocol::ScenarioConfig d;
  CHECK(s.expect == Expectation::kNone);
  CHECK(s.config.paradigm == protocol::Paradigm::kBroker);
  CHECK(s.config.owners == 3);
  CHECK(s.config.workers == 64);
  CHECK(s.config.endpoints == 5);
  CHECK(s.config.price == 10'000);
  CHECK(s.config.timeout == Millis{600'000});
  CHECK(s.config.ledger.finalization_delay == d.ledger.finalization_delay);
  CHECK(s.config.ias.service_time() == Millis{600});
}

TEST_CASE("every key is read") {
  auto s = parse_config(R"(
[scenario]
name = mine
seed = 99
sweep = 12
sweep_max_delay_ms = 5000
expect = timeout-cancel
paradigm = ida
[market]
owners = 4
workers = 8
endpoints = 3
rows = 11
columns = a, b
price = 7
deposit = 30
consumer_funds = 500
timeout_ms = 1234
broker_mode = withhold
quality_rejects = 1,2
[ledger]
finalization_delay_ms = 40
congestion_penalty_ms = 3
[ias]
revocation_list_latency_ms = 10
report_latency_ms = 20
reachable = no
[network]
latency_ms = 2
reorder_window_ms = 9
[adversary]
compromised = cee-host, db-host
rule = bundle drop from=cee-host
rule = quote delay 50
halt = cee-host at 1000
)");
  const auto& c = s.config;
  CHECK(c.name == "mine");
  CHECK(c.seed == 99);
  CHECK(c.sweep == 12);
  CHECK(c.sweep_max_delay == Millis{5000});
  CHECK(s.expect == Expectation::kTimeoutCancel);
  CHECK(c.paradigm == protocol::Paradigm::kIda);
  CHECK(c.owners == 4);
  CHECK(c.workers == 8);
  CHECK(c.endpoints == 3);
  CHECK(c.rows == 11);
  CHECK(c.columns == std::vector<std::string>{"a", "b"});
  CHECK(c.price == 7);
  CHECK(c.deposit == 30);
  CHECK(c.consumer_funds == 500);
  CHECK(c.timeout == Millis{1234});
  CHECK(c.broker_mode == protocol::BrokerMode::kWithhold);
  CHECK(c.quality_rejects == std::set<std::size_t>{1, 2});
  CHECK(c.ledger.finalization_delay == Millis{40});
  CHECK(c.ledger.congestion_penalty == Millis{3});
  CHECK(c.ias.revocation_list_latency == Millis{10});
  CHECK(c.ias.report_latency == Millis{20});
  CHECK_FALSE(c.ias_reachable);
  CHECK(c.latency == Millis{2});
  CHECK(c.reorder_window == Millis{9});
  CHECK(c.adversary.compromised == std::set<std::string>{"cee-host", "db-host"});
  REQUIRE(c.adversary.rules.size() == 2);
  CHECK(c.adversary.rules[1].action == sim::Action::kDelay);
  REQUIRE(c.adversary.halts.size() == 1);
  CHECK(c.adversary.halts[0].at == Millis{1000});
}

TEST_CASE("render parses back to the same scenario") {
  for (const char* name : kScenarioNames) {
    CAPTURE(name);
    auto s = named_scenario(name);
    s.config.quality_rejects = {0};
    s.config.deposit = 25'000;
    const auto text = render_config(s);
    const auto back = parse_config(text);
    CHECK(render_config(back) == text);
  }
}

TEST_CASE("preset, then policy, then explicit keys") {
  auto s = parse_config("[scenario]\npreset = honest-ida\n[adversary]\npolicy = dc-controls-cloud\n"
                        "blocked_endpoints = 2\n");
  CHECK(s.config.paradigm == protocol::Paradigm::kIda);
  CHECK(s.expect == Expectation::kDcControlsCloud);
  CHECK(s.blocked_endpoints == 2);

  s = parse_config("[scenario]\npreset = timeout-cancel\n[adversary]\npolicy = none\n");
  CHECK(s.config.adversary.halts.empty());
  CHECK(s.expect == Expectation::kTimeoutCancel);
}

TEST_CASE("malformed configs are config errors") {
  CHECK(code_of("[market]\nowners = three\n") == ErrorCode::kConfigError);
  CHECK(code_of("[market]\nowners = -1\n") == ErrorCode::kConfigError);
  CHECK(code_of("[market]\nbogus = 1\n") == ErrorCode::kConfigError);
  CHECK(code_of("[nowhere]\nowners = 1\n") == ErrorCode::kConfigError);
  CHECK(code_of("[market]\nowners = 1\nowners = 2\n") == ErrorCode::kConfigError);
  CHECK(code_of("[market]\nbroker_mode = sneaky\n") == ErrorCode::kConfigError);
  CHECK(code_of("[scenario]\nparadigm = p2p\n") == ErrorCode::kConfigError);
  CHECK(code_of("[scenario]\nexpect = victory\n") == ErrorCode::kConfigError);
  CHECK(code_of("[scenario]\npreset = nope\n") == ErrorCode::kConfigError);
  CHECK(code_of("[scenario]\nseed = 1x\n") == ErrorCode::kConfigError);
  CHECK(code_of("[adversary]\nrule = bundle explode\n") == ErrorCode::kConfigError);
  CHECK(code_of("[adversary]\nhalt = cee-host sometime\n") == ErrorCode::kConfigError);
  CHECK(code_of("[ledger]\nfinalization_delay_ms = 0\n") == ErrorCode::kConfigError);
  CHECK(code_of("[market]\ntimeout_ms = -5\n") == ErrorCode::kConfigError);
  CHECK(code_of("[market]\nendpoints = 0\n") == ErrorCode::kConfigError);
  CHECK(code_of("[ias]\nreachable = maybe\n") == ErrorCode::kConfigError);
  CHECK(code_of("[scenario]\npreset = dc-controls-cloud\n[adversary]\nblocked_endpoints = 9\n") ==
        ErrorCode::kConfigError);
  CHECK(code_of("garbage line\n") == ErrorCode::kConfigError);
}

TEST_CASE("missing file is an io error") {
  try {
    dm::scenario::load_config("/nonexistent/dir/x.ini");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIo);
  }
}

TEST_CASE("shipped configs load") {
  for (const char* f : {"honest-db", "honest-ida", "db-controls-cloud", "db-controls-cloud-modify",
                        "dc-controls-cloud", "dc-controls-cloud-all", "timeout-cancel",
                        "random-adversary-sweep", "fast-finality", "custom", "broken-expectation"}) {
    CAPTURE(f);
    CHECK_NOTHROW(dm::scenario::load_config(std::string(DM_CONFIG_DIR) + "/" + f + ".ini"));
  }
}
