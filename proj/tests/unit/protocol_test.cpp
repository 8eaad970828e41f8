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

#include "contracts/market_contracts.hpp"
#include "protocol/market.hpp"
#include "tee/workload.hpp"

using namespace dm;
using namespace dm::protocol;
using namespace std::chrono_literals;

TEST_CASE("smoke") {
  for (auto paradigm : {Paradigm::kBroker, Paradigm::kIda}) {
    ScenarioConfig cfg;
    cfg.paradigm = paradigm;
    cfg.rows = 20;
    auto m = build_market(cfg);
    m.world->run();
    if (getenv("DUMP")) std::cout << m.world->transcript().render();
    CHECK(m.dc->outcome() == FlowOutcome::kCompleted);
  }
}
