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

#include "protocol/market.hpp"

namespace dm::protocol {

Market build_market(const ScenarioConfig& config) {
  Market m;
  m.world = std::make_unique<World>(config);
  auto& w = *m.world;
  if (config.owners == 0) return m;  // empty scenario
  m.dc = &w.add<Consumer>();
  if (config.paradigm == Paradigm::kBroker) m.db = &w.add<Broker>();
  for (std::size_t i = 0; i < config.owners; ++i) m.owners.push_back(&w.add<Owner>(i));
  m.cee = &w.add<Cee>();
  return m;
}

}  // namespace dm::protocol
