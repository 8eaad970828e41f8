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

#include <memory>
#include <vector>

#include "protocol/broker.hpp"
#include "protocol/cee.hpp"
#include "protocol/consumer.hpp"
#include "protocol/owner.hpp"
#include "protocol/world.hpp"

namespace dm::protocol {

// One market instance: the world and handles to its actors. The broker is
// absent in the iDA paradigm.
struct Market {
  std::unique_ptr<World> world;
  Consumer* dc = nullptr;
  Broker* db = nullptr;
  std::vector<Owner*> owners;
  Cee* cee = nullptr;
};

// Accounts are created in a fixed order: dc, db, owners. Zero owners
// builds an empty market with no actors.
Market build_market(const ScenarioConfig& config);

}  // namespace dm::protocol
