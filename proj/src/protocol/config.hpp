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
#include <set>
#include <string>
#include <vector>

#include "common/types.hpp"
#include "ledger/ledger.hpp"
#include "sim/adversary.hpp"
#include "tee/attestation.hpp"

namespace dm::protocol {

enum class Paradigm : std::uint8_t { kIda, kBroker };
std::string_view to_string(Paradigm p);

// How the broker behaves at key release.
enum class BrokerMode : std::uint8_t {
  kHonest,
  kWithhold,       // never submits CompleteTransaction
  kEarlyComplete,  // submits it as soon as it holds the key slip
};
std::string_view to_string(BrokerMode m);

struct ScenarioConfig {
  std::string name = "custom";
  Paradigm paradigm = Paradigm::kBroker;
  std::size_t owners = 3;      // N
  std::size_t workers = 64;    // W, attestation workers per attested host
  std::size_t endpoints = 5;   // B
  std::size_t rows = 500;      // per owner dataset
  std::vector<std::string> columns{"heart_rate", "steps", "sleep_minutes"};
  Amount price = 10'000;       // per owner, 0.01 ether
  std::optional<Amount> deposit;  // default: the aggregate price
  Amount consumer_funds = kUnitsPerEther;
  Millis timeout{600'000};     // pRTO / cRTO
  BrokerMode broker_mode = BrokerMode::kHonest;
  std::set<std::size_t> quality_rejects;  // owner indexes the broker's check fails

  ledger::LedgerConfig ledger;
  tee::IasConfig ias;
  bool ias_reachable = true;
  Millis latency{10};
  Millis reorder_window{1'000};
  sim::AdversaryPolicy adversary;

  std::uint64_t seed = 1;
  // Random adversary sweep: number of runs and delay bound.
  std::size_t sweep = 0;
  std::optional<Millis> sweep_max_delay;  // default 10 x timeout

  Amount flow_deposit() const {
    return deposit.value_or(price * static_cast<Amount>(owners));
  }
};

}  // namespace dm::protocol
