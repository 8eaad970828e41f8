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

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "common/types.hpp"
#include "crypto/drbg.hpp"

namespace dm::sim {

enum class Action : std::uint8_t { kDeliver, kDrop, kDelay, kReorder, kCorrupt };

std::string_view to_string(Action action);

struct MessageMeta {
  std::string cls;
  std::string from_host;
  std::string to_host;
};

// "<class> <action> [delay-ms] [from=<host>] [to=<host>]". Class "*" matches
// everything and "ledger-tx:*" matches by prefix.
struct Rule {
  std::string cls = "*";
  Action action = Action::kDeliver;
  Millis delay{0};
  std::string from_host = "*";
  std::string to_host = "*";

  bool matches(const MessageMeta& m) const;
  std::string render() const;
  static Rule parse(std::string_view text);  // throws kConfigError
  bool operator==(const Rule&) const = default;
};

// "<host> at <ms>" or "<host> after <step> [+<ms>]".
struct HaltRule {
  std::string host;
  std::optional<Millis> at;
  std::string after_step;
  Millis offset{0};

  std::string render() const;
  static HaltRule parse(std::string_view text);  // throws kConfigError
  bool operator==(const HaltRule&) const = default;
};

struct AdversaryPolicy {
  std::set<std::string> compromised;
  std::vector<Rule> rules;
  std::vector<HaltRule> halts;

  bool controls(const MessageMeta& m) const;
  // First matching rule on a message touching a compromised host. Corrupt
  // needs the sending host itself. Deliver when nothing applies.
  Rule decide(const MessageMeta& m) const;
  std::string render() const;
};

// Sampling space for randomized sweeps.
struct SweepSpace {
  std::vector<std::string> classes;
  std::set<std::string> compromised;
  Millis max_delay{0};
  std::vector<std::string> halt_anchors;  // steps a CEE halt may follow
  std::string halt_host = "cee-host";
  Millis halt_jitter{20};
};

// Each class gets a rule with probability 1/2, action uniform over
// {drop, delay <= max_delay, reorder}; a halt after a random anchor with
// probability 1/4.
AdversaryPolicy sample_policy(crypto::Drbg& rng, const SweepSpace& space);

}  // namespace dm::sim
