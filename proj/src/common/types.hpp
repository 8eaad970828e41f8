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

#include <chrono>
#include <compare>
#include <cstdint>
#include <string>

namespace dm {

template <class Tag>
struct Id {
  std::uint32_t value = 0;

  constexpr auto operator<=>(const Id&) const = default;
};

using AccountId = Id<struct AccountTag>;
using ContractId = Id<struct ContractTag>;

// Currency: integer count of 1e-6 ether.
using Amount = std::int64_t;
inline constexpr Amount kUnitsPerEther = 1'000'000;

// Simulated time, milliseconds since the start of a run.
using Millis = std::chrono::milliseconds;

inline std::string account_label(AccountId id) { return "a" + std::to_string(id.value); }
inline std::string contract_label(ContractId id) { return "c" + std::to_string(id.value); }

}  // namespace dm
