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

#include <string>
#include <vector>

#include "harness/evidence.hpp"

namespace dm::harness {

struct InvariantResult {
  std::string name;
  bool pass = true;
  std::string detail;              // first violation, empty on pass
  std::vector<std::string> slice;  // transcript lines around it
};

struct Verdict {
  std::vector<InvariantResult> results;

  bool passed() const;
  const InvariantResult* find(std::string_view name) const;
  void add(InvariantResult r) { results.push_back(std::move(r)); }
  // One "name: pass" or "name: FAIL detail" line per result, slices indented.
  std::string render() const;
};

inline constexpr const char* kInvariantNames[] = {
    "atomicity",     "conservation",  "key-confinement", "plaintext-confinement",
    "sanitization",  "step-ordering", "refund-safety",
};

InvariantResult check_atomicity(const Evidence& ev);
InvariantResult check_conservation(const Evidence& ev);
InvariantResult check_key_confinement(const Evidence& ev);
InvariantResult check_plaintext_confinement(const Evidence& ev);
InvariantResult check_sanitization(const Evidence& ev);
InvariantResult check_step_ordering(const Evidence& ev);
InvariantResult check_refund_safety(const Evidence& ev);

Verdict check_invariants(const Evidence& ev);

// Transcript lines that mention `needle` in any field value, at most `limit`.
std::vector<std::string> slice_mentioning(const sim::Transcript& t, std::string_view needle,
                                          std::size_t limit = 24);

}  // namespace dm::harness
