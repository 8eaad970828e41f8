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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crypto/drbg.hpp"

namespace dm::tee {

inline constexpr std::size_t kCanaryLength = 16;

// Numeric table in fixed-point milli-units. Rendered as CSV with a leading
// "#canary=<16 chars>" line that taint checks search for.
struct Table {
  std::string canary;
  std::vector<std::string> columns;
  std::vector<std::vector<std::int64_t>> rows;
};

std::string render_csv(const Table& table);
Table parse_csv(std::string_view text);  // throws kMalformed

Table generate_table(crypto::Drbg& rng, std::vector<std::string> columns, std::size_t rows);

// mean and stddev in micro-units, both floored.
struct ColumnStats {
  std::string column;
  std::uint64_t count = 0;
  std::int64_t mean = 0;
  std::int64_t stddev = 0;
  bool operator==(const ColumnStats&) const = default;
};

// Single pass over every row of every table. Tables must share columns.
std::vector<ColumnStats> column_stats(std::span<const Table> tables);

std::string render_stats(std::span<const ColumnStats> stats);
std::vector<ColumnStats> parse_stats(std::string_view text);

// Fixed-point text helpers: 1234 with 3 places -> "1.234".
std::string format_fixed(std::int64_t value, int places);
std::int64_t parse_fixed(std::string_view text, int places);  // throws kMalformed

}  // namespace dm::tee
