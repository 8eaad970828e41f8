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

#include "tee/workload.hpp"

#include <charconv>
#include <sstream>

#include "common/error.hpp"

namespace dm::tee {
namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr std::string_view kCanaryAlphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
constexpr std::string_view kCanaryPrefix = "#canary=";

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformed, "workload: " + what);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t isqrt(u128 v) {
  if (v == 0) return 0;
  u128 x = v;
  u128 y = (x + 1) / 2;
  while (y < x) {
    x = y;
    y = (x + v / x) / 2;
  }
  return static_cast<std::int64_t>(x);
}

std::int64_t pow10(int places) {
  std::int64_t p = 1;
  for (int i = 0; i < places; ++i) p *= 10;
  return p;
}

}  // namespace

std::string format_fixed(std::int64_t value, int places) {
  const auto scale = pow10(places);
  std::string out = value < 0 ? "-" : "";
  const auto raw = static_cast<std::uint64_t>(value);
  const std::uint64_t mag = value < 0 ? 0 - raw : raw;
  out += std::to_string(mag / static_cast<std::uint64_t>(scale));
  if (places > 0) {
    auto frac = std::to_string(mag % static_cast<std::uint64_t>(scale));
    out += '.';
    out += std::string(static_cast<std::size_t>(places) - frac.size(), '0') + frac;
  }
  return out;
}

std::int64_t parse_fixed(std::string_view text, int places) {
  bool neg = !text.empty() && text.front() == '-';
  if (neg) text.remove_prefix(1);
  auto dot = text.find('.');
  auto whole = text.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? "" : text.substr(dot + 1);
  if (whole.empty() || frac.size() > static_cast<std::size_t>(places)) {
    malformed("bad number '" + std::string(text) + "'");
  }
  std::string digits(whole);
  digits += frac;
  digits += std::string(static_cast<std::size_t>(places) - frac.size(), '0');
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
    malformed("bad number '" + std::string(text) + "'");
  }
  return neg ? -v : v;
}

std::string render_csv(const Table& table) {
  std::string out(kCanaryPrefix);
  out += table.canary;
  out += '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_fixed(row[i], 3);
    }
    out += '\n';
  }
  return out;
}

Table parse_csv(std::string_view text) {
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.size() < 2 || lines[0].substr(0, kCanaryPrefix.size()) != kCanaryPrefix) {
    malformed("missing canary or header");
  }
  Table t;
  t.canary = std::string(lines[0].substr(kCanaryPrefix.size()));
  for (auto c : split(lines[1], ',')) t.columns.emplace_back(c);
  for (std::size_t i = 2; i < lines.size(); ++i) {
    auto cells = split(lines[i], ',');
    if (cells.size() != t.columns.size()) malformed("row " + std::to_string(i) + " width");
    auto& row = t.rows.emplace_back();
    for (auto c : cells) row.push_back(parse_fixed(c, 3));
  }
  return t;
}

Table generate_table(crypto::Drbg& rng, std::vector<std::string> columns, std::size_t rows) {
  Table t;
  for (std::size_t i = 0; i < kCanaryLength; ++i) {
    t.canary += kCanaryAlphabet[rng.uniform(kCanaryAlphabet.size())];
  }
  t.columns = std::move(columns);
  t.rows.resize(rows);
  for (auto& row : t.rows) {
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      // 0.000 .. 199.999
      row.push_back(static_cast<std::int64_t>(rng.uniform(200'000)));
    }
  }
  return t;
}

std::vector<ColumnStats> column_stats(std::span<const Table> tables) {
  if (tables.empty()) return {};
  const auto& columns = tables.front().columns;
  std::vector<i128> sum(columns.size()), sq(columns.size());
  std::uint64_t n = 0;
  for (const auto& t : tables) {
    if (t.columns != columns) malformed("column mismatch across tables");
    for (const auto& row : t.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        sum[c] += row[c];
        sq[c] += static_cast<i128>(row[c]) * row[c];
      }
      ++n;
    }
  }
  std::vector<ColumnStats> out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    ColumnStats s{columns[c], n, 0, 0};
    if (n > 0) {
      const i128 nn = n;
      s.mean = static_cast<std::int64_t>(floor_div(sum[c] * 1000, nn));
      const i128 spread = nn * sq[c] - sum[c] * sum[c];
      s.stddev = isqrt(static_cast<u128>(spread * 1'000'000 / (nn * nn)));
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string render_stats(std::span<const ColumnStats> stats) {
  std::ostringstream out;
  out << "column,count,mean,stddev\n";
  for (const auto& s : stats) {
    out << s.column << ',' << s.count << ',' << format_fixed(s.mean, 6) << ','
        << format_fixed(s.stddev, 6) << '\n';
  }
  return out.str();
}

std::vector<ColumnStats> parse_stats(std::string_view text) {
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines[0] != "column,count,mean,stddev") malformed("stats header");
  std::vector<ColumnStats> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto cells = split(lines[i], ',');
    if (cells.size() != 4) malformed("stats row");
    ColumnStats s;
    s.column = std::string(cells[0]);
    s.count = static_cast<std::uint64_t>(parse_fixed(cells[1], 0));
    s.mean = parse_fixed(cells[2], 6);
    s.stddev = parse_fixed(cells[3], 6);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace dm::tee
