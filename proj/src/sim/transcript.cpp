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

#include "sim/transcript.hpp"

#include <charconv>

#include "common/error.hpp"

namespace dm::sim {
namespace {

bool clean(std::string_view s, bool allow_eq) {
  for (char c : s) {
    if (c == ' ' || c == '|' || c == '\n' || (!allow_eq && c == '=')) return false;
  }
  return true;
}

}  // namespace

std::optional<std::string_view> Entry::get(std::string_view key) const {
  for (const auto& [k, v] : fields) {
    if (k == key) return std::string_view(v);
  }
  return std::nullopt;
}

std::string Entry::render() const {
  std::string out = std::to_string(time.count());
  out += '|';
  out += actor;
  out += '|';
  out += step;
  out += '|';
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ' ';
    out += fields[i].first;
    out += '=';
    out += fields[i].second;
  }
  return out;
}

Entry Entry::parse(std::string_view line) {
  auto bad = [&] { return Error(ErrorCode::kMalformed, "transcript line: " + std::string(line)); };
  std::string_view parts[4];
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    auto pos = line.find('|', start);
    if (pos == std::string_view::npos) throw bad();
    parts[i] = line.substr(start, pos - start);
    start = pos + 1;
  }
  parts[3] = line.substr(start);
  Entry e;
  long long t = 0;
  auto [p, ec] = std::from_chars(parts[0].data(), parts[0].data() + parts[0].size(), t);
  if (ec != std::errc{} || p != parts[0].data() + parts[0].size()) throw bad();
  e.time = Millis{t};
  e.actor = std::string(parts[1]);
  e.step = std::string(parts[2]);
  auto rest = parts[3];
  while (!rest.empty()) {
    auto sp = rest.find(' ');
    auto kv = rest.substr(0, sp);
    auto eq = kv.find('=');
    if (eq == std::string_view::npos) throw bad();
    e.fields.emplace_back(std::string(kv.substr(0, eq)), std::string(kv.substr(eq + 1)));
    if (sp == std::string_view::npos) break;
    rest = rest.substr(sp + 1);
  }
  return e;
}

void Transcript::add(Millis time, std::string actor, std::string step, Fields fields) {
  if (!clean(actor, false) || !clean(step, false)) {
    throw Error(ErrorCode::kInvalidArgument, "transcript actor/step: " + actor + "/" + step);
  }
  for (const auto& [k, v] : fields) {
    if (k.empty() || !clean(k, false) || !clean(v, true)) {
      throw Error(ErrorCode::kInvalidArgument, "transcript field " + k + "=" + v);
    }
  }
  entries_.push_back(Entry{time, std::move(actor), std::move(step), std::move(fields)});
  // Observers may add entries, which can reallocate.
  const Entry added = entries_.back();
  for (const auto& fn : observers_) fn(added);
}

std::string Transcript::render() const {
  std::string out;
  for (const auto& e : entries_) {
    out += e.render();
    out += '\n';
  }
  return out;
}

Transcript Transcript::parse(std::string_view text) {
  Transcript t;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    if (!line.empty()) t.entries_.push_back(Entry::parse(line));
    if (nl == std::string_view::npos) break;
    text = text.substr(nl + 1);
  }
  return t;
}

std::vector<const Entry*> Transcript::find(std::string_view step) const {
  std::vector<const Entry*> out;
  for (const auto& e : entries_) {
    if (e.step == step) out.push_back(&e);
  }
  return out;
}

}  // namespace dm::sim
