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

#include "sim/adversary.hpp"

#include <sstream>

#include "common/error.hpp"

namespace dm::sim {
namespace {

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorCode::kConfigError, what);
}

std::vector<std::string> words(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

long long to_ms(const std::string& s, const std::string& context) {
  try {
    std::size_t used = 0;
    auto v = std::stoll(s, &used);
    if (used != s.size() || v < 0) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    config_error("bad duration '" + s + "' in " + context);
  }
}

bool host_matches(const std::string& pattern, const std::string& host) {
  return pattern == "*" || pattern == host;
}

}  // namespace

std::string_view to_string(Action action) {
  switch (action) {
    case Action::kDeliver: return "deliver";
    case Action::kDrop: return "drop";
    case Action::kDelay: return "delay";
    case Action::kReorder: return "reorder";
    case Action::kCorrupt: return "corrupt";
  }
  return "?";
}

bool Rule::matches(const MessageMeta& m) const {
  bool cls_ok = cls == "*" || cls == m.cls ||
                (cls.size() > 1 && cls.back() == '*' &&
                 m.cls.compare(0, cls.size() - 1, cls, 0, cls.size() - 1) == 0);
  return cls_ok && host_matches(from_host, m.from_host) && host_matches(to_host, m.to_host);
}

std::string Rule::render() const {
  std::string out = cls + " " + std::string(to_string(action));
  if (action == Action::kDelay) out += " " + std::to_string(delay.count());
  if (from_host != "*") out += " from=" + from_host;
  if (to_host != "*") out += " to=" + to_host;
  return out;
}

Rule Rule::parse(std::string_view text) {
  auto w = words(text);
  const std::string ctx = "rule '" + std::string(text) + "'";
  if (w.size() < 2) config_error("incomplete " + ctx);
  Rule r;
  r.cls = w[0];
  std::size_t i = 2;
  if (w[1] == "deliver") r.action = Action::kDeliver;
  else if (w[1] == "drop") r.action = Action::kDrop;
  else if (w[1] == "reorder") r.action = Action::kReorder;
  else if (w[1] == "corrupt") r.action = Action::kCorrupt;
  else if (w[1] == "delay") {
    r.action = Action::kDelay;
    if (w.size() < 3) config_error("delay needs milliseconds in " + ctx);
    r.delay = Millis{to_ms(w[2], ctx)};
    i = 3;
  } else {
    config_error("unknown action '" + w[1] + "' in " + ctx);
  }
  for (; i < w.size(); ++i) {
    if (w[i].rfind("from=", 0) == 0) r.from_host = w[i].substr(5);
    else if (w[i].rfind("to=", 0) == 0) r.to_host = w[i].substr(3);
    else config_error("unexpected '" + w[i] + "' in " + ctx);
  }
  return r;
}

std::string HaltRule::render() const {
  if (at) return host + " at " + std::to_string(at->count());
  std::string out = host + " after " + after_step;
  if (offset.count() > 0) out += " +" + std::to_string(offset.count());
  return out;
}

HaltRule HaltRule::parse(std::string_view text) {
  auto w = words(text);
  const std::string ctx = "halt '" + std::string(text) + "'";
  HaltRule h;
  if (w.size() == 3 && w[1] == "at") {
    h.host = w[0];
    h.at = Millis{to_ms(w[2], ctx)};
    return h;
  }
  if ((w.size() == 3 || w.size() == 4) && w[1] == "after") {
    h.host = w[0];
    h.after_step = w[2];
    if (w.size() == 4) {
      if (w[3].empty() || w[3][0] != '+') config_error("offset must be +<ms> in " + ctx);
      h.offset = Millis{to_ms(w[3].substr(1), ctx)};
    }
    return h;
  }
  config_error("expected '<host> at <ms>' or '<host> after <step> [+<ms>]' in " + ctx);
}

bool AdversaryPolicy::controls(const MessageMeta& m) const {
  return compromised.count(m.from_host) > 0 || compromised.count(m.to_host) > 0;
}

Rule AdversaryPolicy::decide(const MessageMeta& m) const {
  if (controls(m)) {
    for (const auto& r : rules) {
      if (!r.matches(m)) continue;
      if (r.action == Action::kCorrupt && !compromised.count(m.from_host)) continue;
      return r;
    }
  }
  return Rule{};
}

std::string AdversaryPolicy::render() const {
  std::string out = "compromised=";
  bool first = true;
  for (const auto& h : compromised) {
    if (!first) out += ',';
    out += h;
    first = false;
  }
  out += '\n';
  for (const auto& r : rules) out += "rule=" + r.render() + "\n";
  for (const auto& h : halts) out += "halt=" + h.render() + "\n";
  return out;
}

AdversaryPolicy sample_policy(crypto::Drbg& rng, const SweepSpace& space) {
  AdversaryPolicy p;
  p.compromised = space.compromised;
  for (const auto& cls : space.classes) {
    if (!rng.chance(1, 2)) continue;
    Rule r;
    r.cls = cls;
    switch (rng.uniform(3)) {
      case 0: r.action = Action::kDrop; break;
      case 1:
        r.action = Action::kDelay;
        r.delay = Millis{1 + static_cast<long>(rng.uniform(static_cast<std::uint64_t>(
                                 std::max<long>(space.max_delay.count(), 1))))};
        break;
      default: r.action = Action::kReorder; break;
    }
    p.rules.push_back(r);
  }
  if (!space.halt_anchors.empty() && rng.chance(1, 4)) {
    HaltRule h;
    h.host = space.halt_host;
    h.after_step = space.halt_anchors[rng.uniform(space.halt_anchors.size())];
    h.offset = Millis{static_cast<long>(rng.uniform(space.halt_jitter.count() + 1))};
    p.halts.push_back(h);
  }
  return p;
}

}  // namespace dm::sim
