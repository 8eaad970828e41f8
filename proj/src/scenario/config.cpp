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

#include "scenario/config.hpp"

#include <boost/program_options.hpp>
#include <charconv>
#include <fstream>
#include <sstream>

#include "common/error.hpp"

namespace po = boost::program_options;

namespace dm::scenario {
namespace {

using harness::Scenario;

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw Error(ErrorCode::kConfigError, key + ": " + why);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

std::int64_t to_int(const std::string& key, const std::string& text) {
  std::int64_t v = 0;
  const auto t = trim(text);
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty()) bad(key, "not an integer: " + t);
  return v;
}

std::size_t to_count(const std::string& key, const std::string& text) {
  const auto v = to_int(key, text);
  if (v < 0) bad(key, "must not be negative");
  return static_cast<std::size_t>(v);
}

bool to_bool(const std::string& key, const std::string& text) {
  const auto t = trim(text);
  if (t == "true" || t == "yes" || t == "1") return true;
  if (t == "false" || t == "no" || t == "0") return false;
  bad(key, "not a boolean: " + t);
}

po::options_description describe() {
  po::options_description d;
  auto add = [&](const char* key) { d.add_options()(key, po::value<std::string>()); };
  for (const char* k :
       {"scenario.preset", "scenario.name", "scenario.seed", "scenario.sweep",
        "scenario.sweep_max_delay_ms", "scenario.expect", "scenario.paradigm", "market.owners",
        "market.workers", "market.endpoints", "market.rows", "market.columns", "market.price",
        "market.deposit", "market.consumer_funds", "market.timeout_ms", "market.broker_mode",
        "market.quality_rejects", "ledger.finalization_delay_ms", "ledger.congestion_penalty_ms",
        "ias.revocation_list_latency_ms", "ias.report_latency_ms", "ias.reachable",
        "network.latency_ms", "network.reorder_window_ms", "adversary.policy",
        "adversary.compromised", "adversary.attack", "adversary.blocked_endpoints"}) {
    add(k);
  }
  d.add_options()("adversary.rule", po::value<std::vector<std::string>>()->composing());
  d.add_options()("adversary.halt", po::value<std::vector<std::string>>()->composing());
  return d;
}

void apply_keys(Scenario& s, const po::variables_map& vm) {
  auto& c = s.config;
  auto get = [&](const char* key) -> std::optional<std::string> {
    if (!vm.count(key)) return std::nullopt;
    return trim(vm[key].as<std::string>());
  };
  auto ms = [&](const char* key) { return Millis{to_int(key, *get(key))}; };

  if (auto v = get("scenario.name")) c.name = *v;
  if (auto v = get("scenario.seed")) {
    const auto t = *v;
    std::uint64_t seed = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), seed);
    if (ec != std::errc() || p != t.data() + t.size() || t.empty()) bad("scenario.seed", "not a seed: " + t);
    c.seed = seed;
  }
  if (auto v = get("scenario.sweep")) c.sweep = to_count("scenario.sweep", *v);
  if (get("scenario.sweep_max_delay_ms")) c.sweep_max_delay = ms("scenario.sweep_max_delay_ms");
  if (auto v = get("scenario.expect")) {
    auto e = harness::parse_expectation(*v);
    if (!e) bad("scenario.expect", "unknown expectation " + *v);
    s.expect = *e;
  }
  if (auto v = get("scenario.paradigm")) {
    if (*v == "ida") c.paradigm = protocol::Paradigm::kIda;
    else if (*v == "db") c.paradigm = protocol::Paradigm::kBroker;
    else bad("scenario.paradigm", "expected ida or db, got " + *v);
  }

  if (auto v = get("market.owners")) c.owners = to_count("market.owners", *v);
  if (auto v = get("market.workers")) c.workers = to_count("market.workers", *v);
  if (auto v = get("market.endpoints")) c.endpoints = to_count("market.endpoints", *v);
  if (auto v = get("market.rows")) c.rows = to_count("market.rows", *v);
  if (auto v = get("market.columns")) c.columns = split_list(*v);
  if (auto v = get("market.price")) c.price = to_int("market.price", *v);
  if (auto v = get("market.deposit")) c.deposit = to_int("market.deposit", *v);
  if (auto v = get("market.consumer_funds")) c.consumer_funds = to_int("market.consumer_funds", *v);
  if (get("market.timeout_ms")) c.timeout = ms("market.timeout_ms");
  if (auto v = get("market.broker_mode")) {
    if (*v == "honest") c.broker_mode = protocol::BrokerMode::kHonest;
    else if (*v == "withhold") c.broker_mode = protocol::BrokerMode::kWithhold;
    else if (*v == "early-complete") c.broker_mode = protocol::BrokerMode::kEarlyComplete;
    else bad("market.broker_mode", "unknown mode " + *v);
  }
  if (auto v = get("market.quality_rejects")) {
    c.quality_rejects.clear();
    for (const auto& item : split_list(*v)) c.quality_rejects.insert(to_count("market.quality_rejects", item));
  }

  if (get("ledger.finalization_delay_ms")) c.ledger.finalization_delay = ms("ledger.finalization_delay_ms");
  if (get("ledger.congestion_penalty_ms")) c.ledger.congestion_penalty = ms("ledger.congestion_penalty_ms");
  if (get("ias.revocation_list_latency_ms")) c.ias.revocation_list_latency = ms("ias.revocation_list_latency_ms");
  if (get("ias.report_latency_ms")) c.ias.report_latency = ms("ias.report_latency_ms");
  if (auto v = get("ias.reachable")) c.ias_reachable = to_bool("ias.reachable", *v);
  if (get("network.latency_ms")) c.latency = ms("network.latency_ms");
  if (get("network.reorder_window_ms")) c.reorder_window = ms("network.reorder_window_ms");

  if (auto v = get("adversary.compromised")) {
    c.adversary.compromised.clear();
    for (const auto& h : split_list(*v)) c.adversary.compromised.insert(h);
  }
  if (vm.count("adversary.rule")) {
    c.adversary.rules.clear();
    for (const auto& r : vm["adversary.rule"].as<std::vector<std::string>>()) {
      c.adversary.rules.push_back(sim::Rule::parse(trim(r)));
    }
  }
  if (vm.count("adversary.halt")) {
    c.adversary.halts.clear();
    for (const auto& h : vm["adversary.halt"].as<std::vector<std::string>>()) {
      c.adversary.halts.push_back(sim::HaltRule::parse(trim(h)));
    }
  }
  if (auto v = get("adversary.attack")) {
    auto a = harness::parse_cloud_attack(*v);
    if (!a) bad("adversary.attack", "unknown attack " + *v);
    s.attack = *a;
  }
  if (auto v = get("adversary.blocked_endpoints")) {
    s.blocked_endpoints = to_count("adversary.blocked_endpoints", *v);
  }
}

}  // namespace

Scenario parse_config(std::string_view text) {
  po::variables_map vm;
  try {
    std::istringstream in{std::string(text)};
    po::store(po::parse_config_file(in, describe(), false), vm);
  } catch (const po::error& e) {
    throw Error(ErrorCode::kConfigError, e.what());
  }

  Scenario s;
  if (vm.count("scenario.preset")) s = harness::named_scenario(trim(vm["scenario.preset"].as<std::string>()));
  if (vm.count("adversary.policy")) {
    const auto name = trim(vm["adversary.policy"].as<std::string>());
    if (name != "none") {
      const auto p = harness::named_scenario(name);
      s.expect = p.expect;
      s.attack = p.attack;
      s.blocked_endpoints = p.blocked_endpoints;
      s.config.adversary = p.config.adversary;
    } else {
      s.config.adversary = {};
      s.blocked_endpoints = 0;
    }
  }
  apply_keys(s, vm);
  harness::validate(s);
  return s;
}

Scenario load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string render_config(const Scenario& s) {
  const auto& c = s.config;
  std::ostringstream o;
  auto join = [](const auto& items) {
    std::string out;
    for (const auto& i : items) {
      if (!out.empty()) out += ",";
      if constexpr (std::is_arithmetic_v<std::decay_t<decltype(i)>>) out += std::to_string(i);
      else out += i;
    }
    return out;
  };
  o << "[scenario]\n"
    << "name = " << c.name << "\n"
    << "seed = " << c.seed << "\n"
    << "sweep = " << c.sweep << "\n";
  if (c.sweep_max_delay) o << "sweep_max_delay_ms = " << c.sweep_max_delay->count() << "\n";
  o << "expect = " << harness::to_string(s.expect) << "\n"
    << "paradigm = " << protocol::to_string(c.paradigm) << "\n\n"
    << "[market]\n"
    << "owners = " << c.owners << "\n"
    << "workers = " << c.workers << "\n"
    << "endpoints = " << c.endpoints << "\n"
    << "rows = " << c.rows << "\n"
    << "columns = " << join(c.columns) << "\n"
    << "price = " << c.price << "\n";
  if (c.deposit) o << "deposit = " << *c.deposit << "\n";
  o << "consumer_funds = " << c.consumer_funds << "\n"
    << "timeout_ms = " << c.timeout.count() << "\n"
    << "broker_mode = " << protocol::to_string(c.broker_mode) << "\n";
  if (!c.quality_rejects.empty()) o << "quality_rejects = " << join(c.quality_rejects) << "\n";
  o << "\n[ledger]\n"
    << "finalization_delay_ms = " << c.ledger.finalization_delay.count() << "\n"
    << "congestion_penalty_ms = " << c.ledger.congestion_penalty.count() << "\n\n"
    << "[ias]\n"
    << "revocation_list_latency_ms = " << c.ias.revocation_list_latency.count() << "\n"
    << "report_latency_ms = " << c.ias.report_latency.count() << "\n"
    << "reachable = " << (c.ias_reachable ? "true" : "false") << "\n\n"
    << "[network]\n"
    << "latency_ms = " << c.latency.count() << "\n"
    << "reorder_window_ms = " << c.reorder_window.count() << "\n\n"
    << "[adversary]\n"
    << "attack = " << harness::to_string(s.attack) << "\n"
    << "blocked_endpoints = " << s.blocked_endpoints << "\n";
  if (!c.adversary.compromised.empty()) o << "compromised = " << join(c.adversary.compromised) << "\n";
  for (const auto& r : c.adversary.rules) o << "rule = " << r.render() << "\n";
  for (const auto& h : c.adversary.halts) o << "halt = " << h.render() << "\n";
  return o.str();
}

}  // namespace dm::scenario
