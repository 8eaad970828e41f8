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

#include "harness/scenario.hpp"

#include <algorithm>

#include "common/error.hpp"
#include "protocol/market.hpp"
#include "protocol/world.hpp"
#include "tee/workload.hpp"

namespace dm::harness {
namespace {

using contracts::RecordStatus;
using protocol::Market;
using protocol::ScenarioConfig;

Amount delta_of(const Metrics& m, AccountId id) {
  auto it = m.balance_delta.find(account_label(id));
  return it == m.balance_delta.end() ? 0 : it->second;
}

bool all_status(const Evidence& ev, RecordStatus status) {
  if (ev.dc_bindings.empty()) return false;
  return std::all_of(ev.dc_bindings.begin(), ev.dc_bindings.end(), [&](const auto& b) {
    const auto* r = ev.record(b);
    return r && r->status == status;
  });
}

bool any_complete(const Evidence& ev) {
  return std::any_of(ev.records.begin(), ev.records.end(),
                     [](const auto& r) { return r.status == RecordStatus::kComplete; });
}

bool has_step(const sim::Transcript& t, std::string_view actor, std::string_view step) {
  return std::any_of(t.entries().begin(), t.entries().end(),
                     [&](const auto& e) { return e.actor == actor && e.step == step; });
}

bool has_event(const sim::Transcript& t, std::string_view kind) {
  return std::any_of(t.entries().begin(), t.entries().end(), [&](const auto& e) {
    return e.actor == "chain" && e.step == "event" && e.get("event") == kind;
  });
}

InvariantResult expect_fail(InvariantResult r, std::string detail, const Evidence& ev) {
  r.pass = false;
  r.detail = std::move(detail);
  if (!ev.dc_bindings.empty()) {
    r.slice = slice_mentioning(ev.transcript, contract_label(ev.dc_bindings.front().contract));
  }
  return r;
}

InvariantResult check_honest(InvariantResult r, const Market& market, const Evidence& ev,
                             const Metrics& m, const ScenarioConfig& cfg) {
  if (!all_status(ev, RecordStatus::kComplete)) return expect_fail(r, "records not COMPLETE", ev);
  if (!ev.dc_plaintext) return expect_fail(r, "DC holds no plaintext", ev);
  std::vector<tee::Table> tables;
  for (const auto* o : market.owners) tables.push_back(o->table());
  const auto expected = tee::render_stats(tee::column_stats(tables));
  if (dm::to_string(*ev.dc_plaintext) != expected) return expect_fail(r, "result differs from the oracle", ev);
  Amount total = 0;
  for (const auto* o : market.owners) {
    if (delta_of(m, o->account()) != cfg.price) {
      return expect_fail(r, o->name() + " net change " + std::to_string(delta_of(m, o->account())), ev);
    }
    total += cfg.price;
  }
  if (delta_of(m, market.dc->account()) != -total) {
    return expect_fail(r, "DC net change " + std::to_string(delta_of(m, market.dc->account())), ev);
  }
  return r;
}

InvariantResult check_made_whole(InvariantResult r, const Market& market, const Evidence& ev,
                                 const Metrics& m) {
  if (!all_status(ev, RecordStatus::kCanceled)) return expect_fail(r, "records not CANCELED", ev);
  if (delta_of(m, market.dc->account()) != 0) {
    return expect_fail(r, "DC net change " + std::to_string(delta_of(m, market.dc->account())), ev);
  }
  for (const auto* o : market.owners) {
    if (delta_of(m, o->account()) != 0) return expect_fail(r, o->name() + " was paid", ev);
  }
  return r;
}

InvariantResult check_expectation(const Scenario& s, const ScenarioConfig& cfg, const Market& market,
                                  const Evidence& ev, const Metrics& m) {
  InvariantResult r{"scenario:" + std::string(to_string(s.expect))};
  switch (s.expect) {
    case Expectation::kNone:
      break;
    case Expectation::kHonest:
      return check_honest(r, market, ev, m, cfg);
    case Expectation::kDbControlsCloud: {
      if (s.attack == CloudAttack::kNone) return check_honest(r, market, ev, m, cfg);
      if (any_complete(ev) || has_event(ev.transcript, "payout")) {
        return expect_fail(r, "a record completed without the DC's commitment", ev);
      }
      if (m.calls.count("ComputationComplete")) return expect_fail(r, "DC committed a result", ev);
      if (s.attack == CloudAttack::kSuppress) {
        const auto& es = ev.transcript.entries();
        const bool thwarted = std::any_of(es.begin(), es.end(), [](const auto& e) {
          return e.step == "finalize" && e.get("fn") == "CompleteTransaction" &&
                 e.get("reason") == "wrong-state";
        });
        if (!thwarted) return expect_fail(r, "no early CompleteTransaction was attempted", ev);
      } else if (!has_step(ev.transcript, "dc", "7:reject")) {
        return expect_fail(r, "DC did not reject the modified result", ev);
      }
      return check_made_whole(r, market, ev, m);
    }
    case Expectation::kDcControlsCloud:
      if (s.blocked_endpoints < cfg.endpoints) return check_honest(r, market, ev, m, cfg);
      for (const auto& rec : ev.records) {
        if (rec.key) return expect_fail(r, "kr reached the chain", ev);
      }
      if (ev.dc_plaintext) return expect_fail(r, "DC obtained the plaintext", ev);
      if (has_event(ev.transcript, "payout")) return expect_fail(r, "owners were paid", ev);
      if (!ev.dc_bundle) return expect_fail(r, "DC never held the sealed result", ev);
      return r;
    case Expectation::kTimeoutCancel:
      return check_made_whole(r, market, ev, m);
  }
  return r;
}

}  // namespace

std::string_view to_string(Expectation e) {
  switch (e) {
    case Expectation::kNone: return "none";
    case Expectation::kHonest: return "honest";
    case Expectation::kDbControlsCloud: return "db-controls-cloud";
    case Expectation::kDcControlsCloud: return "dc-controls-cloud";
    case Expectation::kTimeoutCancel: return "timeout-cancel";
  }
  return "?";
}

std::optional<Expectation> parse_expectation(std::string_view text) {
  for (auto e : {Expectation::kNone, Expectation::kHonest, Expectation::kDbControlsCloud,
                 Expectation::kDcControlsCloud, Expectation::kTimeoutCancel}) {
    if (to_string(e) == text) return e;
  }
  return std::nullopt;
}

std::string_view to_string(CloudAttack a) {
  switch (a) {
    case CloudAttack::kSuppress: return "suppress";
    case CloudAttack::kModify: return "modify";
    case CloudAttack::kNone: return "none";
  }
  return "?";
}

std::optional<CloudAttack> parse_cloud_attack(std::string_view text) {
  for (auto a : {CloudAttack::kSuppress, CloudAttack::kModify, CloudAttack::kNone}) {
    if (to_string(a) == text) return a;
  }
  return std::nullopt;
}

Scenario named_scenario(std::string_view name) {
  Scenario s;
  s.config.name = std::string(name);
  if (name == "honest-db") {
    s.expect = Expectation::kHonest;
  } else if (name == "honest-ida") {
    s.config.paradigm = protocol::Paradigm::kIda;
    s.expect = Expectation::kHonest;
  } else if (name == "db-controls-cloud") {
    s.expect = Expectation::kDbControlsCloud;
  } else if (name == "dc-controls-cloud") {
    s.expect = Expectation::kDcControlsCloud;
    s.blocked_endpoints = 4;
  } else if (name == "timeout-cancel") {
    s.expect = Expectation::kTimeoutCancel;
    s.config.adversary.halts.push_back(sim::HaltRule::parse("cee-host after 4:provision"));
  } else if (name == "random-adversary-sweep") {
    s.config.sweep = 1000;
  } else {
    throw Error(ErrorCode::kConfigError, "unknown scenario " + std::string(name));
  }
  return s;
}

ScenarioConfig effective_config(const Scenario& s) {
  auto cfg = s.config;
  auto& adv = cfg.adversary;
  if (s.expect == Expectation::kDbControlsCloud) {
    adv.compromised.insert({"cee-host", "db-host"});
    if (s.attack == CloudAttack::kSuppress) {
      adv.rules.push_back(sim::Rule::parse("bundle drop from=cee-host"));
      cfg.broker_mode = protocol::BrokerMode::kEarlyComplete;
    } else if (s.attack == CloudAttack::kModify) {
      adv.rules.push_back(sim::Rule::parse("bundle corrupt from=cee-host"));
    }
  } else if (s.expect == Expectation::kDcControlsCloud) {
    adv.compromised.insert({"cee-host", "dc-host"});
    for (std::size_t k = 0; k < s.blocked_endpoints; ++k) {
      const auto host = protocol::endpoint_name(k);
      adv.compromised.insert(host);
      adv.rules.push_back(sim::Rule::parse("ledger-tx:CompleteTransaction drop to=" + host));
    }
  }
  return cfg;
}

void validate(const Scenario& s) {
  const auto& c = s.config;
  auto bad = [](const std::string& what) { throw Error(ErrorCode::kConfigError, what); };
  if (c.endpoints == 0) bad("endpoints must be at least 1");
  if (c.workers == 0) bad("workers must be at least 1");
  if (c.rows == 0) bad("rows must be at least 1");
  if (c.columns.empty()) bad("columns must not be empty");
  if (c.price < 0) bad("price must not be negative");
  if (c.deposit && *c.deposit < 0) bad("deposit must not be negative");
  if (c.consumer_funds < 0) bad("consumer_funds must not be negative");
  if (c.timeout.count() <= 0) bad("timeout must be positive");
  if (c.ledger.finalization_delay.count() <= 0) bad("finalization_delay must be positive");
  if (c.ledger.congestion_penalty.count() < 0) bad("congestion_penalty must not be negative");
  if (c.ias.report_latency.count() < 0 || c.ias.revocation_list_latency.count() < 0) {
    bad("attestation latencies must not be negative");
  }
  if (c.latency.count() < 0 || c.reorder_window.count() < 0) bad("network delays must not be negative");
  if (c.sweep_max_delay && c.sweep_max_delay->count() < 0) bad("sweep_max_delay must not be negative");
  for (auto q : c.quality_rejects) {
    if (q >= c.owners) bad("quality_rejects names owner " + std::to_string(q) + " out of range");
  }
  if (s.blocked_endpoints > c.endpoints) bad("blocked_endpoints exceeds endpoints");
  if (s.blocked_endpoints > 0 && s.expect != Expectation::kDcControlsCloud) {
    bad("blocked_endpoints only applies to dc-controls-cloud");
  }
  if (s.expect != Expectation::kNone && c.owners == 0) bad("expectation needs at least one owner");
}

RunResult run_single(const Scenario& s) {
  validate(s);
  const auto cfg = effective_config(s);
  auto market = protocol::build_market(cfg);
  market.world->run();

  RunResult out;
  const auto ev = collect_evidence(market);
  out.transcript = ev.transcript;
  out.metrics = derive_metrics(out.transcript);
  out.verdict = check_invariants(ev);
  if (s.expect != Expectation::kNone) {
    out.verdict.add(check_expectation(s, cfg, market, ev, out.metrics));
  }
  out.metrics_text = out.metrics.render();
  if (market.dc) {
    out.outcome = std::string(to_string(market.dc->outcome()));
    out.metrics_text += "outcome=" + out.outcome + "\n";
  }
  return out;
}

SweepSample sweep_sample(const ScenarioConfig& base, std::size_t index) {
  auto rng = crypto::Drbg(base.seed).fork("sweep-" + std::to_string(index));
  sim::SweepSpace space;
  space.classes = {"compute", "challenge", "quote",    "hello",
                   "provision", "bundle",  "key-slip", "ledger-tx:CompleteTransaction"};
  space.compromised = {"cee-host", "db-host"};
  space.max_delay = base.sweep_max_delay.value_or(base.timeout * 10);
  space.halt_anchors = {"2:load", "3:channel", "4:provision"};
  SweepSample out;
  out.seed = rng.next_u64();
  out.policy = sim::sample_policy(rng, space);
  return out;
}

RunResult run_sweep(const Scenario& s) {
  validate(s);
  RunResult agg;
  agg.runs = s.config.sweep;
  std::size_t failed_runs = 0;
  std::optional<std::size_t> first_failure;
  std::map<std::string, std::size_t> violations;
  std::map<std::string, std::size_t> outcomes;
  std::vector<std::string> order;

  for (std::size_t i = 0; i < s.config.sweep; ++i) {
    auto sample = sweep_sample(s.config, i);
    Scenario one = s;
    one.config.sweep = 0;
    one.config.seed = sample.seed;
    one.config.adversary = sample.policy;
    auto res = run_single(one);

    ++outcomes[res.outcome];
    for (const auto& r : res.verdict.results) {
      if (!violations.count(r.name)) order.push_back(r.name);
      violations[r.name] += r.pass ? 0 : 1;
    }
    if (!res.verdict.passed()) {
      ++failed_runs;
      if (!first_failure) {
        first_failure = i;
        agg.transcript = res.transcript;
        agg.metrics = res.metrics;
        agg.verdict = res.verdict;
        for (auto& r : agg.verdict.results) {
          if (!r.pass) {
            r.detail = "run " + std::to_string(i) + " seed " + std::to_string(sample.seed) +
                       " policy {" + sample.policy.render() + "}: " + r.detail;
          }
        }
      }
    } else if (i == 0) {
      agg.transcript = res.transcript;
      agg.metrics = res.metrics;
    }
  }

  if (!first_failure) {
    agg.verdict = {};
    for (const auto& name : order) agg.verdict.add(InvariantResult{name});
  }
  for (auto& r : agg.verdict.results) {
    if (!r.pass) r.detail += " (" + std::to_string(violations[r.name]) + " runs)";
  }
  agg.metrics_text = "sweep_runs=" + std::to_string(agg.runs) + "\n" +
                     "sweep_failed_runs=" + std::to_string(failed_runs) + "\n";
  for (const auto& name : order) {
    agg.metrics_text += "sweep_violations." + name + "=" + std::to_string(violations[name]) + "\n";
  }
  for (const auto& [o, n] : outcomes) agg.metrics_text += "sweep_outcome." + o + "=" + std::to_string(n) + "\n";
  return agg;
}

RunResult run(const Scenario& s) { return s.config.sweep > 0 ? run_sweep(s) : run_single(s); }

std::vector<AttestBenchRow> bench_attest(std::size_t owners, const std::vector<std::size_t>& workers) {
  if (owners == 0) throw Error(ErrorCode::kInvalidArgument, "bench needs at least one owner");
  std::vector<AttestBenchRow> rows;
  for (auto w : workers) {
    if (w == 0) throw Error(ErrorCode::kInvalidArgument, "workers must be at least 1");
    Scenario s = named_scenario("honest-db");
    s.config.name = "bench-attest";
    s.config.owners = owners;
    s.config.workers = w;
    s.config.rows = 4;
    s.expect = Expectation::kNone;
    const auto res = run_single(s);
    rows.push_back({w, res.metrics.onboarding_makespan.value_or(Millis{0}),
                    res.metrics.onboarding_attestations});
  }
  return rows;
}

ParadigmRow compare_paradigms(std::size_t owners) {
  if (owners == 0) throw Error(ErrorCode::kInvalidArgument, "compare needs at least one owner");
  ParadigmRow row;
  row.owners = owners;
  for (const char* name : {"honest-ida", "honest-db"}) {
    Scenario s = named_scenario(name);
    s.config.owners = owners;
    s.config.rows = 8;
    const auto res = run_single(s);
    const bool done = res.outcome == "completed";
    if (s.config.paradigm == protocol::Paradigm::kIda) {
      row.ida_flow_calls = res.metrics.flow_calls;
      row.ida_completed = done;
    } else {
      row.db_flow_calls = res.metrics.flow_calls;
      row.db_completed = done;
      auto count = [&](const char* fn) {
        auto it = res.metrics.calls.find(fn);
        return it == res.metrics.calls.end() ? 0 : it->second;
      };
      row.db_setup_calls = count("Register") + count("Confirm");
    }
  }
  return row;
}

}  // namespace dm::harness
