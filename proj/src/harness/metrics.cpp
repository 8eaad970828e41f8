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

#include "harness/metrics.hpp"

#include <algorithm>

namespace dm::harness {
namespace {

Amount amount_of(const sim::Entry& e, const char* key) {
  auto v = e.get(key);
  return v ? std::stoll(std::string(*v)) : 0;
}

std::string field(const sim::Entry& e, const char* key) { return std::string(e.get(key).value_or("")); }

}  // namespace

bool is_flow_call(std::string_view fn) {
  return fn == "Request" || fn == "ComputationComplete" || fn == "CompleteTransaction";
}

Metrics derive_metrics(const sim::Transcript& transcript) {
  Metrics m;
  std::optional<Millis> s1_first, s1_last, request_at, decrypt_at;
  for (const auto& e : transcript.entries()) {
    if (e.actor == "setup" && e.step == "account") {
      m.accounts[field(e, "account")] = field(e, "actor");
      m.genesis[field(e, "account")] = amount_of(e, "genesis");
      m.balance_delta.try_emplace(field(e, "account"), 0);
    } else if (e.step == "s1:attest-slot") {
      const Millis queued{amount_of(e, "queued")}, done{amount_of(e, "done")};
      s1_first = s1_first ? std::min(*s1_first, queued) : queued;
      s1_last = s1_last ? std::max(*s1_last, done) : done;
      ++m.onboarding_attestations;
    } else if (e.actor == "dc" && e.step == "1:request" && !request_at) {
      request_at = e.time;
    } else if (e.actor == "dc" && e.step == "10:decrypt" && !decrypt_at) {
      decrypt_at = e.time;
    } else if (e.actor == "chain" && e.step == "finalize") {
      ++m.finalized;
      if (field(e, "status") != "success") {
        ++m.reverted;
        continue;
      }
      const auto fn = field(e, "fn");
      ++m.calls[fn];
      if (is_flow_call(fn)) ++m.flow_calls;
      const Amount value = amount_of(e, "value");
      m.balance_delta[field(e, "sender")] -= value;
      const auto target = field(e, "target");
      if (!target.empty() && target[0] == 'a') m.balance_delta[target] += value;
    } else if (e.actor == "chain" && e.step == "event") {
      const auto kind = field(e, "event");
      const auto rec = field(e, "contract") + "." + field(e, "idx");
      if (kind == "payout" || kind == "refund") {
        m.balance_delta[field(e, "to")] += amount_of(e, "amount");
      } else if (kind == "request-refunded") {
        m.balance_delta[field(e, "dc")] += amount_of(e, "amount");
      } else if (kind == "record-created") {
        m.records[rec] = "WAIT_COMPUTATION";
        m.record_escrow[rec] = amount_of(e, "escrow");
      } else if (kind == "status") {
        m.records[rec] = field(e, "status");
      }
    }
  }
  if (s1_first) m.onboarding_makespan = *s1_last - *s1_first;
  if (request_at && decrypt_at) m.flow_runtime = *decrypt_at - *request_at;
  return m;
}

std::string Metrics::render() const {
  std::string out;
  auto line = [&](const std::string& k, const std::string& v) { out += k + "=" + v + "\n"; };
  if (onboarding_makespan) line("onboarding_makespan_ms", std::to_string(onboarding_makespan->count()));
  line("onboarding_attestations", std::to_string(onboarding_attestations));
  if (flow_runtime) line("flow_runtime_ms", std::to_string(flow_runtime->count()));
  line("flow_calls", std::to_string(flow_calls));
  line("finalized", std::to_string(finalized));
  line("reverted", std::to_string(reverted));
  for (const auto& [fn, n] : calls) line("calls." + fn, std::to_string(n));
  for (const auto& [acct, delta] : balance_delta) {
    auto who = accounts.find(acct);
    line("balance_delta." + (who == accounts.end() ? acct : who->second + "." + acct),
         std::to_string(delta));
  }
  for (const auto& [rec, status] : records) line("record." + rec, status);
  return out;
}

}  // namespace dm::harness
