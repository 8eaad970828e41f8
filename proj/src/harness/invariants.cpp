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

#include "harness/invariants.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "harness/metrics.hpp"

namespace dm::harness {
namespace {

using contracts::RecordStatus;

std::string label(const tee::Binding& b) {
  return contract_label(b.contract) + "." + std::to_string(b.idx);
}

// "c0.0" of a chain event line, empty if it carries no record index.
std::string str(const sim::Entry& e, std::string_view key) {
  return std::string(e.get(key).value_or(""));
}

std::string event_record(const sim::Entry& e) {
  auto c = e.get("contract");
  auto i = e.get("idx");
  return c && i ? std::string(*c) + "." + std::string(*i) : std::string();
}

bool is_event(const sim::Entry& e, std::string_view kind) {
  return e.actor == "chain" && e.step == "event" && e.get("event") == kind;
}

InvariantResult fail(InvariantResult r, std::string detail, std::vector<std::string> slice = {}) {
  r.pass = false;
  r.detail = std::move(detail);
  r.slice = std::move(slice);
  return r;
}

bool seen_anywhere(const Evidence& ev, ByteView needle, const std::string& transcript_text) {
  if (needle.empty()) return false;
  for (const auto& v : ev.visible) {
    if (contains(v, needle)) return true;
  }
  return contains(to_bytes(transcript_text), needle);
}

}  // namespace

bool Verdict::passed() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
}

const InvariantResult* Verdict::find(std::string_view name) const {
  for (const auto& r : results) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

std::string Verdict::render() const {
  std::string out;
  for (const auto& r : results) {
    out += r.name + ": " + (r.pass ? "pass" : "FAIL " + r.detail) + "\n";
    for (const auto& line : r.slice) out += "  | " + line + "\n";
  }
  return out;
}

std::vector<std::string> slice_mentioning(const sim::Transcript& t, std::string_view needle,
                                          std::size_t limit) {
  std::vector<std::string> out;
  for (const auto& e : t.entries()) {
    bool hit = false;
    for (const auto& [k, v] : e.fields) hit |= v.find(needle) != std::string::npos;
    if (!hit) continue;
    out.push_back(e.render());
    if (out.size() >= limit) break;
  }
  return out;
}

InvariantResult check_atomicity(const Evidence& ev) {
  InvariantResult r{"atomicity"};
  const auto& entries = ev.transcript.entries();

  // Payment only through a COMPLETE record.
  for (const auto& e : entries) {
    if (!is_event(e, "payout")) continue;
    const auto rec = event_record(e);
    auto it = std::find_if(ev.records.begin(), ev.records.end(),
                           [&](const auto& s) { return label(s.binding) == rec; });
    if (it == ev.records.end() || it->status != RecordStatus::kComplete) {
      return fail(r, "payout on " + rec + " which is not COMPLETE", slice_mentioning(ev.transcript, rec));
    }
  }

  for (const auto& s : ev.records) {
    if (s.status != RecordStatus::kComplete) continue;
    const auto rec = label(s.binding);
    if (!s.key || !s.key_hash || crypto::hash(*s.key) != *s.key_hash) {
      return fail(r, rec + " is COMPLETE without a key matching its commitment",
                  slice_mentioning(ev.transcript, rec));
    }
    // Owners were paid: the DC must already hold the verified bundle that
    // this key opens.
    const auto& dcb = ev.dc_bindings;
    auto pos = std::find(dcb.begin(), dcb.end(), s.binding);
    if (pos == dcb.end()) continue;  // not a DC flow record
    const auto i = static_cast<std::size_t>(pos - dcb.begin());
    if (!ev.dc_bundle || i >= ev.dc_bundle->key_hashes.size() ||
        ev.dc_bundle->key_hashes[i] != *s.key_hash) {
      return fail(r, "owners paid on " + rec + " but the DC holds no verified result for that key",
                  slice_mentioning(ev.transcript, rec));
    }
    const sim::Entry* verified = nullptr;
    const sim::Entry* completed = nullptr;
    for (const auto& e : entries) {
      if (!verified && e.actor == "dc" && e.step == "7:verified") verified = &e;
      if (!completed && is_event(e, "complete") && event_record(e) == rec) completed = &e;
    }
    if (!verified || !completed || verified > completed) {
      return fail(r, "key for " + rec + " released before the DC verified its result",
                  slice_mentioning(ev.transcript, rec));
    }
  }

  if (ev.dc_plaintext) {
    for (const auto& b : ev.dc_bindings) {
      const auto* s = ev.record(b);
      if (!s || s->status != RecordStatus::kComplete) {
        return fail(r, "DC decrypted but " + label(b) + " is not COMPLETE",
                    slice_mentioning(ev.transcript, label(b)));
      }
    }
  }

  // Every share on chain: the on-chain keys must open what the DC holds.
  if (ev.dc_bundle && !ev.dc_bindings.empty()) {
    std::vector<crypto::KeyMaterial> shares;
    for (const auto& b : ev.dc_bindings) {
      const auto* s = ev.record(b);
      if (!s || s->status != RecordStatus::kComplete || !s->key || s->key->size() != 32) break;
      crypto::KeyMaterial k{};
      std::copy(s->key->begin(), s->key->end(), k.begin());
      shares.push_back(k);
    }
    if (shares.size() == ev.dc_bindings.size()) {
      try {
        auto plain = tee::open_result(*ev.dc_bundle, shares);
        if (ev.dc_plaintext && plain != *ev.dc_plaintext) {
          return fail(r, "on-chain keys open a different result than the DC reports");
        }
      } catch (const Error& e) {
        return fail(r, std::string("on-chain keys do not open the DC's result: ") + e.what(),
                    slice_mentioning(ev.transcript, label(ev.dc_bindings.front())));
      }
    }
  }
  return r;
}

InvariantResult check_conservation(const Evidence& ev) {
  InvariantResult r{"conservation"};
  if (ev.total_supply != ev.minted) {
    return fail(r, "supply " + std::to_string(ev.total_supply) + " != minted " +
                       std::to_string(ev.minted));
  }
  const auto m = derive_metrics(ev.transcript);
  for (const auto& [acct, balance] : ev.balances) {
    if (balance < 0) return fail(r, acct + " has negative balance");
    auto g = m.genesis.find(acct);
    auto d = m.balance_delta.find(acct);
    const Amount expect = (g == m.genesis.end() ? 0 : g->second) +
                          (d == m.balance_delta.end() ? 0 : d->second);
    if (expect != balance) {
      return fail(r, acct + " balance " + std::to_string(balance) + " but transcript implies " +
                         std::to_string(expect),
                  slice_mentioning(ev.transcript, acct));
    }
  }
  return r;
}

InvariantResult check_key_confinement(const Evidence& ev) {
  InvariantResult r{"key-confinement"};
  const auto text = ev.transcript.render();
  for (std::size_t i = 0; i < ev.data_keys.size(); ++i) {
    const auto& k = ev.data_keys[i];
    if (seen_anywhere(ev, k, text) || seen_anywhere(ev, to_bytes(to_hex(k)), text)) {
      return fail(r, "K_data of owner " + std::to_string(i) + " is visible outside enclaves");
    }
  }
  return r;
}

InvariantResult check_plaintext_confinement(const Evidence& ev) {
  InvariantResult r{"plaintext-confinement"};
  const auto text = ev.transcript.render();
  for (std::size_t i = 0; i < ev.canaries.size(); ++i) {
    if (seen_anywhere(ev, to_bytes(ev.canaries[i]), text)) {
      return fail(r, "dataset canary of owner " + std::to_string(i) + " is visible",
                  slice_mentioning(ev.transcript, ev.canaries[i]));
    }
  }
  if (ev.dc_plaintext && seen_anywhere(ev, *ev.dc_plaintext, text)) {
    return fail(r, "the result plaintext is visible outside the DC");
  }
  return r;
}

InvariantResult check_sanitization(const Evidence& ev) {
  InvariantResult r{"sanitization"};
  const bool open_records = std::any_of(ev.records.begin(), ev.records.end(), [](const auto& s) {
    return !contracts::is_terminal(s.status);
  });
  for (const auto& e : ev.enclaves) {
    const auto id = std::to_string(e.instance);
    const bool must_be_clean =
        e.halted || e.sanitized || (e.program == "column-stats" && !open_records);
    if (must_be_clean && (e.keys != 0 || e.plaintext != 0 || !(e.sanitized || e.halted))) {
      return fail(r, "enclave " + id + " on " + e.host + " still holds " + std::to_string(e.keys) +
                         " keys and " + std::to_string(e.plaintext) + " plaintext buffers");
    }
  }
  for (const auto& e : ev.transcript.entries()) {
    if (e.step != "6:sanitized") continue;
    if (e.get("keys") != "0" || e.get("plaintext") != "0") {
      return fail(r, "sanitized enclave reported residual state", {e.render()});
    }
  }
  for (const auto& e : ev.transcript.entries()) {
    if (e.step != "5:execute") continue;
    const auto id = str(e, "instance");
    bool after = false;
    for (const auto& f : ev.transcript.entries()) {
      if (f.step == "6:sanitized" && f.get("instance") == id && f.time >= e.time) after = true;
    }
    if (!after) return fail(r, "enclave " + id + " executed but never sanitized", {e.render()});
  }
  return r;
}

InvariantResult check_step_ordering(const Evidence& ev) {
  InvariantResult r{"step-ordering"};
  const auto& entries = ev.transcript.entries();

  std::map<std::string, RecordStatus> status;
  std::map<std::string, std::size_t> committed_at;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (is_event(e, "record-created")) status[event_record(e)] = RecordStatus::kWaitComputation;
    if (is_event(e, "computation-complete")) committed_at.try_emplace(event_record(e), i);
    if (is_event(e, "status")) {
      const auto rec = event_record(e);
      auto to = contracts::parse_record_status(str(e, "status"));
      auto from = status.find(rec);
      if (!to || from == status.end() || !contracts::is_allowed_transition(from->second, *to)) {
        return fail(r, "illegal status change on " + rec, slice_mentioning(ev.transcript, rec));
      }
      from->second = *to;
    }
    if (is_event(e, "complete")) {
      const auto rec = event_record(e);
      auto c = committed_at.find(rec);
      if (c == committed_at.end() || entries[c->second].time >= e.time) {
        return fail(r, "CompleteTransaction on " + rec + " not strictly after ComputationComplete",
                    slice_mentioning(ev.transcript, rec));
      }
    }
  }

  // A channel into an enclave exists only after its peer accepted a pass
  // report for exactly that instance.
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.step != "3:channel" && e.step != "s1:channel") continue;
    const auto phase = e.step.substr(0, e.step.find(':'));
    const auto peer = str(e, "peer");
    const auto report = str(e, "report");
    bool attested = false;
    for (std::size_t j = 0; j < i && !attested; ++j) {
      const auto& a = entries[j];
      attested = a.actor == peer && a.step == phase + ":attest" && a.get("verdict") == "pass" &&
                 a.get("report") == report && a.get("measurement") == e.get("measurement");
    }
    if (!attested) {
      return fail(r, "channel from " + peer + " without a matching pass attestation", {e.render()});
    }
  }
  return r;
}

InvariantResult check_refund_safety(const Evidence& ev) {
  InvariantResult r{"refund-safety"};
  const auto m = derive_metrics(ev.transcript);
  const auto& entries = ev.transcript.entries();
  for (const auto& s : ev.records) {
    if (s.status != RecordStatus::kCanceled) continue;
    const auto rec = label(s.binding);
    Amount refunded = 0;
    for (const auto& e : entries) {
      if (event_record(e) != rec) continue;
      if (is_event(e, "payout")) {
        return fail(r, "canceled record " + rec + " paid an owner", slice_mentioning(ev.transcript, rec));
      }
      if (is_event(e, "refund")) refunded += std::stoll(str(e, "amount"));
    }
    auto esc = m.record_escrow.find(rec);
    if (esc == m.record_escrow.end() || refunded != esc->second || s.escrow != 0) {
      return fail(r, "canceled record " + rec + " refunded " + std::to_string(refunded) +
                         " of its deposit",
                  slice_mentioning(ev.transcript, rec));
    }
  }

  // No-loss abort: a DC flow that completed nothing leaves everyone whole.
  if (!ev.dc_bindings.empty()) {
    const bool none_complete = std::none_of(ev.dc_bindings.begin(), ev.dc_bindings.end(),
                                            [&](const auto& b) {
                                              const auto* s = ev.record(b);
                                              return s && s->status == RecordStatus::kComplete;
                                            });
    const bool all_canceled = std::all_of(ev.dc_bindings.begin(), ev.dc_bindings.end(),
                                          [&](const auto& b) {
                                            const auto* s = ev.record(b);
                                            return s && s->status == RecordStatus::kCanceled;
                                          });
    if (none_complete && all_canceled) {
      for (const auto& [acct, delta] : m.balance_delta) {
        if (delta != 0) {
          auto who = m.accounts.count(acct) ? m.accounts.at(acct) : acct;
          return fail(r, "aborted flow left " + who + " with net change " + std::to_string(delta),
                      slice_mentioning(ev.transcript, acct));
        }
      }
    }
  }
  return r;
}

Verdict check_invariants(const Evidence& ev) {
  Verdict v;
  v.add(check_atomicity(ev));
  v.add(check_conservation(ev));
  v.add(check_key_confinement(ev));
  v.add(check_plaintext_confinement(ev));
  v.add(check_sanitization(ev));
  v.add(check_step_ordering(ev));
  v.add(check_refund_safety(ev));
  return v;
}

}  // namespace dm::harness
