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

#include "protocol/consumer.hpp"

#include <algorithm>

#include "contracts/market_contracts.hpp"
#include "protocol/attest.hpp"

namespace dm::protocol {

std::string_view to_string(FlowOutcome o) {
  switch (o) {
    case FlowOutcome::kNone: return "none";
    case FlowOutcome::kPending: return "pending";
    case FlowOutcome::kCompleted: return "completed";
    case FlowOutcome::kCanceled: return "canceled";
    case FlowOutcome::kStuck: return "stuck";
  }
  return "?";
}

Consumer::Consumer(World& world)
    : Actor(world, "dc", "dc-host"),
      rng_(world.fork("dc")),
      account_(world, *this, rng_, world.config().consumer_funds),
      op_(world.manifest().measurement("column-stats")) {}

FlowOutcome Consumer::outcome() const {
  if (!requested_) return FlowOutcome::kNone;
  if (plaintext_) return FlowOutcome::kCompleted;
  if (bindings_.empty()) return request_failed_ ? FlowOutcome::kCanceled : FlowOutcome::kPending;
  bool all_canceled = true;
  bool any_open = false;
  for (const auto& b : bindings_) {
    const auto* rec = world_.record(b);
    if (!rec) continue;
    all_canceled &= rec->status == contracts::RecordStatus::kCanceled;
    any_open |= !contracts::is_terminal(rec->status);
  }
  if (all_canceled) return FlowOutcome::kCanceled;
  return any_open ? FlowOutcome::kPending : FlowOutcome::kStuck;
}

void Consumer::on_chain(std::span<const ledger::Receipt> receipts) {
  bool confirmed = false;
  for (const auto& r : receipts) {
    if (!r.ok()) continue;
    if (r.created && r.tx.function == contracts::DataBrokerContract::kKind) {
      broker_contract_ = *r.created;
    }
    if (r.created && r.tx.function == contracts::DataOwnerContract::kKind) {
      const auto* c = world_.ledger().contract_as<contracts::DataOwnerContract>(*r.created);
      const auto& dcs = c->policy().consumers;
      if (std::find(dcs.begin(), dcs.end(), account_.id()) != dcs.end()) {
        owner_contracts_[*r.created] = c->owner();
      }
    }
    if (broker_contract_ && r.tx.target == ledger::Target{*broker_contract_} &&
        r.tx.function == "Confirm") {
      confirmed = true;
    }
  }
  on_request_receipts(receipts);
  if (!requested_) {
    if (world_.config().paradigm == Paradigm::kIda) maybe_request_ida();
    else if (confirmed) maybe_request_broker();
  }
  try_decrypt();
}

void Consumer::maybe_request_ida() {
  if (owner_contracts_.size() < world_.config().owners) return;
  requested_ = true;
  request_submitted_ = now();
  for (const auto& [contract, owner] : owner_contracts_) {
    const auto* c = world_.ledger().contract_as<contracts::DataOwnerContract>(contract);
    const std::vector<std::string> data{descriptor_for(owner)};
    const Amount value = world_.config().deposit.value_or(c->policy().price);
    auto tx = account_.submit(contract, contracts::calls::request_data(op_, data), value);
    request_txs_[tx] = Pending{contract, owner};
    log("1:request", {{"contract", contract_label(contract)}, {"value", std::to_string(value)}});
  }
}

void Consumer::maybe_request_broker() {
  const auto* c = world_.ledger().contract_as<contracts::DataBrokerContract>(*broker_contract_);
  const auto* ds = c ? c->source(op_) : nullptr;
  if (!ds || ds->owners.empty()) return;
  requested_ = true;
  request_submitted_ = now();
  const Amount value = world_.config().deposit.value_or(ds->price);
  auto tx = account_.submit(*broker_contract_, contracts::calls::request_owners(op_, ds->owners),
                            value);
  request_txs_[tx] = Pending{*broker_contract_, AccountId{}};
  owners_ = ds->owners;
  log("1:request", {{"contract", contract_label(*broker_contract_)},
                    {"owners", std::to_string(ds->owners.size())},
                    {"value", std::to_string(value)}});
}

void Consumer::on_request_receipts(std::span<const ledger::Receipt> receipts) {
  for (const auto& r : receipts) {
    auto it = request_txs_.find(r.tx.id());
    if (it == request_txs_.end()) continue;
    const auto pending = it->second;
    request_txs_.erase(it);
    ++requests_resolved_;
    auto idx = contracts::calls::record_index(r);
    if (!idx) {
      request_failed_ = true;
      log("1:request-refunded", {{"contract", contract_label(pending.contract)},
                                 {"status", r.status_label()}});
      continue;
    }
    tee::Binding b{pending.contract, *idx};
    bindings_.push_back(b);
    if (world_.config().paradigm == Paradigm::kIda) {
      releasers_.push_back(world_.actor_of(pending.owner).value_or("?"));
      owners_.push_back(pending.owner);
    } else {
      releasers_.push_back("db");
    }
    arm_cancel(b);
  }
  if (requested_ && request_txs_.empty() && !bindings_.empty() && !request_failed_ &&
      !compute_sent_) {
    start_compute();
  }
}

void Consumer::arm_cancel(const tee::Binding& b) {
  const auto* rec = world_.record(b);
  const Millis at = rec->request_time + world_.config().timeout + Millis{1};
  timer(std::max(at, now()), [this, b] {
    const auto* r = world_.record(b);
    if (!r || contracts::is_terminal(r->status)) return;
    account_.submit(b.contract, contracts::calls::cancel(b.idx));
    log("cancel", {{"binding", binding_label(b)}, {"status", std::string(contracts::to_string(r->status))}});
  });
}

void Consumer::start_compute() {
  compute_sent_ = true;
  nonce_ = fresh_nonce(rng_);
  ComputeRequest req;
  req.operation = "column-stats";
  req.bindings = bindings_;
  req.releasers = releasers_;
  req.owners = owners_;
  for (auto o : owners_) req.descriptors.push_back(descriptor_for(o));
  req.nonce = nonce_;
  send("cee", "compute", req.serialize());
  log("2:compute", {{"records", std::to_string(bindings_.size())},
                    {"owners", std::to_string(owners_.size())},
                    {"nonce", short_digest(nonce_)}});
}

void Consumer::on_message(const sim::Envelope& m) {
  try {
    if (m.cls == "quote") on_quote(m);
    else if (m.cls == "bundle") on_bundle(m);
  } catch (const Error& e) {
    log("drop-message", {{"cls", m.cls}, {"code", std::string(to_string(e.code()))}});
  }
}

void Consumer::on_quote(const sim::Envelope& m) {
  auto reply = AttestReply::parse(m.payload);
  if (m.from != "cee" || reply.nonce != nonce_ || channel_) {
    log("unsolicited-quote", {{"from", m.from}});
    return;
  }
  const auto* rec = world_.record(bindings_.front());
  auto verified = verify_reply(world_, name(), reply, nonce_, rec->op, "3");
  if (verified.code != ErrorCode::kOk) return;
  crypto::KeyAgreement kx(rng_.secret_seed());
  const auto id = name() + "#" + binding_label(bindings_.front());
  channel_ = tee::connect_to_enclave(kx, verified.report, id);
  send(m.from, "hello", tee::ChannelHello{id, kx.public_key(), verified.report}.serialize());
  log("3:hello", {{"to", m.from}, {"channel", id}});
}

void Consumer::on_bundle(const sim::Envelope& m) {
  if (!channel_ || bundle_) {
    log("7:reject", {{"reason", "unexpected"}});
    return;
  }
  tee::ResultBundle bundle;
  try {
    bundle = tee::ResultBundle::parse(channel_->open(m.payload));
  } catch (const Error& e) {
    log("7:reject", {{"reason", "channel"}, {"code", std::string(to_string(e.code()))}});
    return;
  }
  if (bundle.bindings != bindings_ || bundle.key_hashes.size() != bindings_.size()) {
    log("7:reject", {{"reason", "binding"}});
    return;
  }
  if (crypto::hash(bundle.result.serialize()) != bundle.result_hash) {
    log("7:reject", {{"reason", "result-hash"}});
    return;
  }
  log("7:verified", {{"result", short_digest(bundle.result_hash)}});
  for (std::size_t i = 0; i < bindings_.size(); ++i) {
    const auto& b = bindings_[i];
    account_.submit(b.contract, contracts::calls::computation_complete(b.idx, bundle.key_hashes[i]));
    log("7:commit", {{"binding", binding_label(b)}, {"krhash", short_digest(bundle.key_hashes[i])}});
  }
  bundle_ = std::move(bundle);
}

void Consumer::try_decrypt() {
  if (!bundle_ || plaintext_ || decrypt_failed_) return;
  std::vector<crypto::KeyMaterial> shares;
  for (const auto& b : bindings_) {
    const auto* rec = world_.record(b);
    if (!rec || rec->status != contracts::RecordStatus::kComplete || !rec->result_key) return;
    if (rec->result_key->size() != 32) {
      decrypt_failed_ = true;
      log("10:reject", {{"binding", binding_label(b)}, {"reason", "key-size"}});
      return;
    }
    crypto::KeyMaterial k{};
    std::copy(rec->result_key->begin(), rec->result_key->end(), k.begin());
    shares.push_back(k);
  }
  try {
    plaintext_ = tee::open_result(*bundle_, shares);
    decrypted_at_ = now();
    log("10:decrypt", {{"result", short_digest(crypto::hash(*plaintext_))},
                       {"bytes", std::to_string(plaintext_->size())}});
  } catch (const Error& e) {
    decrypt_failed_ = true;
    log("10:reject", {{"code", std::string(to_string(e.code()))}});
  }
}

}  // namespace dm::protocol
