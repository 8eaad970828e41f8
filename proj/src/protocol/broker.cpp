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

#include "protocol/broker.hpp"

#include "contracts/market_contracts.hpp"
#include "protocol/attest.hpp"
#include "protocol/owner.hpp"

namespace dm::protocol {

Broker::Broker(World& world)
    : Actor(world, "db", "db-host"),
      rng_(world.fork("db")),
      account_(world, *this, rng_, 0),
      keystore_(world.next_enclave_instance(), "db-host", world.manifest().at("broker-keystore"),
                rng_.fork("keystore"), world.ias().public_key()) {
  world.track(&keystore_);
}

void Broker::start() {
  contracts::BrokerConfig cfg;
  cfg.operations = {world_.manifest().measurement("column-stats")};
  cfg.request_timeout = world_.config().timeout;
  account_.submit(ledger::Deploy{}, contracts::calls::deploy_data_broker(cfg));
  log("s2:publish", {{"kind", "data-broker"}, {"instance", std::to_string(keystore_.instance())}});
}

void Broker::on_halt() {
  keystore_.halt();
  log("halted", {{"instance", std::to_string(keystore_.instance())},
                 {"keys", std::to_string(keystore_.key_store_size())}});
}

void Broker::on_message(const sim::Envelope& m) {
  try {
    if (m.cls == "challenge") {
      serve_challenge(world_, name(), keystore_, m.from, Challenge::parse(m.payload), "s1");
    } else if (m.cls == "hello") {
      auto hello = tee::ChannelHello::parse(m.payload);
      keystore_.accept_channel(hello);
      log("s1:channel", {{"peer", m.from},
                         {"instance", std::to_string(keystore_.instance())},
                         {"report", short_digest(hello.report.digest())},
                         {"measurement", short_digest(hello.report.measurement)}});
      deliver_pending();
    } else if (m.cls == "provision") {
      pending_frames_.push_back(m.payload);
      deliver_pending();
    } else if (m.cls == "quote") {
      on_quote(m);
    } else if (m.cls == "key-slip") {
      on_slip(m);
    }
  } catch (const Error& e) {
    log("drop-message", {{"cls", m.cls}, {"from", m.from}, {"code", std::string(to_string(e.code()))}});
  }
}

void Broker::deliver_pending() {
  std::vector<Bytes> keep;
  for (auto& frame : pending_frames_) {
    try {
      keystore_.deliver(frame);
      log("s1:stored", {{"channel", tee::ChannelEndpoint::frame_channel(frame)}});
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kChannelClosed && !keystore_.halted()) {
        keep.push_back(std::move(frame));
      } else {
        log("s1:provision-rejected", {{"code", std::string(to_string(e.code()))}});
      }
    }
  }
  pending_frames_ = std::move(keep);
}

void Broker::on_quote(const sim::Envelope& m) {
  auto reply = AttestReply::parse(m.payload);
  auto it = challenges_.find(reply.nonce);
  if (it == challenges_.end() || m.from != "cee") {
    log("unsolicited-quote", {{"from", m.from}});
    return;
  }
  const auto binding = it->second;
  challenges_.erase(it);
  const auto* rec = world_.record(binding);
  if (!rec) return;
  auto verified = verify_reply(world_, name(), reply, reply.nonce, rec->op, "3");
  if (verified.code != ErrorCode::kOk) return;

  const auto id = name() + "#" + binding_label(binding);
  auto hello = keystore_.connect(id, verified.report, reply.nonce, rec->op);
  send(m.from, "hello", hello.serialize());
  std::vector<std::string> descriptors;
  for (auto owner : rec->target_owners) descriptors.push_back(descriptor_for(owner));
  try {
    auto frames = keystore_.forward_keys(id, descriptors);
    for (auto& f : frames) send(m.from, "provision", std::move(f), true);
    log("4:provision", {{"to", m.from},
                        {"binding", binding_label(binding)},
                        {"keys", std::to_string(descriptors.size())}});
  } catch (const Error& e) {
    log("4:provision-failed", {{"binding", binding_label(binding)},
                               {"code", std::string(to_string(e.code()))}});
  }
}

void Broker::on_slip(const sim::Envelope& m) {
  auto slip = keystore_.deliver(m.payload);
  if (!slip || !contract_ || slip->binding.contract != *contract_) {
    log("drop-message", {{"cls", m.cls}, {"reason", "foreign-binding"}});
    return;
  }
  const auto label = binding_label(slip->binding);
  slips_.insert_or_assign(label, *slip);
  log("6:slip-held", {{"binding", label}});
  if (world_.config().broker_mode == BrokerMode::kEarlyComplete && !released_.count(label)) {
    released_.insert(label);
    account_.submit(slip->binding.contract,
                    contracts::calls::complete_transaction(slip->binding.idx, view(slip->share)), 0,
                    true);
    log("8:release", {{"binding", label}, {"mode", "early-complete"},
                      {"endpoints", std::to_string(world_.endpoint_count())}});
    return;
  }
  try_release(slip->binding);
}

void Broker::on_chain(std::span<const ledger::Receipt> receipts) {
  for (const auto& r : receipts) {
    if (!r.ok()) continue;
    if (r.created && r.tx.sender == account_.id() &&
        r.tx.function == contracts::DataBrokerContract::kKind) {
      contract_ = *r.created;
    }
    if (!contract_ || r.tx.target != ledger::Target{*contract_}) continue;
    if (r.tx.function == "Register") {
      registered_.insert(r.tx.sender);
    } else if (auto idx = contracts::calls::record_index(r)) {
      tee::Binding b{*contract_, *idx};
      auto nonce = fresh_nonce(rng_);
      challenges_[nonce] = b;
      send("cee", "challenge", Challenge{b, nonce}.serialize());
      log("3:challenge", {{"to", "cee"}, {"nonce", short_digest(nonce)}, {"binding", binding_label(b)}});
    } else if (r.tx.function == "ComputationComplete") {
      ByteReader args(r.tx.args);
      try_release(tee::Binding{*contract_, args.u64()});
    }
  }
  try_confirm();
}

void Broker::try_confirm() {
  if (confirm_sent_ || !contract_ || registered_.size() < world_.config().owners) return;
  confirm_sent_ = true;
  std::vector<AccountId> passing;
  for (auto owner : registered_) {
    auto name = world_.actor_of(owner).value_or("");
    std::size_t index = 0;
    if (name.rfind("owner-", 0) == 0) index = std::stoul(name.substr(6));
    const bool pass = !world_.config().quality_rejects.count(index);
    log("s2:quality", {{"owner", account_label(owner)}, {"result", pass ? "pass" : "reject"}});
    if (pass) passing.push_back(owner);
  }
  if (passing.empty()) return;
  account_.submit(*contract_, contracts::calls::confirm(passing));
  log("s2:confirm", {{"owners", std::to_string(passing.size())}});
}

void Broker::try_release(const tee::Binding& b) {
  const auto label = binding_label(b);
  auto slip = slips_.find(label);
  const auto* rec = world_.record(b);
  if (slip == slips_.end() || !rec || released_.count(label)) return;
  if (rec->status != contracts::RecordStatus::kWaitComplete || !rec->result_key_hash) return;
  released_.insert(label);
  if (world_.config().broker_mode == BrokerMode::kWithhold) {
    log("8:withhold", {{"binding", label}});
    return;
  }
  if (crypto::hash(view(slip->second.share)) != *rec->result_key_hash) {
    log("8:refuse", {{"binding", label}, {"reason", "hash-mismatch"}});
    return;
  }
  if (!release_window_open(world_, *rec, now())) {
    log("8:refuse", {{"binding", label}, {"reason", "deadline"}});
    return;
  }
  account_.submit(b.contract, contracts::calls::complete_transaction(b.idx, view(slip->second.share)),
                  0, true);
  log("8:release", {{"binding", label}, {"endpoints", std::to_string(world_.endpoint_count())}});
}

}  // namespace dm::protocol
