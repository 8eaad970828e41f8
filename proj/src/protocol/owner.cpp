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

#include "protocol/owner.hpp"

#include "contracts/market_contracts.hpp"
#include "protocol/attest.hpp"

namespace dm::protocol {

bool release_window_open(const World& world, const contracts::UsageRecord& record, Millis now) {
  // A Cancel can finalize no earlier than request_time + timeout + 1.
  return now + world.ledger().config().finalization_delay <=
         record.request_time + world.config().timeout;
}

Owner::Owner(World& world, std::size_t index)
    : Actor(world, "owner-" + std::to_string(index), "owner-host-" + std::to_string(index)),
      index_(index),
      rng_(world.fork(name())),
      account_(world, *this, rng_, 0),
      data_key_(rng_.key(crypto::KeyRole::kData)),
      descriptor_(descriptor_for(account_.id())) {}

void Owner::start() {
  auto table_rng = rng_.fork("table");
  table_ = tee::generate_table(table_rng, world_.config().columns, world_.config().rows);
  crypto::AeadNonce n{};
  rng_.fill(n);
  auto capsule = tee::seal_capsule(data_key_, n, account_.id(), descriptor_,
                                   to_bytes(tee::render_csv(table_)));
  world_.store(capsule);
  log("s1:store", {{"descriptor", descriptor_},
                   {"bytes", std::to_string(capsule.body.body.size())}});

  if (world_.config().paradigm == Paradigm::kBroker) {
    challenge("db", std::nullopt, "s1");
    return;
  }
  contracts::Policy policy;
  policy.dataset = {descriptor_};
  policy.price = world_.config().price;
  policy.operation = world_.manifest().measurement("column-stats");
  policy.consumers = {world_.account_of("dc")};
  policy.request_timeout = world_.config().timeout;
  account_.submit(ledger::Deploy{}, contracts::calls::deploy_data_owner(policy));
  log("s2:publish", {{"kind", "data-owner"}, {"price", std::to_string(policy.price)}});
}

void Owner::challenge(const std::string& attestee, std::optional<tee::Binding> binding,
                      const std::string& phase) {
  auto nonce = fresh_nonce(rng_);
  pending_[nonce] = Pending{binding, attestee};
  send(attestee, "challenge", Challenge{binding, nonce}.serialize());
  sim::Fields f{{"to", attestee}, {"nonce", short_digest(nonce)}};
  if (binding) f.emplace_back("binding", binding_label(*binding));
  log(phase + ":challenge", std::move(f));
}

void Owner::on_message(const sim::Envelope& m) {
  try {
    if (m.cls == "quote") on_quote(m);
    else if (m.cls == "key-slip") on_slip(m);
  } catch (const Error& e) {
    log("drop-message", {{"cls", m.cls}, {"code", std::string(to_string(e.code()))}});
  }
}

void Owner::on_quote(const sim::Envelope& m) {
  auto reply = AttestReply::parse(m.payload);
  auto it = pending_.find(reply.nonce);
  if (it == pending_.end() || it->second.attestee != m.from) {
    log("unsolicited-quote", {{"from", m.from}});
    return;
  }
  const auto pending = it->second;
  pending_.erase(it);
  const bool onboarding = !pending.binding.has_value();
  const std::string phase = onboarding ? "s1" : "3";
  const auto expected = world_.manifest().measurement(onboarding ? "broker-keystore" : "column-stats");
  auto verified = verify_reply(world_, name(), reply, reply.nonce, expected, phase);
  if (verified.code != ErrorCode::kOk) return;

  crypto::KeyAgreement kx(rng_.secret_seed());
  const std::string id =
      name() + "#" + (pending.binding ? binding_label(*pending.binding) : std::string("onboard"));
  auto ch = tee::connect_to_enclave(kx, verified.report, id);
  send(m.from, "hello", tee::ChannelHello{id, kx.public_key(), verified.report}.serialize());
  auto frame = ch.seal(tee::KeyProvision{descriptor_, data_key_.material()}.serialize());
  send(m.from, "provision", std::move(frame), true);
  channels_.insert_or_assign(id, std::move(ch));
  log(onboarding ? "s1:provision" : "4:provision", {{"to", m.from}, {"channel", id}});
  if (onboarding) {
    onboarded_ = true;
    try_register();
  }
}

void Owner::on_slip(const sim::Envelope& m) {
  auto id = tee::ChannelEndpoint::frame_channel(m.payload);
  auto ch = channels_.find(id);
  if (ch == channels_.end()) {
    log("drop-message", {{"cls", m.cls}, {"reason", "unknown-channel"}});
    return;
  }
  auto slip = tee::KeySlip::parse(ch->second.open(m.payload));
  if (!contract_ || slip.binding.contract != *contract_) {
    log("drop-message", {{"cls", m.cls}, {"reason", "foreign-binding"}});
    return;
  }
  const auto label = binding_label(slip.binding);
  slips_.insert_or_assign(label, slip);
  log("6:slip-held", {{"binding", label}});
  try_release(slip.binding);
}

void Owner::on_chain(std::span<const ledger::Receipt> receipts) {
  for (const auto& r : receipts) {
    if (!r.ok()) continue;
    if (r.created && r.tx.function == contracts::DataBrokerContract::kKind) {
      broker_contract_ = *r.created;
    }
    if (r.created && r.tx.sender == account_.id() &&
        r.tx.function == contracts::DataOwnerContract::kKind) {
      contract_ = *r.created;
    }
    if (!contract_ || r.tx.target != ledger::Target{*contract_}) continue;
    if (auto idx = contracts::calls::record_index(r)) {
      challenge("cee", tee::Binding{*contract_, *idx}, "3");
    } else if (r.tx.function == "ComputationComplete") {
      ByteReader args(r.tx.args);
      try_release(tee::Binding{*contract_, args.u64()});
    }
  }
  try_register();
}

void Owner::try_register() {
  if (registered_ || !onboarded_ || !broker_contract_) return;
  registered_ = true;
  const auto op = world_.manifest().measurement("column-stats");
  account_.submit(*broker_contract_,
                  contracts::calls::register_owner(op, world_.account_of("dc"),
                                                   world_.config().price));
  log("s2:register", {{"contract", contract_label(*broker_contract_)},
                      {"price", std::to_string(world_.config().price)}});
}

void Owner::try_release(const tee::Binding& b) {
  const auto label = binding_label(b);
  auto slip = slips_.find(label);
  const auto* rec = world_.record(b);
  if (slip == slips_.end() || !rec || released_.count(label)) return;
  if (rec->status != contracts::RecordStatus::kWaitComplete || !rec->result_key_hash) return;
  released_.insert(label);
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
