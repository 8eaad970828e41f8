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

#include "protocol/world.hpp"

#include <sstream>

#include "common/error.hpp"
#include "contracts/market_contracts.hpp"
#include "contracts/usage_contract.hpp"

namespace dm::protocol {

std::string_view to_string(Paradigm p) { return p == Paradigm::kIda ? "ida" : "db"; }

std::string_view to_string(BrokerMode m) {
  switch (m) {
    case BrokerMode::kHonest: return "honest";
    case BrokerMode::kWithhold: return "withhold";
    case BrokerMode::kEarlyComplete: return "early-complete";
  }
  return "?";
}

std::string endpoint_name(std::size_t index) { return "ledger-" + std::to_string(index); }

std::string short_digest(const crypto::Digest& d) { return d.hex().substr(0, 16); }

std::string descriptor_for(AccountId owner) { return account_label(owner) + "/vitals"; }

crypto::Digest endpoint_transcript(const std::string& actor, std::size_t endpoint) {
  return crypto::hash_parts({to_bytes("ledger-endpoint/v1"), to_bytes(actor),
                             to_bytes(std::to_string(endpoint))});
}

// ---- Actor ----

Actor::Actor(World& world, std::string name, std::string host)
    : world_(world), name_(std::move(name)), host_(std::move(host)) {}

void Actor::send(const std::string& to, std::string cls, Bytes payload, bool confidential) {
  world_.net().send(sim::Envelope{0, name_, to, std::move(cls), confidential, std::move(payload)});
}

void Actor::log(std::string step, sim::Fields fields) {
  world_.log(name_, std::move(step), std::move(fields));
}

void Actor::timer(Millis at, std::function<void()> fn) {
  world_.scheduler().at(at, sim::EventKind::kActorWakeup, [this, fn = std::move(fn)] {
    if (!halted()) fn();
  });
}

bool Actor::halted() const { return world_.net().halted(host_); }

Millis Actor::now() const { return world_.now(); }

// ---- ChainAccount ----

ChainAccount::ChainAccount(World& world, const Actor& actor, crypto::Drbg& rng, Amount genesis)
    : world_(world), actor_(actor), key_(rng.secret_seed()), kx_(rng.secret_seed()) {
  id_ = world_.ledger().create_account(key_.public_key(), genesis);
  world_.register_tx_key(actor_.name(), kx_.public_key());
  world_.register_account(actor_.name(), id_);
  world_.log("setup", "account", {{"actor", actor_.name()},
                                  {"account", account_label(id_)},
                                  {"genesis", std::to_string(genesis)}});
  for (std::size_t k = 0; k < world_.endpoint_count(); ++k) {
    auto shared = kx_.shared_secret(world_.endpoint(k).public_key());
    channels_.emplace_back(
        endpoint_name(k),
        crypto::derive_channel_key(view(shared), endpoint_transcript(actor_.name(), k)), true);
  }
}

crypto::Digest ChainAccount::submit(const ledger::Target& target,
                                    const contracts::calls::Call& call, Amount value,
                                    bool broadcast) {
  auto tx = ledger::make_transaction(key_, id_, target, call.function, call.args, value, ++nonce_);
  const auto wire = tx.serialize();
  const std::size_t count = broadcast ? channels_.size() : 1;
  for (std::size_t k = 0; k < count; ++k) {
    world_.net().send(sim::Envelope{0, actor_.name(), endpoint_name(k), "ledger-tx:" + call.function,
                                    false, channels_[k].seal(wire)});
  }
  return tx.id();
}

// ---- LedgerEndpoint ----

LedgerEndpoint::LedgerEndpoint(World& world, std::size_t index, crypto::Drbg rng)
    : Actor(world, endpoint_name(index), endpoint_name(index)),
      index_(index),
      kx_(rng.secret_seed()) {}

tee::ChannelEndpoint& LedgerEndpoint::channel_for(const std::string& actor) {
  auto it = channels_.find(actor);
  if (it == channels_.end()) {
    auto shared = kx_.shared_secret(world_.tx_key(actor));
    it = channels_
             .emplace(actor, tee::ChannelEndpoint(
                                 name(),
                                 crypto::derive_channel_key(view(shared),
                                                            endpoint_transcript(actor, index_)),
                                 false))
             .first;
  }
  return it->second;
}

void LedgerEndpoint::on_message(const sim::Envelope& m) {
  ledger::SignedTransaction tx;
  try {
    tx = ledger::SignedTransaction::parse(channel_for(m.from).open(m.payload));
  } catch (const Error& e) {
    log("reject", {{"from", m.from}, {"code", std::string(to_string(e.code()))}});
    return;
  }
  world_.sync_ledger();
  try {
    auto ticket = world_.ledger().submit_tx(tx);
    log("accept", {{"tx", short_digest(tx.id())},
                   {"from", m.from},
                   {"fn", tx.function},
                   {"due", std::to_string(ticket.due.count())}});
    world_.schedule_tick(ticket.due);
  } catch (const Error& e) {
    log("reject", {{"tx", short_digest(tx.id())},
                   {"from", m.from},
                   {"fn", tx.function},
                   {"code", std::string(to_string(e.code()))}});
  }
}

// ---- World ----

World::World(ScenarioConfig config)
    : config_(std::move(config)),
      rng_(config_.seed),
      net_(scheduler_, transcript_, config_.adversary, config_.latency, config_.reorder_window),
      ledger_(config_.ledger),
      ias_(rng_.fork("ias").secret_seed(), config_.ias),
      manifest_(tee::default_manifest()) {
  contracts::register_market_contracts(ledger_);
  ias_.set_reachable(config_.ias_reachable);
  for (std::size_t k = 0; k < config_.endpoints; ++k) {
    endpoints_.push_back(&add<LedgerEndpoint>(k, rng_.fork(endpoint_name(k))));
  }
  net_.on_halt([this](const std::string& host) {
    for (auto& a : actors_) {
      if (a->host() == host) a->on_halt();
    }
  });
  arm_halts();
}

void World::log(const std::string& actor, std::string step, sim::Fields fields) {
  transcript_.add(now(), actor, std::move(step), std::move(fields));
}

void World::attach(std::unique_ptr<Actor> actor) {
  Actor* raw = actor.get();
  if (find(raw->name())) throw Error(ErrorCode::kInvalidArgument, "duplicate actor " + raw->name());
  net_.attach(raw->name(), raw->host(), [raw](const sim::Envelope& m) { raw->on_message(m); });
  actors_.push_back(std::move(actor));
}

Actor* World::find(const std::string& name) const {
  for (const auto& a : actors_) {
    if (a->name() == name) return a.get();
  }
  return nullptr;
}

void World::store(const tee::DataCapsule& capsule) {
  storage_[capsule.descriptor] = capsule.serialize();
}

std::optional<tee::DataCapsule> World::fetch(const std::string& descriptor) const {
  auto it = storage_.find(descriptor);
  if (it == storage_.end()) return std::nullopt;
  return tee::DataCapsule::parse(it->second);
}

void World::register_tx_key(const std::string& actor, const crypto::PublicKey& key) {
  tx_keys_[actor] = key;
}

const crypto::PublicKey& World::tx_key(const std::string& actor) const {
  auto it = tx_keys_.find(actor);
  if (it == tx_keys_.end()) throw Error(ErrorCode::kUnknownAccount, "no ledger key for " + actor);
  return it->second;
}

void World::register_account(const std::string& actor, AccountId id) { accounts_[actor] = id; }

AccountId World::account_of(const std::string& actor) const {
  auto it = accounts_.find(actor);
  if (it == accounts_.end()) throw Error(ErrorCode::kUnknownAccount, "no account for " + actor);
  return it->second;
}

std::optional<std::string> World::actor_of(AccountId id) const {
  for (const auto& [name, acct] : accounts_) {
    if (acct == id) return name;
  }
  return std::nullopt;
}

const contracts::UsageRecord* World::record(const tee::Binding& binding) const {
  const auto* c = ledger_.contract_as<contracts::UsageContract>(binding.contract);
  return c ? c->record(binding.idx) : nullptr;
}

tee::Platform& World::platform(const std::string& host) {
  auto it = platforms_.find(host);
  if (it == platforms_.end()) {
    auto p = std::make_unique<tee::Platform>(host, rng_.fork("platform/" + host).secret_seed());
    ias_.register_platform(host, p->public_key());
    it = platforms_.emplace(host, std::move(p)).first;
  }
  return *it->second;
}

tee::AttestationPool& World::pool(const std::string& host) {
  auto it = pools_.find(host);
  if (it == pools_.end()) {
    it = pools_.emplace(host, tee::AttestationPool(config_.workers, config_.ias.service_time()))
             .first;
  }
  return it->second;
}

void World::sync_ledger() {
  if (now() <= ledger_.clock()) return;
  auto receipts = ledger_.advance(now() - ledger_.clock());
  if (!receipts.empty()) publish(receipts);
}

void World::schedule_tick(Millis due) {
  scheduler_.at(due, sim::EventKind::kLedgerAdvance, [this] { sync_ledger(); });
}

void World::publish(const std::vector<ledger::Receipt>& receipts) {
  for (const auto& r : receipts) {
    sim::Fields f{{"tx", short_digest(r.tx.id())},
                  {"sender", account_label(r.tx.sender)},
                  {"target", ledger::target_label(r.tx.target)},
                  {"fn", r.tx.function},
                  {"value", std::to_string(r.tx.value)},
                  {"submitted", std::to_string(r.submitted.count())},
                  {"status", r.ok() ? "success" : "reverted"}};
    if (!r.ok()) f.emplace_back("reason", std::string(to_string(r.reason)));
    if (auto idx = contracts::calls::record_index(r)) f.emplace_back("idx", std::to_string(*idx));
    if (r.created) f.emplace_back("created", contract_label(*r.created));
    log("chain", "finalize", std::move(f));

    const std::string contract =
        r.created ? contract_label(*r.created) : ledger::target_label(r.tx.target);
    for (const auto& ev : r.events) {
      std::istringstream in(ev);
      std::string kind;
      in >> kind;
      sim::Fields ef{{"tx", short_digest(r.tx.id())}, {"contract", contract}, {"event", kind}};
      for (std::string kv; in >> kv;) {
        auto eq = kv.find('=');
        ef.emplace_back(kv.substr(0, eq), eq == std::string::npos ? "" : kv.substr(eq + 1));
      }
      log("chain", "event", std::move(ef));
    }
  }
  for (const auto& a : actors_) {
    if (!net_.halted(a->host())) a->on_chain(receipts);
  }
}

void World::arm_halts() {
  for (const auto& h : config_.adversary.halts) {
    if (h.at) {
      const auto host = h.host;
      scheduler_.at(*h.at, sim::EventKind::kActorWakeup, [this, host] { net_.halt(host); });
      continue;
    }
    auto fired = std::make_shared<bool>(false);
    transcript_.observe([this, h, fired](const sim::Entry& e) {
      if (*fired || e.step != h.after_step) return;
      *fired = true;
      const auto host = h.host;
      scheduler_.after(h.offset, sim::EventKind::kActorWakeup, [this, host] { net_.halt(host); });
    });
  }
}

void World::run() {
  for (std::size_t i = 0; i < actors_.size(); ++i) actors_[i]->start();
  scheduler_.run();
  sync_ledger();
}

}  // namespace dm::protocol
