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

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "contracts/calls.hpp"
#include "crypto/drbg.hpp"
#include "ledger/ledger.hpp"
#include "protocol/config.hpp"
#include "sim/network.hpp"
#include "tee/channel.hpp"
#include "tee/enclave.hpp"
#include "tee/messages.hpp"
#include "tee/program.hpp"

namespace dm::protocol {

class World;

class Actor {
 public:
  Actor(World& world, std::string name, std::string host);
  virtual ~Actor() = default;
  Actor(const Actor&) = delete;
  Actor& operator=(const Actor&) = delete;

  const std::string& name() const { return name_; }
  const std::string& host() const { return host_; }

  virtual void start() {}
  virtual void on_message(const sim::Envelope&) {}
  virtual void on_chain(std::span<const ledger::Receipt>) {}
  virtual void on_halt() {}

 protected:
  void send(const std::string& to, std::string cls, Bytes payload, bool confidential = false);
  void log(std::string step, sim::Fields fields = {});
  // Fires only if this actor's host is still up.
  void timer(Millis at, std::function<void()> fn);
  bool halted() const;
  Millis now() const;

  World& world_;

 private:
  std::string name_;
  std::string host_;
};

// An actor's on-chain identity. Transactions go to ledger endpoints over
// per-endpoint sealed channels; a broadcast goes to every endpoint.
class ChainAccount {
 public:
  ChainAccount(World& world, const Actor& actor, crypto::Drbg& rng, Amount genesis);

  AccountId id() const { return id_; }
  crypto::Digest submit(const ledger::Target& target, const contracts::calls::Call& call,
                        Amount value = 0, bool broadcast = false);

 private:
  World& world_;
  const Actor& actor_;
  crypto::SigningKey key_;
  crypto::KeyAgreement kx_;
  AccountId id_;
  std::uint64_t nonce_ = 0;
  std::vector<tee::ChannelEndpoint> channels_;
};

// Gateway into the ledger. Holds nothing secret beyond its channel keys.
class LedgerEndpoint final : public Actor {
 public:
  LedgerEndpoint(World& world, std::size_t index, crypto::Drbg rng);

  std::size_t index() const { return index_; }
  const crypto::PublicKey& public_key() const { return kx_.public_key(); }
  void on_message(const sim::Envelope& m) override;

 private:
  tee::ChannelEndpoint& channel_for(const std::string& actor);

  std::size_t index_;
  crypto::KeyAgreement kx_;
  std::map<std::string, tee::ChannelEndpoint> channels_;
};

crypto::Digest endpoint_transcript(const std::string& actor, std::size_t endpoint);
std::string endpoint_name(std::size_t index);  // "ledger-0"
std::string short_digest(const crypto::Digest& d);  // first 16 hex chars
// Storage descriptor of an owner's dataset.
std::string descriptor_for(AccountId owner);

class World {
 public:
  explicit World(ScenarioConfig config);
  World(const World&) = delete;
  World& operator=(const World&) = delete;

  const ScenarioConfig& config() const { return config_; }
  crypto::Drbg fork(std::string_view label) const { return rng_.fork(label); }

  sim::Scheduler& scheduler() { return scheduler_; }
  sim::Transcript& transcript() { return transcript_; }
  const sim::Transcript& transcript() const { return transcript_; }
  sim::Network& net() { return net_; }
  const sim::Network& net() const { return net_; }
  ledger::Ledger& ledger() { return ledger_; }
  const ledger::Ledger& ledger() const { return ledger_; }
  tee::MockIas& ias() { return ias_; }
  const tee::ProgramManifest& manifest() const { return manifest_; }
  Millis now() const { return scheduler_.now(); }

  void log(const std::string& actor, std::string step, sim::Fields fields = {});

  template <class T, class... Args>
  T& add(Args&&... args) {
    auto owned = std::make_unique<T>(*this, std::forward<Args>(args)...);
    T& ref = *owned;
    attach(std::move(owned));
    return ref;
  }
  Actor* find(const std::string& name) const;
  const std::vector<std::unique_ptr<Actor>>& actors() const { return actors_; }

  // Untrusted cloud storage of encrypted datasets.
  void store(const tee::DataCapsule& capsule);
  std::optional<tee::DataCapsule> fetch(const std::string& descriptor) const;
  const std::map<std::string, Bytes>& storage() const { return storage_; }

  std::size_t endpoint_count() const { return endpoints_.size(); }
  LedgerEndpoint& endpoint(std::size_t k) { return *endpoints_.at(k); }
  void register_tx_key(const std::string& actor, const crypto::PublicKey& key);
  const crypto::PublicKey& tx_key(const std::string& actor) const;

  // Public directory of actor names and ledger accounts.
  void register_account(const std::string& actor, AccountId id);
  AccountId account_of(const std::string& actor) const;
  std::optional<std::string> actor_of(AccountId id) const;

  const contracts::UsageRecord* record(const tee::Binding& binding) const;

  tee::Platform& platform(const std::string& host);
  tee::AttestationPool& pool(const std::string& host);
  std::uint64_t next_enclave_instance() { return next_instance_++; }
  // Every enclave loaded in the run, for the sanitization check.
  void track(const tee::Enclave* enclave) { enclaves_.push_back(enclave); }
  const std::vector<const tee::Enclave*>& enclaves() const { return enclaves_; }

  // Brings the ledger clock to now and publishes what finalized.
  void sync_ledger();
  void schedule_tick(Millis due);

  void run();

 private:
  void attach(std::unique_ptr<Actor> actor);
  void publish(const std::vector<ledger::Receipt>& receipts);
  void arm_halts();

  ScenarioConfig config_;
  crypto::Drbg rng_;
  sim::Scheduler scheduler_;
  sim::Transcript transcript_;
  sim::Network net_;
  ledger::Ledger ledger_;
  tee::MockIas ias_;
  tee::ProgramManifest manifest_;
  std::vector<std::unique_ptr<Actor>> actors_;
  std::vector<LedgerEndpoint*> endpoints_;
  std::map<std::string, crypto::PublicKey> tx_keys_;
  std::map<std::string, AccountId> accounts_;
  std::map<std::string, Bytes> storage_;
  std::map<std::string, std::unique_ptr<tee::Platform>> platforms_;
  std::map<std::string, tee::AttestationPool> pools_;
  std::vector<const tee::Enclave*> enclaves_;
  std::uint64_t next_instance_ = 0;
};

}  // namespace dm::protocol
