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

#include <map>
#include <optional>
#include <set>
#include <string>

#include "protocol/wire.hpp"
#include "protocol/world.hpp"
#include "tee/workload.hpp"

namespace dm::protocol {

// Data owner. In the broker paradigm it onboards once with the broker's key
// store and registers with C_DB. In the iDA paradigm its agent publishes a
// C_DO, attests the CEE for each request and releases its key share.
class Owner final : public Actor {
 public:
  Owner(World& world, std::size_t index);

  std::size_t index() const { return index_; }
  AccountId account() const { return account_.id(); }
  const std::string& descriptor() const { return descriptor_; }
  const tee::Table& table() const { return table_; }
  // For confinement checks only.
  const crypto::SymmetricKey& data_key() const { return data_key_; }
  std::optional<ContractId> contract() const { return contract_; }

  void start() override;
  void on_message(const sim::Envelope& m) override;
  void on_chain(std::span<const ledger::Receipt> receipts) override;

 private:
  struct Pending {
    std::optional<tee::Binding> binding;
    std::string attestee;
  };

  void challenge(const std::string& attestee, std::optional<tee::Binding> binding,
                 const std::string& phase);
  void on_quote(const sim::Envelope& m);
  void on_slip(const sim::Envelope& m);
  void try_register();
  void try_release(const tee::Binding& b);

  std::size_t index_;
  crypto::Drbg rng_;
  ChainAccount account_;
  crypto::SymmetricKey data_key_;
  std::string descriptor_;
  tee::Table table_;

  std::map<crypto::Digest, Pending> pending_;
  std::map<std::string, tee::ChannelEndpoint> channels_;
  std::map<std::string, tee::KeySlip> slips_;  // by binding label
  std::set<std::string> released_;

  bool onboarded_ = false;
  bool registered_ = false;
  std::optional<ContractId> broker_contract_;
  std::optional<ContractId> contract_;
};

// Release guard shared by every key holder: the CompleteTransaction must
// finalize strictly before the record can be canceled.
bool release_window_open(const World& world, const contracts::UsageRecord& record, Millis now);

}  // namespace dm::protocol
