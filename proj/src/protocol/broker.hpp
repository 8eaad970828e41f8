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
#include <vector>

#include "protocol/wire.hpp"
#include "protocol/world.hpp"

namespace dm::protocol {

// Data broker with its key-store enclave on db-host.
class Broker final : public Actor {
 public:
  explicit Broker(World& world);

  AccountId account() const { return account_.id(); }
  std::optional<ContractId> contract() const { return contract_; }
  const tee::Enclave& key_store() const { return keystore_; }

  void start() override;
  void on_message(const sim::Envelope& m) override;
  void on_chain(std::span<const ledger::Receipt> receipts) override;
  void on_halt() override;

 private:
  void on_quote(const sim::Envelope& m);
  void on_slip(const sim::Envelope& m);
  void deliver_pending();
  void try_confirm();
  void try_release(const tee::Binding& b);

  crypto::Drbg rng_;
  ChainAccount account_;
  tee::Enclave keystore_;
  std::optional<ContractId> contract_;

  std::set<AccountId> registered_;
  bool confirm_sent_ = false;
  std::vector<Bytes> pending_frames_;  // owner frames that beat their hello
  std::map<crypto::Digest, tee::Binding> challenges_;
  std::map<std::string, tee::KeySlip> slips_;
  std::set<std::string> released_;
};

}  // namespace dm::protocol
