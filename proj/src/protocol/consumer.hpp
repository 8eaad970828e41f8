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
#include <string>
#include <vector>

#include "protocol/wire.hpp"
#include "protocol/world.hpp"

namespace dm::protocol {

enum class FlowOutcome { kNone, kPending, kCompleted, kCanceled, kStuck };
std::string_view to_string(FlowOutcome o);

// Data consumer. Requests the computation, attests the CEE, verifies the
// result bundle, commits its key hashes and decrypts once every key share is
// on chain. Cancels records that outlive the timeout.
class Consumer final : public Actor {
 public:
  explicit Consumer(World& world);

  AccountId account() const { return account_.id(); }
  const std::vector<tee::Binding>& bindings() const { return bindings_; }
  const std::optional<tee::ResultBundle>& verified_bundle() const { return bundle_; }
  const std::optional<Bytes>& plaintext() const { return plaintext_; }
  std::optional<Millis> request_submitted() const { return request_submitted_; }
  std::optional<Millis> decrypted_at() const { return decrypted_at_; }
  FlowOutcome outcome() const;

  void on_message(const sim::Envelope& m) override;
  void on_chain(std::span<const ledger::Receipt> receipts) override;

 private:
  struct Pending {
    ContractId contract;
    AccountId owner;  // the C_DO's owner; unused for C_DB
  };

  void maybe_request_ida();
  void maybe_request_broker();
  void on_request_receipts(std::span<const ledger::Receipt> receipts);
  void start_compute();
  void arm_cancel(const tee::Binding& b);
  void on_quote(const sim::Envelope& m);
  void on_bundle(const sim::Envelope& m);
  void try_decrypt();

  crypto::Drbg rng_;
  ChainAccount account_;
  crypto::Digest op_;

  std::optional<ContractId> broker_contract_;
  std::map<ContractId, AccountId> owner_contracts_;
  bool requested_ = false;
  std::map<crypto::Digest, Pending> request_txs_;
  std::size_t requests_resolved_ = 0;
  bool request_failed_ = false;
  std::vector<tee::Binding> bindings_;
  std::vector<std::string> releasers_;
  std::vector<AccountId> owners_;

  bool compute_sent_ = false;
  crypto::Digest nonce_;
  std::optional<tee::ChannelEndpoint> channel_;
  std::optional<tee::ResultBundle> bundle_;
  std::optional<Bytes> plaintext_;
  bool decrypt_failed_ = false;
  std::optional<Millis> request_submitted_;
  std::optional<Millis> decrypted_at_;
};

}  // namespace dm::protocol
