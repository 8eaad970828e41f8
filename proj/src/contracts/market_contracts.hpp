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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "contracts/records.hpp"
#include "contracts/usage_contract.hpp"
#include "ledger/ledger.hpp"

namespace dm::contracts {

// C_DO: one owner, one policy.
class DataOwnerContract final : public UsageContract {
 public:
  static constexpr std::string_view kKind = "data-owner";

  DataOwnerContract(AccountId owner, Policy policy);

  std::string_view kind() const override { return kKind; }
  std::unique_ptr<ledger::Contract> clone() const override {
    return std::make_unique<DataOwnerContract>(*this);
  }
  void call(ledger::CallContext& ctx, std::string_view function, ByteReader& args) override;
  std::string dump() const override;

  AccountId owner() const { return creator_; }
  const Policy& policy() const { return policy_; }

 private:
  void request(ledger::CallContext& ctx, const crypto::Digest& op,
               const std::vector<std::string>& data);
  void pay_out(ledger::CallContext& ctx, UsageRecord& record) override;

  Policy policy_;
};

struct OwnerEntry {
  AccountId owner;
  AccountId consumer;  // designated DC
  Amount price = 0;
  bool confirmed = false;
};

struct DataSource {
  std::vector<AccountId> owners;     // DOList
  std::vector<AccountId> consumers;  // DCList, aligned with owners
  Amount price = 0;
};

// C_DB: a broker bundling many owners per operation.
class DataBrokerContract final : public UsageContract {
 public:
  static constexpr std::string_view kKind = "data-broker";

  DataBrokerContract(AccountId broker, BrokerConfig config);

  std::string_view kind() const override { return kKind; }
  std::unique_ptr<ledger::Contract> clone() const override {
    return std::make_unique<DataBrokerContract>(*this);
  }
  void call(ledger::CallContext& ctx, std::string_view function, ByteReader& args) override;
  std::string dump() const override;

  AccountId broker() const { return creator_; }
  const BrokerConfig& config() const { return config_; }
  bool offers(const crypto::Digest& op) const;
  const OwnerEntry* entry(AccountId owner, const crypto::Digest& op) const;
  const DataSource* source(const crypto::Digest& op) const;
  const std::map<std::pair<AccountId, crypto::Digest>, OwnerEntry>& owner_table() const {
    return owners_;
  }

 private:
  void register_owner(ledger::CallContext& ctx, const crypto::Digest& op, AccountId consumer,
                      Amount price);
  void confirm(ledger::CallContext& ctx, const std::vector<AccountId>& owners);
  void request(ledger::CallContext& ctx, const crypto::Digest& op,
               const std::vector<AccountId>& targets);
  void pay_out(ledger::CallContext& ctx, UsageRecord& record) override;

  BrokerConfig config_;
  std::map<std::pair<AccountId, crypto::Digest>, OwnerEntry> owners_;
  std::map<crypto::Digest, DataSource> sources_;
};

// Installs both contract kinds as deploy targets.
void register_market_contracts(ledger::Ledger& ledger);

}  // namespace dm::contracts
