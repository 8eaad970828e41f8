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

#include "contracts/market_contracts.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace dm::contracts {

using ledger::CallContext;
using ledger::revert;

namespace {

std::vector<std::string> read_strings(ByteReader& in) {
  std::vector<std::string> out(in.u32());
  for (auto& s : out) s = in.str();
  return out;
}

std::vector<AccountId> read_accounts(ByteReader& in) {
  std::vector<AccountId> out(in.u32());
  for (auto& a : out) a = AccountId{in.u32()};
  return out;
}

template <class T>
bool subset_of(const std::vector<T>& needles, const std::vector<T>& haystack) {
  return std::all_of(needles.begin(), needles.end(), [&](const T& n) {
    return std::find(haystack.begin(), haystack.end(), n) != haystack.end();
  });
}

}  // namespace

// ---------------------------------------------------------------- C_DO

DataOwnerContract::DataOwnerContract(AccountId owner, Policy policy)
    : UsageContract(owner, policy.request_timeout), policy_(std::move(policy)) {
  policy_.validate();
}

void DataOwnerContract::call(CallContext& ctx, std::string_view function, ByteReader& args) {
  if (function == "Request") {
    crypto::Digest op{args.fixed<32>()};
    auto data = read_strings(args);
    args.expect_done();
    request(ctx, op, data);
    return;
  }
  if (!dispatch_common(ctx, function, args)) revert(ErrorCode::kUnknownFunction);
}

void DataOwnerContract::request(CallContext& ctx, const crypto::Digest& op,
                                const std::vector<std::string>& data) {
  if (op != policy_.operation) return refund_request(ctx, "operation");
  if (std::find(policy_.consumers.begin(), policy_.consumers.end(), ctx.sender()) ==
      policy_.consumers.end()) {
    return refund_request(ctx, "consumer");
  }
  if (!subset_of(data, policy_.dataset)) return refund_request(ctx, "dataset");
  if (ctx.value() < policy_.price) return refund_request(ctx, "deposit");
  auto& r = open_record(ctx, op);
  r.data = data;
}

void DataOwnerContract::pay_out(CallContext& ctx, UsageRecord& record) {
  ctx.transfer(creator_, record.escrow);
  ctx.emit("payout idx=" + std::to_string(record.idx) + " to=" + account_label(creator_) +
           " amount=" + std::to_string(record.escrow));
  record.escrow = 0;
}

std::string DataOwnerContract::dump() const {
  std::ostringstream out;
  out << "contract kind=" << kKind << " owner=" << account_label(creator_)
      << " destroyed=" << (destroyed_ ? 1 : 0) << "\n";
  out << "policy price=" << policy_.price << " op=" << policy_.operation.hex()
      << " timeout_ms=" << policy_.request_timeout.count() << " dataset=";
  for (std::size_t i = 0; i < policy_.dataset.size(); ++i) {
    out << (i ? "," : "") << policy_.dataset[i];
  }
  out << " consumers=";
  for (std::size_t i = 0; i < policy_.consumers.size(); ++i) {
    out << (i ? "," : "") << account_label(policy_.consumers[i]);
  }
  out << "\n" << dump_records();
  return out.str();
}

// ---------------------------------------------------------------- C_DB

DataBrokerContract::DataBrokerContract(AccountId broker, BrokerConfig config)
    : UsageContract(broker, config.request_timeout), config_(std::move(config)) {
  config_.validate();
}

bool DataBrokerContract::offers(const crypto::Digest& op) const {
  return std::find(config_.operations.begin(), config_.operations.end(), op) !=
         config_.operations.end();
}

const OwnerEntry* DataBrokerContract::entry(AccountId owner, const crypto::Digest& op) const {
  auto it = owners_.find({owner, op});
  return it == owners_.end() ? nullptr : &it->second;
}

const DataSource* DataBrokerContract::source(const crypto::Digest& op) const {
  auto it = sources_.find(op);
  return it == sources_.end() ? nullptr : &it->second;
}

void DataBrokerContract::call(CallContext& ctx, std::string_view function, ByteReader& args) {
  if (function == "Register") {
    crypto::Digest op{args.fixed<32>()};
    AccountId dc{args.u32()};
    Amount price = args.i64();
    args.expect_done();
    if (ctx.value() != 0) revert(ErrorCode::kInvalidArgument, "Register takes no value");
    register_owner(ctx, op, dc, price);
  } else if (function == "Confirm") {
    auto owners = read_accounts(args);
    args.expect_done();
    if (ctx.value() != 0) revert(ErrorCode::kInvalidArgument, "Confirm takes no value");
    confirm(ctx, owners);
  } else if (function == "Request") {
    crypto::Digest op{args.fixed<32>()};
    auto targets = read_accounts(args);
    args.expect_done();
    request(ctx, op, targets);
  } else if (!dispatch_common(ctx, function, args)) {
    revert(ErrorCode::kUnknownFunction);
  }
}

void DataBrokerContract::register_owner(CallContext& ctx, const crypto::Digest& op,
                                        AccountId consumer, Amount price) {
  if (price < 0) revert(ErrorCode::kInvalidArgument, "negative price");
  auto [it, inserted] = owners_.try_emplace({ctx.sender(), op});
  auto& e = it->second;
  if (!inserted && e.confirmed) {
    // Keep DS[op] consistent with the updated entry.
    auto& ds = sources_.at(op);
    auto pos = std::find(ds.owners.begin(), ds.owners.end(), ctx.sender()) - ds.owners.begin();
    ds.consumers[pos] = consumer;
    ds.price += price - e.price;
  }
  e.owner = ctx.sender();
  e.consumer = consumer;
  e.price = price;
  ctx.emit(std::string(inserted ? "registered" : "register-updated") +
           " owner=" + account_label(ctx.sender()) + " op=" + op.hex() +
           " dc=" + account_label(consumer) + " price=" + std::to_string(price));
}

void DataBrokerContract::confirm(CallContext& ctx, const std::vector<AccountId>& owners) {
  if (ctx.sender() != creator_) revert(ErrorCode::kNotBroker);
  for (auto owner : owners) {
    for (const auto& op : config_.operations) {
      auto it = owners_.find({owner, op});
      if (it == owners_.end() || it->second.confirmed) continue;
      auto& ds = sources_[op];
      it->second.confirmed = true;
      ds.owners.push_back(owner);
      ds.consumers.push_back(it->second.consumer);
      ds.price += it->second.price;
      ctx.emit("confirmed owner=" + account_label(owner) + " op=" + op.hex() +
               " price=" + std::to_string(it->second.price) +
               " total=" + std::to_string(ds.price));
    }
  }
}

void DataBrokerContract::request(CallContext& ctx, const crypto::Digest& op,
                                 const std::vector<AccountId>& targets) {
  if (!offers(op)) return refund_request(ctx, "operation");
  const auto* ds = source(op);
  if (ds == nullptr) return refund_request(ctx, "no-source");
  if (std::find(ds->consumers.begin(), ds->consumers.end(), ctx.sender()) ==
      ds->consumers.end()) {
    return refund_request(ctx, "consumer");
  }
  if (!subset_of(targets, ds->owners)) return refund_request(ctx, "targets");
  if (ctx.value() < ds->price) return refund_request(ctx, "deposit");
  std::vector<Payout> payouts;
  for (auto owner : ds->owners) payouts.push_back({owner, owners_.at({owner, op}).price});
  auto& r = open_record(ctx, op);
  r.target_owners = targets;
  r.payouts = std::move(payouts);
}

void DataBrokerContract::pay_out(CallContext& ctx, UsageRecord& record) {
  Amount paid = 0;
  for (const auto& p : record.payouts) {
    ctx.transfer(p.owner, p.amount);
    ctx.emit("payout idx=" + std::to_string(record.idx) + " to=" + account_label(p.owner) +
             " amount=" + std::to_string(p.amount));
    paid += p.amount;
  }
  const Amount residual = record.escrow - paid;
  if (residual > 0) {
    ctx.transfer(record.consumer, residual);
    ctx.emit("refund idx=" + std::to_string(record.idx) + " to=" +
             account_label(record.consumer) + " amount=" + std::to_string(residual));
  }
  record.escrow = 0;
}

std::string DataBrokerContract::dump() const {
  std::ostringstream out;
  out << "contract kind=" << kKind << " broker=" << account_label(creator_)
      << " destroyed=" << (destroyed_ ? 1 : 0)
      << " timeout_ms=" << config_.request_timeout.count() << "\n";
  for (const auto& op : config_.operations) out << "operation " << op.hex() << "\n";
  for (const auto& [key, e] : owners_) {
    out << "owner " << account_label(key.first) << " op=" << key.second.hex()
        << " dc=" << account_label(e.consumer) << " price=" << e.price
        << " confirmed=" << (e.confirmed ? 1 : 0) << "\n";
  }
  for (const auto& [op, ds] : sources_) {
    out << "source op=" << op.hex() << " price=" << ds.price << " owners=";
    for (std::size_t i = 0; i < ds.owners.size(); ++i) {
      out << (i ? "," : "") << account_label(ds.owners[i]);
    }
    out << " consumers=";
    for (std::size_t i = 0; i < ds.consumers.size(); ++i) {
      out << (i ? "," : "") << account_label(ds.consumers[i]);
    }
    out << "\n";
  }
  out << dump_records();
  return out.str();
}

void register_market_contracts(ledger::Ledger& ledger) {
  ledger.register_factory(std::string(DataOwnerContract::kKind),
                          [](CallContext& ctx, ByteReader& in) {
                            auto policy = Policy::decode(in);
                            in.expect_done();
                            auto c = std::make_unique<DataOwnerContract>(ctx.sender(), policy);
                            ctx.emit("deployed kind=data-owner owner=" +
                                     account_label(ctx.sender()));
                            return c;
                          });
  ledger.register_factory(std::string(DataBrokerContract::kKind),
                          [](CallContext& ctx, ByteReader& in) {
                            auto config = BrokerConfig::decode(in);
                            in.expect_done();
                            auto c = std::make_unique<DataBrokerContract>(ctx.sender(), config);
                            ctx.emit("deployed kind=data-broker broker=" +
                                     account_label(ctx.sender()));
                            return c;
                          });
}

}  // namespace dm::contracts
