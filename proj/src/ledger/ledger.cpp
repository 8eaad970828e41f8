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

#include "ledger/ledger.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

namespace dm::ledger {

void CallContext::transfer(AccountId to, Amount amount) {
  if (amount < 0) revert(ErrorCode::kInvalidArgument, "negative transfer");
  if (amount > escrow_) revert(ErrorCode::kInsufficientFunds, "contract escrow exhausted");
  escrow_ -= amount;
  transfers_.push_back({to, amount});
}

std::string Receipt::status_label() const {
  if (ok()) return "success";
  return "reverted:" + std::string(to_string(reason));
}

std::string Receipt::log_line() const {
  return std::to_string(time.count()) + "|" + account_label(tx.sender) + "|" +
         target_label(tx.target) + "|" + tx.function + "|" + std::to_string(tx.value) + "|" +
         status_label();
}

Ledger::Ledger(LedgerConfig config) : config_(config) {
  if (config_.finalization_delay.count() < 0 || config_.congestion_penalty.count() < 0) {
    throw Error(ErrorCode::kInvalidArgument, "negative ledger delay");
  }
}

AccountId Ledger::create_account(const crypto::PublicKey& key, Amount genesis_balance) {
  if (genesis_balance < 0) throw Error(ErrorCode::kInvalidArgument, "negative genesis balance");
  AccountId id{static_cast<std::uint32_t>(accounts_.size())};
  accounts_.push_back(Account{key, genesis_balance, 0});
  minted_ += genesis_balance;
  return id;
}

void Ledger::register_factory(std::string kind, ContractFactory factory) {
  factories_[std::move(kind)] = std::move(factory);
}

Ledger::Account& Ledger::account(AccountId id) {
  if (id.value >= accounts_.size()) throw Error(ErrorCode::kUnknownAccount, account_label(id));
  return accounts_[id.value];
}

const Ledger::Account& Ledger::account(AccountId id) const {
  if (id.value >= accounts_.size()) throw Error(ErrorCode::kUnknownAccount, account_label(id));
  return accounts_[id.value];
}

PendingTicket Ledger::submit_tx(const SignedTransaction& tx) {
  const auto& sender = account(tx.sender);
  if (!crypto::verify(sender.key, tx.signing_payload(), view(tx.signature))) {
    throw Error(ErrorCode::kBadSignature, account_label(tx.sender));
  }
  if (tx.nonce <= sender.last_nonce) {
    throw Error(ErrorCode::kBadNonce, "nonce " + std::to_string(tx.nonce) + " <= " +
                                          std::to_string(sender.last_nonce));
  }
  if (tx.value < 0) throw Error(ErrorCode::kInvalidArgument, "negative value");
  if (sender.balance < tx.value) {
    throw Error(ErrorCode::kInsufficientFunds, account_label(tx.sender));
  }
  account(tx.sender).last_nonce = tx.nonce;
  const Millis due = clock_ + config_.finalization_delay +
                     config_.congestion_penalty * static_cast<long>(pending_.size());
  PendingTicket ticket{next_receipt_++, due};
  pending_.push_back(Pending{ticket.receipt_id, tx, clock_, due});
  return ticket;
}

std::optional<Millis> Ledger::next_due() const {
  if (pending_.empty()) return std::nullopt;
  return std::min_element(pending_.begin(), pending_.end(),
                          [](const Pending& a, const Pending& b) { return a.due < b.due; })
      ->due;
}

std::vector<Receipt> Ledger::advance(Millis dt) {
  if (dt.count() < 0) throw Error(ErrorCode::kInvalidArgument, "negative advance");
  std::vector<Receipt> out;
  if (dt.count() == 0) return out;
  clock_ += dt;

  std::vector<Pending> ready;
  auto split = std::stable_partition(pending_.begin(), pending_.end(),
                                     [&](const Pending& p) { return p.due > clock_; });
  std::move(split, pending_.end(), std::back_inserter(ready));
  pending_.erase(split, pending_.end());

  std::sort(ready.begin(), ready.end(), [](const Pending& a, const Pending& b) {
    return std::tie(a.submitted, a.tx.sender, a.receipt_id) <
           std::tie(b.submitted, b.tx.sender, b.receipt_id);
  });
  for (const auto& p : ready) {
    last_exec_ = std::max(last_exec_, p.due);
    out.push_back(execute(p, last_exec_));
    finalized_.push_back(out.back());
  }
  return out;
}

Receipt Ledger::execute(const Pending& p, Millis at) {
  Receipt r;
  r.id = p.receipt_id;
  r.tx = p.tx;
  r.submitted = p.submitted;
  r.time = at;
  auto& sender = account(p.tx.sender);

  if (sender.balance < p.tx.value) {
    r.status = TxStatus::kReverted;
    r.reason = ErrorCode::kInsufficientFunds;
  } else if (auto* to = std::get_if<AccountId>(&p.tx.target)) {
    if (to->value >= accounts_.size()) {
      r.status = TxStatus::kReverted;
      r.reason = ErrorCode::kUnknownAccount;
    } else {
      sender.balance -= p.tx.value;
      account(*to).balance += p.tx.value;
    }
  } else if (auto* c = std::get_if<ContractId>(&p.tx.target)) {
    execute_call(r, sender, *c);
  } else {
    execute_deploy(r, sender);
  }
  r.supply_after = total_supply();
  return r;
}

void Ledger::execute_call(Receipt& r, Account& sender, ContractId target) {
  if (target.value >= contracts_.size()) {
    r.status = TxStatus::kReverted;
    r.reason = ErrorCode::kUnknownContract;
    return;
  }
  auto& slot = contracts_[target.value];
  if (slot.state->destroyed()) {
    r.status = TxStatus::kReverted;
    r.reason = ErrorCode::kContractDestroyed;
    return;
  }
  auto staged = slot.state->clone();
  CallContext ctx(r.tx.sender, r.tx.value, r.time, target, slot.escrow + r.tx.value);
  try {
    ByteReader args(r.tx.args);
    staged->call(ctx, r.tx.function, args);
  } catch (const ContractRevert& e) {
    r.status = TxStatus::kReverted;
    r.reason = e.code();
    return;
  } catch (const Error& e) {
    // Malformed arguments and similar decoding failures.
    r.status = TxStatus::kReverted;
    r.reason = e.code();
    return;
  }
  for (const auto& t : ctx.transfers()) {
    if (t.to.value >= accounts_.size()) {
      r.status = TxStatus::kReverted;
      r.reason = ErrorCode::kUnknownAccount;
      return;
    }
  }
  sender.balance -= r.tx.value;
  slot.escrow = ctx.escrow();
  for (const auto& t : ctx.transfers()) accounts_[t.to.value].balance += t.amount;
  slot.state = std::move(staged);
  r.events = std::move(ctx.events());
  r.output = std::move(ctx.output());
}

void Ledger::execute_deploy(Receipt& r, Account& sender) {
  auto it = factories_.find(r.tx.function);
  if (it == factories_.end()) {
    r.status = TxStatus::kReverted;
    r.reason = ErrorCode::kUnknownFunction;
    return;
  }
  ContractId id{static_cast<std::uint32_t>(contracts_.size())};
  CallContext ctx(r.tx.sender, r.tx.value, r.time, id, r.tx.value);
  std::unique_ptr<Contract> state;
  try {
    ByteReader args(r.tx.args);
    state = it->second(ctx, args);
  } catch (const Error& e) {
    r.status = TxStatus::kReverted;
    r.reason = e.code();
    return;
  }
  sender.balance -= r.tx.value;
  contracts_.push_back(ContractSlot{std::move(state), r.tx.value});
  r.created = id;
  r.events = std::move(ctx.events());
}

Amount Ledger::balance(AccountId id) const { return account(id).balance; }

Amount Ledger::escrow(ContractId id) const {
  if (id.value >= contracts_.size()) throw Error(ErrorCode::kUnknownContract, contract_label(id));
  return contracts_[id.value].escrow;
}

const crypto::PublicKey& Ledger::public_key(AccountId id) const { return account(id).key; }

std::uint64_t Ledger::last_nonce(AccountId id) const { return account(id).last_nonce; }

const Contract* Ledger::contract(ContractId id) const {
  if (id.value >= contracts_.size()) return nullptr;
  return contracts_[id.value].state.get();
}

std::string Ledger::export_log() const {
  std::string out;
  for (const auto& r : finalized_) {
    out += r.log_line();
    out += '\n';
  }
  return out;
}

Amount Ledger::total_supply() const {
  Amount total = 0;
  for (const auto& a : accounts_) total += a.balance;
  for (const auto& c : contracts_) total += c.escrow;
  return total;
}

}  // namespace dm::ledger
