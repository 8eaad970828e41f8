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
#include <string_view>
#include <vector>

#include "common/bytes.hpp"
#include "common/error.hpp"
#include "common/types.hpp"
#include "crypto/crypto.hpp"
#include "ledger/transaction.hpp"

namespace dm::ledger {

// Thrown by contract code to abort a call. The ledger discards every effect
// of the call and returns the attached value to the sender.
class ContractRevert : public Error {
 public:
  using Error::Error;
};

[[noreturn]] inline void revert(ErrorCode code, const std::string& detail = {}) {
  throw ContractRevert(code, detail);
}

class CallContext {
 public:
  CallContext(AccountId sender, Amount value, Millis now, ContractId self, Amount escrow)
      : sender_(sender), value_(value), now_(now), self_(self), escrow_(escrow) {}

  AccountId sender() const { return sender_; }
  Amount value() const { return value_; }
  Millis now() const { return now_; }
  ContractId self() const { return self_; }
  // Contract balance including the attached value, less staged transfers.
  Amount escrow() const { return escrow_; }

  // Staged; applied only if the call returns normally.
  void transfer(AccountId to, Amount amount);
  void emit(std::string event) { events_.push_back(std::move(event)); }
  void set_output(Bytes output) { output_ = std::move(output); }

  struct Transfer {
    AccountId to;
    Amount amount;
  };
  const std::vector<Transfer>& transfers() const { return transfers_; }
  std::vector<std::string>& events() { return events_; }
  Bytes& output() { return output_; }

 private:
  AccountId sender_;
  Amount value_;
  Millis now_;
  ContractId self_;
  Amount escrow_;
  std::vector<Transfer> transfers_;
  std::vector<std::string> events_;
  Bytes output_;
};

class Contract {
 public:
  virtual ~Contract() = default;

  virtual std::string_view kind() const = 0;
  virtual std::unique_ptr<Contract> clone() const = 0;
  virtual void call(CallContext& ctx, std::string_view function, ByteReader& args) = 0;
  virtual bool destroyed() const { return false; }
  // Structured text, stable across runs.
  virtual std::string dump() const = 0;
};

using ContractFactory =
    std::function<std::unique_ptr<Contract>(CallContext& ctx, ByteReader& init_args)>;

enum class TxStatus { kSuccess, kReverted };

struct Receipt {
  std::uint64_t id = 0;
  SignedTransaction tx;
  Millis submitted{0};
  Millis time{0};
  TxStatus status = TxStatus::kSuccess;
  ErrorCode reason = ErrorCode::kOk;
  Bytes output;
  std::optional<ContractId> created;
  std::vector<std::string> events;
  // Sum of balances and escrows after this transaction.
  Amount supply_after = 0;

  bool ok() const { return status == TxStatus::kSuccess; }
  std::string status_label() const;
  // time|sender|target|function|value|status
  std::string log_line() const;
};

struct LedgerConfig {
  Millis finalization_delay{15000};
  // Extra delay per transaction already pending at submission.
  Millis congestion_penalty{0};
};

struct PendingTicket {
  std::uint64_t receipt_id = 0;
  Millis due{0};
};

class Ledger {
 public:
  explicit Ledger(LedgerConfig config = {});

  Ledger(const Ledger&) = delete;
  Ledger& operator=(const Ledger&) = delete;

  // Genesis minting. The only way currency enters the system.
  AccountId create_account(const crypto::PublicKey& key, Amount genesis_balance);
  void register_factory(std::string kind, ContractFactory factory);

  // Errors (no state change): kUnknownAccount, kBadSignature, kBadNonce,
  // kInsufficientFunds, kInvalidArgument for negative value.
  PendingTicket submit_tx(const SignedTransaction& tx);
  // dt == 0 is a no-op. Throws kInvalidArgument for dt < 0.
  std::vector<Receipt> advance(Millis dt);

  Amount balance(AccountId id) const;
  Amount escrow(ContractId id) const;
  const crypto::PublicKey& public_key(AccountId id) const;
  std::uint64_t last_nonce(AccountId id) const;

  Millis clock() const { return clock_; }
  const LedgerConfig& config() const { return config_; }
  std::optional<Millis> next_due() const;
  std::size_t pending_count() const { return pending_.size(); }
  std::size_t account_count() const { return accounts_.size(); }
  std::size_t contract_count() const { return contracts_.size(); }

  const Contract* contract(ContractId id) const;
  template <class T>
  const T* contract_as(ContractId id) const {
    return dynamic_cast<const T*>(contract(id));
  }

  std::span<const Receipt> finalized() const { return finalized_; }
  std::string export_log() const;

  Amount total_supply() const;
  Amount minted() const { return minted_; }

 private:
  struct Account {
    crypto::PublicKey key{};
    Amount balance = 0;
    std::uint64_t last_nonce = 0;
  };
  struct ContractSlot {
    std::unique_ptr<Contract> state;
    Amount escrow = 0;
  };
  struct Pending {
    std::uint64_t receipt_id;
    SignedTransaction tx;
    Millis submitted;
    Millis due;
  };

  Account& account(AccountId id);
  const Account& account(AccountId id) const;
  Receipt execute(const Pending& p, Millis at);
  void execute_call(Receipt& r, Account& sender, ContractId target);
  void execute_deploy(Receipt& r, Account& sender);

  LedgerConfig config_;
  Millis clock_{0};
  Millis last_exec_{0};
  std::uint64_t next_receipt_ = 0;
  Amount minted_ = 0;
  std::vector<Account> accounts_;
  std::vector<ContractSlot> contracts_;
  std::map<std::string, ContractFactory, std::less<>> factories_;
  std::vector<Pending> pending_;
  std::vector<Receipt> finalized_;
};

}  // namespace dm::ledger
