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

#include <span>
#include <string>
#include <vector>

#include "contracts/records.hpp"
#include "ledger/ledger.hpp"

namespace dm::contracts {

// Lifecycle shared by C_DO and C_DB: result commitment, key release,
// timeout cancellation and revocation. Subclasses own Request and payout.
class UsageContract : public ledger::Contract {
 public:
  AccountId creator() const { return creator_; }
  Millis request_timeout() const { return request_timeout_; }
  bool destroyed() const override { return destroyed_; }

  std::span<const UsageRecord> records() const { return records_; }
  const UsageRecord* record(std::uint64_t idx) const;

 protected:
  UsageContract(AccountId creator, Millis request_timeout)
      : creator_(creator), request_timeout_(request_timeout) {}

  // Returns false if `function` is not one of the shared entry points.
  bool dispatch_common(ledger::CallContext& ctx, std::string_view function, ByteReader& args);

  UsageRecord& open_record(ledger::CallContext& ctx, const crypto::Digest& op);
  // Returns the deposit to the caller, no record ("return $f and terminate").
  void refund_request(ledger::CallContext& ctx, std::string_view why);

  // Who may call CompleteTransaction.
  virtual AccountId key_releaser() const { return creator_; }
  // Moves the record's escrow out of the contract on completion.
  virtual void pay_out(ledger::CallContext& ctx, UsageRecord& record) = 0;

  std::string dump_records() const;

  AccountId creator_;
  Millis request_timeout_;
  std::vector<UsageRecord> records_;
  bool destroyed_ = false;

 private:
  UsageRecord& record_for_update(std::uint64_t idx);
  void set_status(ledger::CallContext& ctx, UsageRecord& record, RecordStatus to);

  void computation_complete(ledger::CallContext& ctx, std::uint64_t idx,
                            const crypto::Digest& key_hash);
  void complete_transaction(ledger::CallContext& ctx, std::uint64_t idx, const Bytes& key);
  void cancel(ledger::CallContext& ctx, std::uint64_t idx);
  void revoke(ledger::CallContext& ctx);
};

}  // namespace dm::contracts
