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

#include "contracts/usage_contract.hpp"

#include <sstream>

namespace dm::contracts {

using ledger::CallContext;
using ledger::revert;

const UsageRecord* UsageContract::record(std::uint64_t idx) const {
  if (idx >= records_.size()) return nullptr;
  return &records_[idx];
}

UsageRecord& UsageContract::record_for_update(std::uint64_t idx) {
  if (idx >= records_.size()) revert(ErrorCode::kUnknownRecord, std::to_string(idx));
  return records_[idx];
}

bool UsageContract::dispatch_common(CallContext& ctx, std::string_view function,
                                    ByteReader& args) {
  const bool shared = function == "ComputationComplete" || function == "CompleteTransaction" ||
                      function == "Cancel" || function == "Revoke";
  if (!shared) return false;
  if (ctx.value() != 0) revert(ErrorCode::kInvalidArgument, "function does not accept value");
  if (function == "ComputationComplete") {
    auto idx = args.u64();
    crypto::Digest h{args.fixed<32>()};
    args.expect_done();
    computation_complete(ctx, idx, h);
  } else if (function == "CompleteTransaction") {
    auto idx = args.u64();
    auto key = args.blob();
    args.expect_done();
    complete_transaction(ctx, idx, key);
  } else if (function == "Cancel") {
    auto idx = args.u64();
    args.expect_done();
    cancel(ctx, idx);
  } else {
    args.expect_done();
    revoke(ctx);
  }
  return true;
}

UsageRecord& UsageContract::open_record(CallContext& ctx, const crypto::Digest& op) {
  UsageRecord r;
  r.idx = records_.size();
  r.op = op;
  r.consumer = ctx.sender();
  r.request_time = ctx.now();
  r.status = RecordStatus::kWaitComputation;
  r.escrow = ctx.value();
  records_.push_back(std::move(r));
  auto& rec = records_.back();
  ctx.emit("record-created idx=" + std::to_string(rec.idx) + " dc=" + account_label(rec.consumer) +
           " escrow=" + std::to_string(rec.escrow) + " op=" + op.hex());
  ByteWriter out;
  out.u64(rec.idx);
  ctx.set_output(out.take());
  return rec;
}

void UsageContract::refund_request(CallContext& ctx, std::string_view why) {
  if (ctx.value() > 0) ctx.transfer(ctx.sender(), ctx.value());
  ctx.emit("request-refunded dc=" + account_label(ctx.sender()) +
           " amount=" + std::to_string(ctx.value()) + " reason=" + std::string(why));
}

void UsageContract::set_status(CallContext& ctx, UsageRecord& record, RecordStatus to) {
  if (!is_allowed_transition(record.status, to)) {
    revert(ErrorCode::kWrongState, std::string(to_string(record.status)));
  }
  record.status = to;
  ctx.emit("status idx=" + std::to_string(record.idx) + " status=" + std::string(to_string(to)));
}

void UsageContract::computation_complete(CallContext& ctx, std::uint64_t idx,
                                         const crypto::Digest& key_hash) {
  auto& r = record_for_update(idx);
  // Only the requester may commit; a broker cannot substitute its own hash.
  if (ctx.sender() != r.consumer) revert(ErrorCode::kWrongSender);
  if (r.status != RecordStatus::kWaitComputation) revert(ErrorCode::kWrongState);
  r.result_key_hash = key_hash;
  ctx.emit("computation-complete idx=" + std::to_string(idx) + " krhash=" + key_hash.hex());
  set_status(ctx, r, RecordStatus::kWaitComplete);
}

void UsageContract::complete_transaction(CallContext& ctx, std::uint64_t idx, const Bytes& key) {
  auto& r = record_for_update(idx);
  if (ctx.sender() != key_releaser()) revert(ErrorCode::kWrongSender);
  if (r.status != RecordStatus::kWaitComplete) revert(ErrorCode::kWrongState);
  if (crypto::hash(key) != *r.result_key_hash) {
    // Guard fails: no state change.
    ctx.emit("complete-rejected idx=" + std::to_string(idx) + " reason=hash-mismatch");
    return;
  }
  pay_out(ctx, r);
  r.result_key = key;
  ctx.emit("complete idx=" + std::to_string(idx) + " kr=" + to_hex(key));
  set_status(ctx, r, RecordStatus::kComplete);
}

void UsageContract::cancel(CallContext& ctx, std::uint64_t idx) {
  auto& r = record_for_update(idx);
  if (ctx.sender() != r.consumer) revert(ErrorCode::kWrongSender);
  if (is_terminal(r.status)) revert(ErrorCode::kWrongState);
  if (ctx.now() - r.request_time <= request_timeout_) {
    ctx.emit("cancel-early idx=" + std::to_string(idx));
    return;
  }
  ctx.transfer(r.consumer, r.escrow);
  ctx.emit("refund idx=" + std::to_string(idx) + " to=" + account_label(r.consumer) +
           " amount=" + std::to_string(r.escrow));
  r.escrow = 0;
  set_status(ctx, r, RecordStatus::kCanceled);
}

void UsageContract::revoke(CallContext& ctx) {
  if (ctx.sender() != creator_) revert(ErrorCode::kWrongSender);
  for (auto& r : records_) {
    if (is_terminal(r.status)) continue;
    ctx.transfer(r.consumer, r.escrow);
    ctx.emit("refund idx=" + std::to_string(r.idx) + " to=" + account_label(r.consumer) +
             " amount=" + std::to_string(r.escrow));
    r.escrow = 0;
    set_status(ctx, r, RecordStatus::kCanceled);
  }
  destroyed_ = true;
  ctx.emit("revoked");
}

std::string UsageContract::dump_records() const {
  std::ostringstream out;
  for (const auto& r : records_) {
    out << "record idx=" << r.idx << " status=" << to_string(r.status)
        << " dc=" << account_label(r.consumer) << " req_time=" << r.request_time.count()
        << " escrow=" << r.escrow << " op=" << r.op.hex();
    if (!r.data.empty()) {
      out << " data=";
      for (std::size_t i = 0; i < r.data.size(); ++i) out << (i ? "," : "") << r.data[i];
    }
    if (!r.target_owners.empty()) {
      out << " targets=";
      for (std::size_t i = 0; i < r.target_owners.size(); ++i) {
        out << (i ? "," : "") << account_label(r.target_owners[i]);
      }
    }
    out << " krhash=" << (r.result_key_hash ? r.result_key_hash->hex() : "-");
    out << " kr=" << (r.result_key ? to_hex(*r.result_key) : "-") << "\n";
  }
  return out.str();
}

}  // namespace dm::contracts
