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

#include "contracts/calls.hpp"

#include "contracts/market_contracts.hpp"

namespace dm::contracts::calls {

Call deploy_data_owner(const Policy& policy) {
  return {std::string(DataOwnerContract::kKind), policy.encode()};
}

Call deploy_data_broker(const BrokerConfig& config) {
  return {std::string(DataBrokerContract::kKind), config.encode()};
}

Call request_data(const crypto::Digest& op, std::span<const std::string> data) {
  ByteWriter w;
  w.fixed(op.bytes).u32(static_cast<std::uint32_t>(data.size()));
  for (const auto& d : data) w.str(d);
  return {"Request", w.take()};
}

Call request_owners(const crypto::Digest& op, std::span<const AccountId> owners) {
  ByteWriter w;
  w.fixed(op.bytes).u32(static_cast<std::uint32_t>(owners.size()));
  for (auto o : owners) w.u32(o.value);
  return {"Request", w.take()};
}

Call register_owner(const crypto::Digest& op, AccountId consumer, Amount price) {
  ByteWriter w;
  w.fixed(op.bytes).u32(consumer.value).i64(price);
  return {"Register", w.take()};
}

Call confirm(std::span<const AccountId> owners) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(owners.size()));
  for (auto o : owners) w.u32(o.value);
  return {"Confirm", w.take()};
}

Call computation_complete(std::uint64_t idx, const crypto::Digest& result_key_hash) {
  ByteWriter w;
  w.u64(idx).fixed(result_key_hash.bytes);
  return {"ComputationComplete", w.take()};
}

Call complete_transaction(std::uint64_t idx, ByteView result_key) {
  ByteWriter w;
  w.u64(idx).blob(result_key);
  return {"CompleteTransaction", w.take()};
}

Call cancel(std::uint64_t idx) {
  ByteWriter w;
  w.u64(idx);
  return {"Cancel", w.take()};
}

Call revoke() { return {"Revoke", {}}; }

std::optional<std::uint64_t> record_index(const ledger::Receipt& receipt) {
  if (!receipt.ok() || receipt.tx.function != "Request" || receipt.output.size() != 8) {
    return std::nullopt;
  }
  ByteReader r(receipt.output);
  return r.u64();
}

}  // namespace dm::contracts::calls
