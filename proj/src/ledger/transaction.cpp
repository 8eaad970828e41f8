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

#include "ledger/transaction.hpp"

#include "common/error.hpp"

namespace dm::ledger {

std::string target_label(const Target& target) {
  if (std::holds_alternative<AccountId>(target)) return account_label(std::get<AccountId>(target));
  if (std::holds_alternative<ContractId>(target)) {
    return contract_label(std::get<ContractId>(target));
  }
  return "deploy";
}

namespace {
void write_unsigned(ByteWriter& w, const SignedTransaction& tx) {
  w.str("tx/v1").u32(tx.sender.value);
  w.u8(static_cast<std::uint8_t>(tx.target.index()));
  if (auto* a = std::get_if<AccountId>(&tx.target)) w.u32(a->value);
  if (auto* c = std::get_if<ContractId>(&tx.target)) w.u32(c->value);
  w.str(tx.function).blob(tx.args).i64(tx.value).u64(tx.nonce);
}
}  // namespace

Bytes SignedTransaction::signing_payload() const {
  ByteWriter w;
  write_unsigned(w, *this);
  return w.take();
}

Bytes SignedTransaction::serialize() const {
  ByteWriter w;
  write_unsigned(w, *this);
  w.fixed(signature);
  return w.take();
}

SignedTransaction SignedTransaction::parse(ByteView wire) {
  ByteReader r(wire);
  if (r.str() != "tx/v1") throw Error(ErrorCode::kMalformed, "transaction tag");
  SignedTransaction tx;
  tx.sender = AccountId{r.u32()};
  switch (r.u8()) {
    case 0: tx.target = Deploy{}; break;
    case 1: tx.target = AccountId{r.u32()}; break;
    case 2: tx.target = ContractId{r.u32()}; break;
    default: throw Error(ErrorCode::kMalformed, "transaction target");
  }
  tx.function = r.str();
  tx.args = r.blob();
  tx.value = r.i64();
  tx.nonce = r.u64();
  tx.signature = r.fixed<64>();
  r.expect_done();
  return tx;
}

crypto::Digest SignedTransaction::id() const { return crypto::hash(serialize()); }

SignedTransaction make_transaction(const crypto::SigningKey& key, AccountId sender, Target target,
                                   std::string function, Bytes args, Amount value,
                                   std::uint64_t nonce) {
  SignedTransaction tx{sender, target, std::move(function), std::move(args), value, nonce, {}};
  tx.signature = key.sign(tx.signing_payload());
  return tx;
}

}  // namespace dm::ledger
