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

#include "tee/messages.hpp"

#include "common/error.hpp"

namespace dm::tee {

Bytes DataCapsule::associated_data(AccountId owner, std::string_view descriptor) {
  ByteWriter w;
  w.str("capsule/v1").u32(owner.value).str(descriptor);
  return w.take();
}

Bytes DataCapsule::serialize() const {
  ByteWriter w;
  w.u32(owner.value).str(descriptor).blob(body.serialize());
  return w.take();
}

DataCapsule DataCapsule::parse(ByteView wire) {
  ByteReader r(wire);
  DataCapsule c;
  c.owner = AccountId{r.u32()};
  c.descriptor = r.str();
  c.body = crypto::Ciphertext::parse(r.blob());
  r.expect_done();
  return c;
}

DataCapsule seal_capsule(const crypto::SymmetricKey& data_key, const crypto::AeadNonce& nonce,
                         AccountId owner, std::string descriptor, ByteView plaintext) {
  auto ad = DataCapsule::associated_data(owner, descriptor);
  auto body = crypto::aead_encrypt(data_key, crypto::KeyRole::kData, nonce, plaintext, ad);
  return DataCapsule{owner, std::move(descriptor), std::move(body)};
}

Bytes encode_bindings(const std::vector<Binding>& bindings) {
  ByteWriter w;
  w.str("bindings/v1").u32(static_cast<std::uint32_t>(bindings.size()));
  for (const auto& b : bindings) w.u32(b.contract.value).u64(b.idx);
  return w.take();
}

namespace {

void write_binding(ByteWriter& w, const Binding& b) { w.u32(b.contract.value).u64(b.idx); }

Binding read_binding(ByteReader& r) {
  Binding b;
  b.contract = ContractId{r.u32()};
  b.idx = r.u64();
  return b;
}

}  // namespace

Bytes ResultBundle::serialize() const {
  ByteWriter w;
  w.str("bundle/v1").u32(static_cast<std::uint32_t>(bindings.size()));
  for (std::size_t i = 0; i < bindings.size(); ++i) {
    write_binding(w, bindings[i]);
    w.fixed(key_hashes.at(i).bytes);
  }
  w.blob(result.serialize()).fixed(result_hash.bytes);
  return w.take();
}

ResultBundle ResultBundle::parse(ByteView wire) {
  ByteReader r(wire);
  if (r.str() != "bundle/v1") throw Error(ErrorCode::kMalformed, "bundle tag");
  ResultBundle b;
  auto n = r.u32();
  for (std::uint32_t i = 0; i < n; ++i) {
    b.bindings.push_back(read_binding(r));
    b.key_hashes.push_back(crypto::Digest{r.fixed<32>()});
  }
  b.result = crypto::Ciphertext::parse(r.blob());
  b.result_hash.bytes = r.fixed<32>();
  r.expect_done();
  return b;
}

Bytes KeySlip::serialize() const {
  ByteWriter w;
  w.str("keyslip/v1");
  write_binding(w, binding);
  w.fixed(share);
  return w.take();
}

KeySlip KeySlip::parse(ByteView wire) {
  ByteReader r(wire);
  if (r.str() != "keyslip/v1") throw Error(ErrorCode::kMalformed, "key slip tag");
  KeySlip s;
  s.binding = read_binding(r);
  s.share = r.fixed<32>();
  r.expect_done();
  return s;
}

Bytes open_result(const ResultBundle& bundle, const std::vector<crypto::KeyMaterial>& shares) {
  if (shares.size() != bundle.key_hashes.size() || shares.empty()) {
    throw Error(ErrorCode::kIntegrityMismatch, "share count does not match bundle");
  }
  crypto::KeyMaterial key{};
  for (std::size_t i = 0; i < shares.size(); ++i) {
    if (crypto::hash(view(shares[i])) != bundle.key_hashes[i]) {
      throw Error(ErrorCode::kIntegrityMismatch, "share " + std::to_string(i) + " hash mismatch");
    }
    for (std::size_t j = 0; j < key.size(); ++j) key[j] ^= shares[i][j];
  }
  crypto::SymmetricKey k(crypto::KeyRole::kResult, key);
  return crypto::aead_decrypt(k, crypto::KeyRole::kResult, bundle.result,
                              encode_bindings(bundle.bindings));
}

Bytes KeyProvision::serialize() const {
  ByteWriter w;
  w.str("provision/v1").str(descriptor).fixed(key);
  return w.take();
}

KeyProvision KeyProvision::parse(ByteView wire) {
  ByteReader r(wire);
  if (r.str() != "provision/v1") throw Error(ErrorCode::kMalformed, "provision tag");
  KeyProvision p;
  p.descriptor = r.str();
  p.key = r.fixed<32>();
  r.expect_done();
  return p;
}

}  // namespace dm::tee
