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

#include <string>
#include <vector>

#include "common/bytes.hpp"
#include "common/types.hpp"
#include "crypto/crypto.hpp"

namespace dm::tee {

// An owner's dataset encrypted under its K_data, as kept in cloud storage.
struct DataCapsule {
  AccountId owner;
  std::string descriptor;
  crypto::Ciphertext body;

  static Bytes associated_data(AccountId owner, std::string_view descriptor);
  Bytes serialize() const;
  static DataCapsule parse(ByteView wire);
};

DataCapsule seal_capsule(const crypto::SymmetricKey& data_key, const crypto::AeadNonce& nonce,
                         AccountId owner, std::string descriptor, ByteView plaintext);

// Which on-chain record a result belongs to.
struct Binding {
  ContractId contract;
  std::uint64_t idx = 0;
  bool operator==(const Binding&) const = default;
};

Bytes encode_bindings(const std::vector<Binding>& bindings);

// Delivered to the consumer. With several bindings (one record per owner
// contract) the result key is the XOR of one share per binding, and
// key_hashes[i] = hash(share i), so the consumer can only decrypt once every
// share is on chain.
struct ResultBundle {
  std::vector<Binding> bindings;
  crypto::Ciphertext result;  // associated data = encode_bindings(bindings)
  crypto::Digest result_hash;  // hash(result.serialize())
  std::vector<crypto::Digest> key_hashes;

  Bytes serialize() const;
  static ResultBundle parse(ByteView wire);
};

// Delivered to whoever releases the key for `binding`.
struct KeySlip {
  Binding binding;
  crypto::KeyMaterial share{};

  Bytes serialize() const;
  static KeySlip parse(ByteView wire);
};

// XOR-combines the shares in binding order and decrypts. Throws
// kIntegrityMismatch if a share does not match its hash, kAuthFailure if the
// ciphertext does not open.
Bytes open_result(const ResultBundle& bundle, const std::vector<crypto::KeyMaterial>& shares);

// Key provisioning payload, carried only inside attested channels.
struct KeyProvision {
  std::string descriptor;
  crypto::KeyMaterial key{};

  Bytes serialize() const;
  static KeyProvision parse(ByteView wire);
};

}  // namespace dm::tee
