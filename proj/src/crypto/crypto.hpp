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

#include <array>
#include <compare>
#include <initializer_list>
#include <cstdint>
#include <string>
#include <string_view>

#include "common/bytes.hpp"

namespace dm::crypto {

// The one place the primitive choice is pinned. Test vectors depend on it.
inline constexpr std::string_view kSuite =
    "sha256/chacha20poly1305-ietf/ed25519/x25519/hkdf-sha256";

void ensure_initialized();

struct Digest {
  std::array<std::uint8_t, 32> bytes{};

  auto operator<=>(const Digest&) const = default;
  ByteView view() const { return ByteView(bytes.data(), bytes.size()); }
  std::string hex() const { return to_hex(view()); }
  static Digest from_hex(std::string_view hex);  // throws kMalformed
  static Digest from_bytes(ByteView bytes);      // throws kMalformed unless 32 bytes
};

Digest hash(ByteView data);
inline Digest hash(std::string_view text) {
  return hash(ByteView(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

// Hash over a length-prefixed framing of each part, so part boundaries bind.
Digest hash_parts(std::initializer_list<ByteView> parts);

Bytes hmac_sha256(ByteView key, ByteView message);
// RFC 5869.
Bytes hkdf_sha256(ByteView ikm, ByteView salt, ByteView info, std::size_t length);

enum class KeyRole : std::uint8_t { kData = 1, kResult = 2, kChannel = 3 };
std::string_view to_string(KeyRole role);

using KeyMaterial = std::array<std::uint8_t, 32>;

class SymmetricKey {
 public:
  SymmetricKey(KeyRole role, const KeyMaterial& material) : role_(role), material_(material) {}

  KeyRole role() const { return role_; }
  ByteView bytes() const { return ByteView(material_.data(), material_.size()); }
  const KeyMaterial& material() const { return material_; }

  bool operator==(const SymmetricKey&) const = default;

 private:
  KeyRole role_;
  KeyMaterial material_;
};

using AeadNonce = std::array<std::uint8_t, 12>;
using AeadTag = std::array<std::uint8_t, 16>;

struct Ciphertext {
  AeadNonce nonce{};
  Bytes body;
  AeadTag tag{};
  Digest ad_digest;

  Bytes serialize() const;
  static Ciphertext parse(ByteView wire);  // throws kMalformed
};

// The key's role must equal `use_site`, otherwise kInvalidArgument.
Ciphertext aead_encrypt(const SymmetricKey& key, KeyRole use_site, const AeadNonce& nonce,
                        ByteView plaintext, ByteView associated_data);
// Throws kAuthFailure on wrong key, tampered body/tag, or wrong associated data.
Bytes aead_decrypt(const SymmetricKey& key, KeyRole use_site, const Ciphertext& ct,
                   ByteView associated_data);

// Deterministic nonces: (seed, party, counter) -> 96 bits.
class NonceSequence {
 public:
  NonceSequence(std::uint64_t seed, std::string party) : seed_(seed), party_(std::move(party)) {}

  AeadNonce next();
  std::uint64_t issued() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::string party_;
  std::uint64_t counter_ = 0;
};

using PublicKey = std::array<std::uint8_t, 32>;
using Signature = std::array<std::uint8_t, 64>;
using SecretSeed = std::array<std::uint8_t, 32>;

class SigningKey {
 public:
  explicit SigningKey(const SecretSeed& seed);

  const PublicKey& public_key() const { return public_; }
  Signature sign(ByteView message) const;

 private:
  std::array<std::uint8_t, 64> secret_{};
  PublicKey public_{};
};

// Returns false for a well-formed signature that does not verify; throws
// kMalformedSignature when `signature` is not 64 bytes.
bool verify(const PublicKey& key, ByteView message, ByteView signature);

// X25519.
class KeyAgreement {
 public:
  explicit KeyAgreement(const SecretSeed& secret);

  const PublicKey& public_key() const { return public_; }
  // Throws kInvalidArgument for low-order peer keys.
  KeyMaterial shared_secret(const PublicKey& peer) const;

 private:
  SecretSeed secret_{};
  PublicKey public_{};
};

SymmetricKey derive_channel_key(ByteView shared_secret, const Digest& transcript);

}  // namespace dm::crypto
