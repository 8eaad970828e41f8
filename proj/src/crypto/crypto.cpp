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

#include "crypto/crypto.hpp"

#include <sodium.h>

#include <algorithm>
#include <mutex>

#include "common/error.hpp"

namespace dm::crypto {

void ensure_initialized() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) throw std::runtime_error("libsodium initialization failed");
  });
}

Digest Digest::from_hex(std::string_view hex) {
  auto bytes = dm::from_hex(hex);
  if (!bytes) throw Error(ErrorCode::kMalformed, "digest hex");
  return from_bytes(*bytes);
}

Digest Digest::from_bytes(ByteView bytes) {
  if (bytes.size() != 32) throw Error(ErrorCode::kMalformed, "digest length");
  Digest d;
  std::copy(bytes.begin(), bytes.end(), d.bytes.begin());
  return d;
}

Digest hash(ByteView data) {
  ensure_initialized();
  Digest d;
  crypto_hash_sha256(d.bytes.data(), data.data(), data.size());
  return d;
}

Digest hash_parts(std::initializer_list<ByteView> parts) {
  ByteWriter w;
  for (auto p : parts) w.blob(p);
  return hash(w.bytes());
}

Bytes hmac_sha256(ByteView key, ByteView message) {
  ensure_initialized();
  crypto_auth_hmacsha256_state st;
  crypto_auth_hmacsha256_init(&st, key.data(), key.size());
  crypto_auth_hmacsha256_update(&st, message.data(), message.size());
  Bytes out(crypto_auth_hmacsha256_BYTES);
  crypto_auth_hmacsha256_final(&st, out.data());
  return out;
}

Bytes hkdf_sha256(ByteView ikm, ByteView salt, ByteView info, std::size_t length) {
  if (length > 255 * 32) throw Error(ErrorCode::kInvalidArgument, "hkdf length");
  Bytes zero_salt(32, 0);
  auto prk = hmac_sha256(salt.empty() ? ByteView(zero_salt) : salt, ikm);
  Bytes out;
  Bytes block;
  for (std::uint8_t counter = 1; out.size() < length; ++counter) {
    Bytes input = block;
    input.insert(input.end(), info.begin(), info.end());
    input.push_back(counter);
    block = hmac_sha256(prk, input);
    out.insert(out.end(), block.begin(), block.end());
  }
  out.resize(length);
  return out;
}

std::string_view to_string(KeyRole role) {
  switch (role) {
    case KeyRole::kData: return "data";
    case KeyRole::kResult: return "result";
    case KeyRole::kChannel: return "channel";
  }
  return "?";
}

Bytes Ciphertext::serialize() const {
  ByteWriter w;
  w.fixed(nonce).blob(body).fixed(tag).fixed(ad_digest.bytes);
  return w.take();
}

Ciphertext Ciphertext::parse(ByteView wire) {
  ByteReader r(wire);
  Ciphertext ct;
  ct.nonce = r.fixed<12>();
  ct.body = r.blob();
  ct.tag = r.fixed<16>();
  ct.ad_digest.bytes = r.fixed<32>();
  r.expect_done();
  return ct;
}

namespace {
void check_role(const SymmetricKey& key, KeyRole use_site) {
  if (key.role() != use_site) {
    throw Error(ErrorCode::kInvalidArgument, "key role " + std::string(to_string(key.role())) +
                                                 " used as " + std::string(to_string(use_site)));
  }
}
}  // namespace

Ciphertext aead_encrypt(const SymmetricKey& key, KeyRole use_site, const AeadNonce& nonce,
                        ByteView plaintext, ByteView associated_data) {
  ensure_initialized();
  check_role(key, use_site);
  Ciphertext ct;
  ct.nonce = nonce;
  ct.ad_digest = hash(associated_data);
  ct.body.resize(plaintext.size());
  unsigned long long tag_len = 0;
  crypto_aead_chacha20poly1305_ietf_encrypt_detached(
      ct.body.data(), ct.tag.data(), &tag_len, plaintext.data(), plaintext.size(),
      ct.ad_digest.bytes.data(), ct.ad_digest.bytes.size(), nullptr, nonce.data(),
      key.bytes().data());
  return ct;
}

Bytes aead_decrypt(const SymmetricKey& key, KeyRole use_site, const Ciphertext& ct,
                   ByteView associated_data) {
  ensure_initialized();
  check_role(key, use_site);
  if (hash(associated_data) != ct.ad_digest) {
    throw Error(ErrorCode::kAuthFailure, "associated data mismatch");
  }
  Bytes out(ct.body.size());
  if (crypto_aead_chacha20poly1305_ietf_decrypt_detached(
          out.data(), nullptr, ct.body.data(), ct.body.size(), ct.tag.data(),
          ct.ad_digest.bytes.data(), ct.ad_digest.bytes.size(), ct.nonce.data(),
          key.bytes().data()) != 0) {
    sodium_memzero(out.data(), out.size());
    throw Error(ErrorCode::kAuthFailure, "tag verification failed");
  }
  return out;
}

AeadNonce NonceSequence::next() {
  ByteWriter w;
  w.str("nonce").u64(seed_).str(party_).u64(counter_++);
  auto d = hash(w.bytes());
  AeadNonce n{};
  std::copy_n(d.bytes.begin(), n.size(), n.begin());
  return n;
}

SigningKey::SigningKey(const SecretSeed& seed) {
  ensure_initialized();
  crypto_sign_seed_keypair(public_.data(), secret_.data(), seed.data());
}

Signature SigningKey::sign(ByteView message) const {
  Signature sig{};
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), secret_.data());
  return sig;
}

bool verify(const PublicKey& key, ByteView message, ByteView signature) {
  ensure_initialized();
  if (signature.size() != crypto_sign_BYTES) {
    throw Error(ErrorCode::kMalformedSignature,
                "expected 64 bytes, got " + std::to_string(signature.size()));
  }
  return crypto_sign_verify_detached(signature.data(), message.data(), message.size(),
                                     key.data()) == 0;
}

KeyAgreement::KeyAgreement(const SecretSeed& secret) : secret_(secret) {
  ensure_initialized();
  crypto_scalarmult_base(public_.data(), secret_.data());
}

KeyMaterial KeyAgreement::shared_secret(const PublicKey& peer) const {
  KeyMaterial out{};
  if (crypto_scalarmult(out.data(), secret_.data(), peer.data()) != 0) {
    throw Error(ErrorCode::kInvalidArgument, "low-order peer key");
  }
  return out;
}

SymmetricKey derive_channel_key(ByteView shared_secret, const Digest& transcript) {
  static constexpr std::string_view kInfo = "datamarket/attested-channel/v1";
  auto okm = hkdf_sha256(shared_secret, transcript.view(), to_bytes(kInfo), 32);
  KeyMaterial m{};
  std::copy(okm.begin(), okm.end(), m.begin());
  return SymmetricKey(KeyRole::kChannel, m);
}

}  // namespace dm::crypto
