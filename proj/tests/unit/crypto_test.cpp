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

#include "doctest.h"

#include <set>

#include "common/error.hpp"
#include "crypto/crypto.hpp"
#include "crypto/drbg.hpp"

using namespace dm;
using namespace dm::crypto;

namespace {

KeyMaterial key_from_hex(std::string_view hex) {
  auto b = from_hex(hex).value();
  KeyMaterial k{};
  std::copy(b.begin(), b.end(), k.begin());
  return k;
}

// Reference vectors computed with pyca/cryptography (OpenSSL backend).
constexpr std::string_view kSha256Empty =
    "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855";
constexpr std::string_view kSha256Abc =
    "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad";

}  // namespace

TEST_CASE("hash matches published SHA-256 vectors") {
  CHECK(hash(Bytes{}).hex() == kSha256Empty);
  CHECK(hash(std::string_view("abc")).hex() == kSha256Abc);
}

TEST_CASE("hash is deterministic") {
  Drbg rng(11);
  for (int i = 0; i < 16; ++i) {
    auto x = rng.bytes(rng.uniform(200));
    CHECK(hash(x) == hash(x));
  }
}

TEST_CASE("every single-bit flip of a one-byte input changes the digest") {
  const Bytes base{0x5a};
  const auto d = hash(base);
  std::set<std::string> seen{d.hex()};
  for (int bit = 0; bit < 8; ++bit) {
    Bytes flipped{static_cast<std::uint8_t>(base[0] ^ (1u << bit))};
    CHECK(hash(flipped) != d);
    seen.insert(hash(flipped).hex());
  }
  CHECK(seen.size() == 9);
}

TEST_CASE("hash_parts binds part boundaries") {
  auto ab = to_bytes("ab");
  auto a = to_bytes("a");
  auto b = to_bytes("b");
  auto c = to_bytes("");
  CHECK(hash_parts({a, b}) != hash_parts({ab, c}));
}

TEST_CASE("hkdf-sha256 matches RFC 5869 test case 1") {
  Bytes ikm(22, 0x0b);
  Bytes salt;
  for (int i = 0; i <= 0x0c; ++i) salt.push_back(static_cast<std::uint8_t>(i));
  Bytes info;
  for (int i = 0xf0; i <= 0xf9; ++i) info.push_back(static_cast<std::uint8_t>(i));
  CHECK(to_hex(hkdf_sha256(ikm, salt, info, 42)) ==
        "3cb25f25faacd57a90434f64d0362f2a2d2d0a90cf1a5a4c5db02d56ecc4c5bf34007208d5b887185865");
}

TEST_CASE("aead matches reference ciphertext") {
  SymmetricKey key(KeyRole::kResult,
                   key_from_hex("808182838485868788898a8b8c8d8e8f909192939495969798999a9b9c9d9e9f"));
  AeadNonce nonce{};
  auto n = from_hex("070000004041424344454647").value();
  std::copy(n.begin(), n.end(), nonce.begin());
  auto ct = aead_encrypt(key, KeyRole::kResult, nonce, to_bytes("hello"), to_bytes("ad"));
  CHECK(to_hex(ct.body) == "f71e85316e");
  CHECK(to_hex(view(ct.tag)) == "b14c41e57afd3fcaa9796173aac5ff4e");
  CHECK(ct.ad_digest == hash(std::string_view("ad")));
}

TEST_CASE("aead round trip and authentication failures") {
  Drbg rng(3);
  auto key = rng.key(KeyRole::kData);
  NonceSequence nonces(3, "owner-1");
  auto msg = to_bytes("column,a\n1.000\n");
  auto ad = to_bytes("capsule|owner-1");
  auto ct = aead_encrypt(key, KeyRole::kData, nonces.next(), msg, ad);

  SUBCASE("round trip") { CHECK(aead_decrypt(key, KeyRole::kData, ct, ad) == msg); }

  SUBCASE("wrong key") {
    auto other = rng.key(KeyRole::kData);
    CHECK_THROWS_AS(aead_decrypt(other, KeyRole::kData, ct, ad), Error);
  }

  SUBCASE("wrong associated data") {
    try {
      aead_decrypt(key, KeyRole::kData, ct, to_bytes("capsule|owner-2"));
      FAIL("expected auth-failure");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kAuthFailure);
    }
  }

  SUBCASE("every single-byte flip of the serialized ciphertext is rejected") {
    auto wire = ct.serialize();
    for (std::size_t i = 0; i < wire.size(); ++i) {
      auto tampered = wire;
      tampered[i] ^= 0x01;
      bool rejected = false;
      try {
        auto parsed = Ciphertext::parse(tampered);
        aead_decrypt(key, KeyRole::kData, parsed, ad);
      } catch (const Error& e) {
        rejected = e.code() == ErrorCode::kAuthFailure || e.code() == ErrorCode::kMalformed;
      }
      CHECK_MESSAGE(rejected, "byte " << i);
    }
  }

  SUBCASE("role mismatch at use site") {
    CHECK_THROWS_AS(aead_encrypt(key, KeyRole::kResult, nonces.next(), msg, ad), Error);
  }
}

TEST_CASE("ed25519 matches RFC 8032 test 1") {
  SigningKey sk(key_from_hex("9d61b19deffd5a60ba844af492ec2cc44449c5697b326919703bac031cae7f60"));
  CHECK(to_hex(view(sk.public_key())) ==
        "d75a980182b10ab7d54bfed3c964073a0ee172f3daa62325af021a68f707511a");
  auto sig = sk.sign({});
  CHECK(to_hex(view(sig)) ==
        "e5564300c360ac729086e2cc806e828a84877f1eb8e5d974d873e065224901555fb8821590a33bacc61e39701cf9b46bd25bf5f0595bbe24655141438e7a100b");
}

TEST_CASE("sign and verify") {
  Drbg rng(5);
  SigningKey alice(rng.secret_seed());
  SigningKey bob(rng.secret_seed());
  Bytes msg{1, 2, 3, 4};
  auto sig = alice.sign(msg);

  CHECK(verify(alice.public_key(), msg, view(sig)));
  CHECK_FALSE(verify(bob.public_key(), msg, view(sig)));
  for (std::size_t i = 0; i < msg.size(); ++i) {
    auto other = msg;
    other[i] ^= 0xff;
    CHECK_FALSE(verify(alice.public_key(), other, view(sig)));
  }
  Bytes short_sig(63, 0);
  try {
    verify(alice.public_key(), msg, short_sig);
    FAIL("expected malformed-signature");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMalformedSignature);
  }
}

TEST_CASE("x25519 public key matches RFC 7748") {
  KeyAgreement a(key_from_hex("77076d0a7318a57d3c16c17251b26645df4c2f87ebc0992ab177fba51db92c2a"));
  CHECK(to_hex(view(a.public_key())) ==
        "8520f0098930a754748b7ddcb43ef75a0dbf3a0d26381af4eba4a98eaa9b4e6a");
}

TEST_CASE("derive_channel_key") {
  Drbg rng(9);
  KeyAgreement peer(rng.secret_seed());
  KeyAgreement enclave(rng.secret_seed());
  auto s1 = peer.shared_secret(enclave.public_key());
  auto s2 = enclave.shared_secret(peer.public_key());
  REQUIRE(s1 == s2);
  auto t1 = hash(std::string_view("report-1"));
  auto t2 = hash(std::string_view("report-2"));

  auto k1 = derive_channel_key(view(s1), t1);
  CHECK(k1 == derive_channel_key(view(s2), t1));
  CHECK_FALSE(k1 == derive_channel_key(view(s1), t2));
  CHECK(k1.role() == KeyRole::kChannel);
}

TEST_CASE("drbg determinism and fork independence") {
  Drbg a(42);
  Drbg b(42);
  Drbg c(43);
  auto xa = a.bytes(64);
  CHECK(xa == b.bytes(64));
  CHECK(xa != c.bytes(64));

  Drbg root(7);
  auto f1 = root.fork("dc");
  auto f2 = root.fork("dc");
  auto f3 = root.fork("db");
  CHECK(f1.next_u64() == f2.next_u64());
  CHECK(f1.next_u64() != f3.next_u64());

  for (int i = 0; i < 1000; ++i) CHECK(a.uniform(7) < 7);
}

TEST_CASE("nonce sequence is a function of (seed, party, counter)") {
  NonceSequence a(1, "cee"), b(1, "cee"), c(2, "cee"), d(1, "dc");
  auto na = a.next();
  CHECK(na == b.next());
  CHECK(na != c.next());
  CHECK(na != d.next());
  CHECK(a.next() != na);
}
