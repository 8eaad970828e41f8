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

#include <cstdint>
#include <string_view>

#include "common/bytes.hpp"
#include "crypto/crypto.hpp"

namespace dm::crypto {

// Seeded deterministic generator. A run owns one root instance; every party
// receives a child via fork(), so streams are independent of call order
// across parties.
class Drbg {
 public:
  explicit Drbg(std::uint64_t seed);

  Drbg fork(std::string_view label) const;

  void fill(std::span<std::uint8_t> out);
  Bytes bytes(std::size_t n);
  std::uint64_t next_u64();
  // Uniform in [0, bound). bound must be > 0.
  std::uint64_t uniform(std::uint64_t bound);
  bool chance(std::uint64_t numerator, std::uint64_t denominator);

  KeyMaterial key_material();
  SymmetricKey key(KeyRole role) { return SymmetricKey(role, key_material()); }
  SecretSeed secret_seed() { return key_material(); }

 private:
  explicit Drbg(const Digest& state) : state_(state) {}

  Digest state_;
  std::uint64_t counter_ = 0;
};

}  // namespace dm::crypto
