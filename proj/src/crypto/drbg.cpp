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

#include "crypto/drbg.hpp"

#include <sodium.h>

#include "common/error.hpp"

namespace dm::crypto {

Drbg::Drbg(std::uint64_t seed) {
  ByteWriter w;
  w.str("drbg-root").u64(seed);
  state_ = hash(w.bytes());
}

Drbg Drbg::fork(std::string_view label) const {
  ByteWriter w;
  w.str("drbg-fork").fixed(state_.bytes).str(label);
  return Drbg(hash(w.bytes()));
}

void Drbg::fill(std::span<std::uint8_t> out) {
  ensure_initialized();
  ByteWriter w;
  w.fixed(state_.bytes).u64(counter_++);
  auto block_seed = hash(w.bytes());
  static_assert(randombytes_SEEDBYTES == 32);
  randombytes_buf_deterministic(out.data(), out.size(), block_seed.bytes.data());
}

Bytes Drbg::bytes(std::size_t n) {
  Bytes out(n);
  fill(out);
  return out;
}

std::uint64_t Drbg::next_u64() {
  std::array<std::uint8_t, 8> b{};
  fill(b);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t Drbg::uniform(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::kInvalidArgument, "uniform bound 0");
  // Rejection sampling keeps the distribution exact.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  for (;;) {
    auto v = next_u64();
    if (v < limit) return v % bound;
  }
}

bool Drbg::chance(std::uint64_t numerator, std::uint64_t denominator) {
  return uniform(denominator) < numerator;
}

KeyMaterial Drbg::key_material() {
  KeyMaterial k{};
  fill(k);
  return k;
}

}  // namespace dm::crypto
