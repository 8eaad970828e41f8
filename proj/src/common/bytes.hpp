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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dm {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

Bytes to_bytes(std::string_view text);
std::string to_string(ByteView bytes);

// Lowercase, no prefix.
std::string to_hex(ByteView bytes);
std::optional<Bytes> from_hex(std::string_view hex);

bool contains(ByteView haystack, ByteView needle);

template <std::size_t N>
ByteView view(const std::array<std::uint8_t, N>& a) {
  return ByteView(a.data(), a.size());
}

// Canonical little-endian, length-prefixed encoding used for transaction
// arguments, channel messages and signed payloads.
class ByteWriter {
 public:
  ByteWriter& u8(std::uint8_t v);
  ByteWriter& u32(std::uint32_t v);
  ByteWriter& u64(std::uint64_t v);
  ByteWriter& i64(std::int64_t v);
  ByteWriter& raw(ByteView v);
  ByteWriter& blob(ByteView v);
  ByteWriter& str(std::string_view v);

  template <std::size_t N>
  ByteWriter& fixed(const std::array<std::uint8_t, N>& a) {
    return raw(view(a));
  }

  const Bytes& bytes() const { return out_; }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

// Throws Error(kMalformed) on underflow.
class ByteReader {
 public:
  explicit ByteReader(ByteView in) : in_(in) {}

  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  std::int64_t i64();
  ByteView raw(std::size_t n);
  Bytes blob();
  std::string str();

  template <std::size_t N>
  std::array<std::uint8_t, N> fixed() {
    std::array<std::uint8_t, N> a{};
    auto v = raw(N);
    std::copy(v.begin(), v.end(), a.begin());
    return a;
  }

  bool done() const { return pos_ == in_.size(); }
  // Throws unless every byte was consumed.
  void expect_done() const;

 private:
  ByteView in_;
  std::size_t pos_ = 0;
};

}  // namespace dm
