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
#include <string>

#include "common/bytes.hpp"
#include "crypto/crypto.hpp"
#include "tee/attestation.hpp"

namespace dm::tee {

// One end of a confidential, ordered channel. Wire frame:
//   str(channel id) | u8(direction) | u64(seq) | blob(ciphertext)
// A frame whose seq is below the next expected one is rejected as stale, so
// replays fail; gaps (dropped frames) are tolerated.
class ChannelEndpoint {
 public:
  ChannelEndpoint(std::string id, crypto::SymmetricKey key, bool initiator);

  const std::string& id() const { return id_; }
  bool closed() const { return closed_; }
  void close() { closed_ = true; }

  Bytes seal(ByteView plaintext);
  // Throws kChannelClosed, kMalformed, kStaleNonce or kAuthFailure.
  Bytes open(ByteView frame);

  static std::string frame_channel(ByteView frame);  // throws kMalformed

 private:
  std::string id_;
  crypto::SymmetricKey key_;
  std::uint8_t send_dir_;
  std::uint64_t send_seq_ = 0;
  std::uint64_t recv_next_ = 0;
  bool closed_ = false;
};

// What a challenger sends to open a channel into an enclave: its X25519
// public key and the attestation report the channel is bound to.
struct ChannelHello {
  std::string channel_id;
  crypto::PublicKey peer_key{};
  AttestationReport report;

  Bytes serialize() const;
  static ChannelHello parse(ByteView wire);
};

// Challenger side: requires a pass report. The key is derived from the
// X25519 secret with the report digest as the transcript.
// Throws kAttestationRequired otherwise.
ChannelEndpoint connect_to_enclave(const crypto::KeyAgreement& mine,
                                   const AttestationReport& report, std::string channel_id);

}  // namespace dm::tee
