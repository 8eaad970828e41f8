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

#include "tee/channel.hpp"

#include "common/error.hpp"

namespace dm::tee {
namespace {

Bytes frame_ad(const std::string& id, std::uint8_t dir, std::uint64_t seq) {
  ByteWriter w;
  w.str("channel/v1").str(id).u8(dir).u64(seq);
  return w.take();
}

crypto::AeadNonce frame_nonce(std::uint8_t dir, std::uint64_t seq) {
  crypto::AeadNonce n{};
  n[0] = dir;
  for (int i = 0; i < 8; ++i) n[4 + i] = static_cast<std::uint8_t>(seq >> (8 * i));
  return n;
}

}  // namespace

ChannelEndpoint::ChannelEndpoint(std::string id, crypto::SymmetricKey key, bool initiator)
    : id_(std::move(id)), key_(key), send_dir_(initiator ? 1 : 2) {}

Bytes ChannelEndpoint::seal(ByteView plaintext) {
  if (closed_) throw Error(ErrorCode::kChannelClosed, "channel " + id_ + " closed");
  const auto seq = send_seq_++;
  auto ct = crypto::aead_encrypt(key_, crypto::KeyRole::kChannel, frame_nonce(send_dir_, seq),
                                 plaintext, frame_ad(id_, send_dir_, seq));
  ByteWriter w;
  w.str(id_).u8(send_dir_).u64(seq).blob(ct.serialize());
  return w.take();
}

Bytes ChannelEndpoint::open(ByteView frame) {
  if (closed_) throw Error(ErrorCode::kChannelClosed, "channel " + id_ + " closed");
  ByteReader r(frame);
  auto id = r.str();
  auto dir = r.u8();
  auto seq = r.u64();
  auto ct = crypto::Ciphertext::parse(r.blob());
  r.expect_done();
  const std::uint8_t expected_dir = send_dir_ == 1 ? 2 : 1;
  if (id != id_ || dir != expected_dir) {
    throw Error(ErrorCode::kAuthFailure, "frame is not for channel " + id_);
  }
  if (seq < recv_next_) throw Error(ErrorCode::kStaleNonce, "stale frame on " + id_);
  auto pt = crypto::aead_decrypt(key_, crypto::KeyRole::kChannel, ct, frame_ad(id, dir, seq));
  recv_next_ = seq + 1;
  return pt;
}

std::string ChannelEndpoint::frame_channel(ByteView frame) {
  ByteReader r(frame);
  return r.str();
}

Bytes ChannelHello::serialize() const {
  ByteWriter w;
  w.str("hello/v1").str(channel_id).fixed(peer_key).blob(report.serialize());
  return w.take();
}

ChannelHello ChannelHello::parse(ByteView wire) {
  ByteReader r(wire);
  if (r.str() != "hello/v1") throw Error(ErrorCode::kMalformed, "hello tag");
  ChannelHello h;
  h.channel_id = r.str();
  h.peer_key = r.fixed<32>();
  h.report = AttestationReport::parse(r.blob());
  r.expect_done();
  return h;
}

ChannelEndpoint connect_to_enclave(const crypto::KeyAgreement& mine,
                                   const AttestationReport& report, std::string channel_id) {
  if (report.verdict != Verdict::kPass) {
    throw Error(ErrorCode::kAttestationRequired, "no pass report for channel " + channel_id);
  }
  auto shared = mine.shared_secret(report.enclave_key);
  return ChannelEndpoint(std::move(channel_id),
                         crypto::derive_channel_key(view(shared), report.digest()), true);
}

}  // namespace dm::tee
