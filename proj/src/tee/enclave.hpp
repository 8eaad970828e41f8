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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crypto/drbg.hpp"
#include "tee/attestation.hpp"
#include "tee/channel.hpp"
#include "tee/messages.hpp"
#include "tee/program.hpp"

namespace dm::tee {

// Holds the quoting key of one untrusted host.
class Platform {
 public:
  Platform(std::string host, const crypto::SecretSeed& seed) : host_(std::move(host)), key_(seed) {}
  const std::string& host() const { return host_; }
  const crypto::PublicKey& public_key() const { return key_.public_key(); }
  crypto::Signature sign(ByteView payload) const { return key_.sign(payload); }

 private:
  std::string host_;
  crypto::SigningKey key_;
};

struct ExecuteOutput {
  Bytes bundle_frame;               // on the consumer channel
  std::vector<Bytes> slip_frames;   // one per binding, on its slip channel
  crypto::Digest result_hash;
  std::vector<crypto::Digest> key_hashes;
};

// An enclave instance. Key material and plaintext never leave through any
// member; callers see sealed frames, digests and sizes only.
class Enclave {
 public:
  Enclave(std::uint64_t instance, std::string host, EnclaveProgram program, crypto::Drbg rng,
          const crypto::PublicKey& ias_key, bool trusted_launch = true);

  std::uint64_t instance() const { return instance_; }
  const std::string& host() const { return host_; }
  const crypto::Digest& measurement() const { return measurement_; }
  const crypto::PublicKey& public_key() const { return identity_.public_key(); }
  bool sanitized() const { return sanitized_; }
  bool halted() const { return halted_; }

  Quote quote(const crypto::Digest& nonce, const Platform& platform) const;

  // Responder side of a channel. The hello's report must be a pass report
  // issued for this instance's key and measurement.
  void accept_channel(const ChannelHello& hello);

  // Initiator side, from inside this enclave towards another one. The report
  // is checked here against the expected nonce and measurement.
  ChannelHello connect(const std::string& channel_id, const AttestationReport& report,
                       const crypto::Digest& nonce, const crypto::Digest& expected_measurement);

  // A frame on one of this enclave's channels. Key provisions are stored;
  // a key slip is returned to the caller.
  std::optional<KeySlip> deliver(ByteView frame);

  // Re-seals stored keys into another channel (broker key store).
  std::vector<Bytes> forward_keys(const std::string& channel_id,
                                  const std::vector<std::string>& descriptors);

  // Decrypts capsules, runs the program, emits the bundle and key slips and
  // sanitizes, whether it succeeds or throws. Throws kMissingKey,
  // kDecryptFailure, kChannelClosed.
  ExecuteOutput execute(std::span<const DataCapsule> capsules, const std::vector<Binding>& bindings,
                        const std::string& consumer_channel,
                        const std::vector<std::string>& slip_channels);

  void sanitize();
  // Host kills the enclave; its memory is gone.
  void halt();

  std::size_t key_store_size() const { return keys_.size(); }
  bool holds_key(std::string_view descriptor) const { return keys_.count(std::string(descriptor)) > 0; }
  std::size_t plaintext_buffer_size() const { return plaintext_.size(); }
  std::size_t channel_count() const { return channels_.size(); }

 private:
  void require_live(std::string_view what) const;
  ChannelEndpoint& channel(const std::string& id);

  std::uint64_t instance_;
  std::string host_;
  EnclaveProgram program_;
  crypto::Digest measurement_;
  crypto::Drbg rng_;
  crypto::KeyAgreement identity_;
  crypto::PublicKey ias_key_;
  bool trusted_launch_;

  std::map<std::string, crypto::KeyMaterial> keys_;
  std::vector<Bytes> plaintext_;
  std::map<std::string, ChannelEndpoint> channels_;
  bool sanitized_ = false;
  bool halted_ = false;
};

}  // namespace dm::tee
