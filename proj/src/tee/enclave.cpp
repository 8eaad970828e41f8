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

#include "tee/enclave.hpp"

#include <sodium.h>

#include "common/error.hpp"

namespace dm::tee {
namespace {

struct SanitizeOnExit {
  Enclave& enclave;
  ~SanitizeOnExit() { enclave.sanitize(); }
};

}  // namespace

Enclave::Enclave(std::uint64_t instance, std::string host, EnclaveProgram program,
                 crypto::Drbg rng, const crypto::PublicKey& ias_key, bool trusted_launch)
    : instance_(instance),
      host_(std::move(host)),
      program_(std::move(program)),
      measurement_(program_.measurement()),
      rng_(std::move(rng)),
      identity_(rng_.secret_seed()),
      ias_key_(ias_key),
      trusted_launch_(trusted_launch) {}

Quote Enclave::quote(const crypto::Digest& nonce, const Platform& platform) const {
  require_live("quote");
  Quote q;
  q.host = platform.host();
  q.measurement = measurement_;
  q.nonce = nonce;
  q.enclave_key = identity_.public_key();
  q.trusted_launch = trusted_launch_;
  q.platform_signature = platform.sign(q.signed_payload());
  return q;
}

void Enclave::require_live(std::string_view what) const {
  if (sanitized_ || halted_) {
    throw Error(ErrorCode::kChannelClosed,
                std::string(what) + ": enclave " + std::to_string(instance_) + " is closed");
  }
}

ChannelEndpoint& Enclave::channel(const std::string& id) {
  auto it = channels_.find(id);
  if (it == channels_.end()) throw Error(ErrorCode::kChannelClosed, "no channel " + id);
  return it->second;
}

void Enclave::accept_channel(const ChannelHello& hello) {
  require_live("accept_channel");
  const auto& rep = hello.report;
  if (!crypto::verify(ias_key_, rep.signed_payload(), view(rep.service_signature)) ||
      rep.verdict != Verdict::kPass || rep.enclave_key != identity_.public_key() ||
      rep.measurement != measurement_) {
    throw Error(ErrorCode::kAttestationRequired, "hello not bound to a pass report for this enclave");
  }
  auto shared = identity_.shared_secret(hello.peer_key);
  channels_.insert_or_assign(
      hello.channel_id,
      ChannelEndpoint(hello.channel_id, crypto::derive_channel_key(view(shared), rep.digest()),
                      false));
}

ChannelHello Enclave::connect(const std::string& channel_id, const AttestationReport& report,
                              const crypto::Digest& nonce,
                              const crypto::Digest& expected_measurement) {
  require_live("connect");
  auto rc = check_report(report, ias_key_, nonce, expected_measurement);
  if (rc != ErrorCode::kOk) throw Error(rc, "peer enclave report rejected");
  channels_.insert_or_assign(channel_id, connect_to_enclave(identity_, report, channel_id));
  return ChannelHello{channel_id, identity_.public_key(), report};
}

std::optional<KeySlip> Enclave::deliver(ByteView frame) {
  require_live("deliver");
  auto& ch = channel(ChannelEndpoint::frame_channel(frame));
  auto payload = ch.open(frame);
  ByteReader peek(payload);
  auto tag = peek.str();
  if (tag == "provision/v1") {
    auto p = KeyProvision::parse(payload);
    keys_[p.descriptor] = p.key;
    sodium_memzero(p.key.data(), p.key.size());
    return std::nullopt;
  }
  if (tag == "keyslip/v1") return KeySlip::parse(payload);
  throw Error(ErrorCode::kMalformed, "unexpected channel payload " + tag);
}

std::vector<Bytes> Enclave::forward_keys(const std::string& channel_id,
                                         const std::vector<std::string>& descriptors) {
  require_live("forward_keys");
  auto& ch = channel(channel_id);
  for (const auto& d : descriptors) {
    if (!keys_.count(d)) throw Error(ErrorCode::kMissingKey, "no key for " + d);
  }
  std::vector<Bytes> frames;
  for (const auto& d : descriptors) {
    auto wire = KeyProvision{d, keys_.at(d)}.serialize();
    frames.push_back(ch.seal(wire));
    sodium_memzero(wire.data(), wire.size());
  }
  return frames;
}

ExecuteOutput Enclave::execute(std::span<const DataCapsule> capsules,
                               const std::vector<Binding>& bindings,
                               const std::string& consumer_channel,
                               const std::vector<std::string>& slip_channels) {
  require_live("execute");
  SanitizeOnExit guard{*this};
  if (bindings.empty() || bindings.size() != slip_channels.size()) {
    throw Error(ErrorCode::kInvalidArgument, "one slip channel per binding");
  }
  auto& to_consumer = channel(consumer_channel);
  std::vector<ChannelEndpoint*> slips;
  for (const auto& id : slip_channels) slips.push_back(&channel(id));

  for (const auto& c : capsules) {
    if (!keys_.count(c.descriptor)) throw Error(ErrorCode::kMissingKey, "no key for " + c.descriptor);
  }
  for (const auto& c : capsules) {
    crypto::SymmetricKey k(crypto::KeyRole::kData, keys_.at(c.descriptor));
    try {
      plaintext_.push_back(crypto::aead_decrypt(k, crypto::KeyRole::kData, c.body,
                                                DataCapsule::associated_data(c.owner, c.descriptor)));
    } catch (const Error&) {
      throw Error(ErrorCode::kDecryptFailure, "capsule " + c.descriptor + " does not open");
    }
  }
  auto result = program_.run(plaintext_);

  std::vector<crypto::KeyMaterial> shares;
  crypto::KeyMaterial key{};
  for (std::size_t i = 0; i < bindings.size(); ++i) {
    shares.push_back(rng_.key_material());
    for (std::size_t j = 0; j < key.size(); ++j) key[j] ^= shares.back()[j];
  }
  crypto::AeadNonce nonce{};
  rng_.fill(nonce);
  ResultBundle bundle;
  bundle.bindings = bindings;
  bundle.result = crypto::aead_encrypt(crypto::SymmetricKey(crypto::KeyRole::kResult, key),
                                       crypto::KeyRole::kResult, nonce, result,
                                       encode_bindings(bindings));
  bundle.result_hash = crypto::hash(bundle.result.serialize());
  for (const auto& s : shares) bundle.key_hashes.push_back(crypto::hash(view(s)));
  sodium_memzero(key.data(), key.size());
  sodium_memzero(result.data(), result.size());

  ExecuteOutput out;
  out.bundle_frame = to_consumer.seal(bundle.serialize());
  for (std::size_t i = 0; i < bindings.size(); ++i) {
    out.slip_frames.push_back(slips[i]->seal(KeySlip{bindings[i], shares[i]}.serialize()));
    sodium_memzero(shares[i].data(), shares[i].size());
  }
  out.result_hash = bundle.result_hash;
  out.key_hashes = bundle.key_hashes;
  return out;
}

void Enclave::sanitize() {
  for (auto& [d, k] : keys_) sodium_memzero(k.data(), k.size());
  keys_.clear();
  for (auto& p : plaintext_) sodium_memzero(p.data(), p.size());
  plaintext_.clear();
  channels_.clear();
  sanitized_ = true;
}

void Enclave::halt() {
  sanitize();
  halted_ = true;
}

}  // namespace dm::tee
