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

#include <cstddef>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "common/bytes.hpp"
#include "common/error.hpp"
#include "common/types.hpp"
#include "crypto/crypto.hpp"

namespace dm::tee {

struct IasConfig {
  Millis revocation_list_latency{100};
  Millis report_latency{500};

  Millis service_time() const { return revocation_list_latency + report_latency; }
};

// Produced by the platform quoting service for one enclave instance.
struct Quote {
  std::string host;
  crypto::Digest measurement;
  crypto::Digest nonce;           // challenger supplied
  crypto::PublicKey enclave_key;  // X25519, for channel setup
  bool trusted_launch = true;     // false if the platform launched it compromised
  crypto::Signature platform_signature{};

  Bytes signed_payload() const;
  Bytes serialize() const;
  static Quote parse(ByteView wire);
  crypto::Digest digest() const { return crypto::hash(serialize()); }
};

enum class Verdict : std::uint8_t { kFail = 0, kPass = 1 };

struct AttestationReport {
  crypto::Digest quote_digest;
  crypto::Digest measurement;
  crypto::Digest nonce;
  crypto::PublicKey enclave_key{};
  Verdict verdict = Verdict::kFail;
  Millis issued{0};
  crypto::Signature service_signature{};

  Bytes signed_payload() const;
  Bytes serialize() const;
  static AttestationReport parse(ByteView wire);
  crypto::Digest digest() const { return crypto::hash(serialize()); }
};

class MockIas {
 public:
  MockIas(const crypto::SecretSeed& service_seed, IasConfig config = {});

  const IasConfig& config() const { return config_; }
  const crypto::PublicKey& public_key() const { return key_.public_key(); }

  void register_platform(const std::string& host, const crypto::PublicKey& key);
  void set_reachable(bool reachable) { reachable_ = reachable; }

  // Throws kServiceUnreachable, or kStaleNonce when the quote's nonce was
  // already reported. A bad platform signature or an untrusted launch yields
  // a signed kFail report.
  AttestationReport verify(const Quote& quote, Millis now);

 private:
  crypto::SigningKey key_;
  IasConfig config_;
  std::map<std::string, crypto::PublicKey> platforms_;
  std::set<crypto::Digest> seen_nonces_;
  bool reachable_ = true;
};

// Challenger side: service signature, pass verdict and nonce freshness give
// kAttestationRequired / kStaleNonce; a measurement other than the one the
// contract authorizes gives kIntegrityMismatch. kOk otherwise.
ErrorCode check_report(const AttestationReport& report, const crypto::PublicKey& ias_key,
                       const crypto::Digest& expected_nonce,
                       const crypto::Digest& expected_measurement);

// W attestation workers as a simulated resource: a request arriving at t is
// served by the earliest free worker.
class AttestationPool {
 public:
  AttestationPool(std::size_t workers, Millis service_time);

  // Returns the completion time.
  Millis reserve(Millis arrival);
  std::size_t workers() const { return workers_; }
  Millis service_time() const { return service_; }

 private:
  std::size_t workers_;
  Millis service_;
  std::priority_queue<Millis, std::vector<Millis>, std::greater<>> free_at_;
};

// N simultaneous challengers against W workers.
Millis attestation_makespan(std::size_t challengers, std::size_t workers,
                            const IasConfig& config = {});

}  // namespace dm::tee
