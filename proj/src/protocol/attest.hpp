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

#include <string>

#include "protocol/wire.hpp"
#include "protocol/world.hpp"

namespace dm::protocol {

// Attested side. The challenge occupies one of the host's attestation
// workers for the service time; the reply (quote plus the service's report,
// or the service error) goes back when the worker finishes.
void serve_challenge(World& world, const std::string& attestee, const tee::Enclave& enclave,
                     const std::string& challenger, const Challenge& challenge,
                     const std::string& phase);

struct VerifiedReport {
  ErrorCode code = ErrorCode::kOk;
  tee::AttestationReport report;
};

// Challenger side: service error, signature, verdict, nonce and measurement.
// Logs "<phase>:attest" with the verdict either way.
VerifiedReport verify_reply(World& world, const std::string& challenger, const AttestReply& reply,
                            const crypto::Digest& nonce, const crypto::Digest& expected_measurement,
                            const std::string& phase);

crypto::Digest fresh_nonce(crypto::Drbg& rng);

}  // namespace dm::protocol
