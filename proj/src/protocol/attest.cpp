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

#include "protocol/attest.hpp"

namespace dm::protocol {

void serve_challenge(World& world, const std::string& attestee, const tee::Enclave& enclave,
                     const std::string& challenger, const Challenge& challenge,
                     const std::string& phase) {
  const Millis queued = world.now();
  const Millis done = world.pool(enclave.host()).reserve(queued);
  const std::string host = enclave.host();
  world.scheduler().at(done, sim::EventKind::kAttestationSlot, [&world, &enclave, attestee,
                                                               challenger, challenge, phase,
                                                               queued, host] {
    if (world.net().halted(host) || enclave.halted()) return;
    AttestReply reply;
    reply.binding = challenge.binding;
    reply.nonce = challenge.nonce;
    try {
      reply.quote = enclave.quote(challenge.nonce, world.platform(host));
      reply.report = world.ias().verify(*reply.quote, world.now());
    } catch (const Error& e) {
      reply.error = e.code();
    }
    sim::Fields f{{"challenger", challenger},
                  {"instance", std::to_string(enclave.instance())},
                  {"queued", std::to_string(queued.count())},
                  {"done", std::to_string(world.now().count())}};
    if (reply.report) f.emplace_back("report", short_digest(reply.report->digest()));
    if (reply.error != ErrorCode::kOk) f.emplace_back("code", std::string(to_string(reply.error)));
    world.log(attestee, phase + ":attest-slot", std::move(f));
    world.net().send(sim::Envelope{0, attestee, challenger, "quote", false, reply.serialize()});
  });
}

VerifiedReport verify_reply(World& world, const std::string& challenger, const AttestReply& reply,
                            const crypto::Digest& nonce, const crypto::Digest& expected_measurement,
                            const std::string& phase) {
  VerifiedReport out;
  if (reply.error != ErrorCode::kOk) {
    out.code = reply.error;
  } else if (!reply.report) {
    out.code = ErrorCode::kAttestationRequired;
  } else {
    out.report = *reply.report;
    out.code = tee::check_report(out.report, world.ias().public_key(), nonce, expected_measurement);
  }
  sim::Fields f{{"verdict", out.code == ErrorCode::kOk ? "pass" : "fail"}};
  if (out.code != ErrorCode::kOk) f.emplace_back("code", std::string(to_string(out.code)));
  if (reply.report) {
    f.emplace_back("report", short_digest(reply.report->digest()));
    f.emplace_back("measurement", short_digest(reply.report->measurement));
  }
  f.emplace_back("expected", short_digest(expected_measurement));
  if (reply.binding) f.emplace_back("binding", binding_label(*reply.binding));
  world.log(challenger, phase + ":attest", std::move(f));
  return out;
}

crypto::Digest fresh_nonce(crypto::Drbg& rng) { return crypto::Digest{rng.key_material()}; }

}  // namespace dm::protocol
