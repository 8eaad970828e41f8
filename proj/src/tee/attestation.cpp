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

#include "tee/attestation.hpp"

#include <algorithm>

namespace dm::tee {

Bytes Quote::signed_payload() const {
  ByteWriter w;
  w.str("quote/v1")
      .str(host)
      .fixed(measurement.bytes)
      .fixed(nonce.bytes)
      .fixed(enclave_key)
      .u8(trusted_launch ? 1 : 0);
  return w.take();
}

Bytes Quote::serialize() const {
  ByteWriter w;
  w.blob(signed_payload()).fixed(platform_signature);
  return w.take();
}

Quote Quote::parse(ByteView wire) {
  ByteReader outer(wire);
  auto payload = outer.blob();
  Quote q;
  q.platform_signature = outer.fixed<64>();
  outer.expect_done();
  ByteReader r(payload);
  if (r.str() != "quote/v1") throw Error(ErrorCode::kMalformed, "quote tag");
  q.host = r.str();
  q.measurement.bytes = r.fixed<32>();
  q.nonce.bytes = r.fixed<32>();
  q.enclave_key = r.fixed<32>();
  q.trusted_launch = r.u8() != 0;
  r.expect_done();
  return q;
}

Bytes AttestationReport::signed_payload() const {
  ByteWriter w;
  w.str("report/v1")
      .fixed(quote_digest.bytes)
      .fixed(measurement.bytes)
      .fixed(nonce.bytes)
      .fixed(enclave_key)
      .u8(static_cast<std::uint8_t>(verdict))
      .i64(issued.count());
  return w.take();
}

Bytes AttestationReport::serialize() const {
  ByteWriter w;
  w.blob(signed_payload()).fixed(service_signature);
  return w.take();
}

AttestationReport AttestationReport::parse(ByteView wire) {
  ByteReader outer(wire);
  auto payload = outer.blob();
  AttestationReport rep;
  rep.service_signature = outer.fixed<64>();
  outer.expect_done();
  ByteReader r(payload);
  if (r.str() != "report/v1") throw Error(ErrorCode::kMalformed, "report tag");
  rep.quote_digest.bytes = r.fixed<32>();
  rep.measurement.bytes = r.fixed<32>();
  rep.nonce.bytes = r.fixed<32>();
  rep.enclave_key = r.fixed<32>();
  auto v = r.u8();
  if (v > 1) throw Error(ErrorCode::kMalformed, "report verdict");
  rep.verdict = static_cast<Verdict>(v);
  rep.issued = Millis{r.i64()};
  r.expect_done();
  return rep;
}

MockIas::MockIas(const crypto::SecretSeed& service_seed, IasConfig config)
    : key_(service_seed), config_(config) {}

void MockIas::register_platform(const std::string& host, const crypto::PublicKey& key) {
  platforms_[host] = key;
}

AttestationReport MockIas::verify(const Quote& quote, Millis now) {
  if (!reachable_) throw Error(ErrorCode::kServiceUnreachable, "attestation service unreachable");
  if (!seen_nonces_.insert(quote.nonce).second) {
    throw Error(ErrorCode::kStaleNonce, "quote nonce already reported");
  }
  AttestationReport rep;
  rep.quote_digest = quote.digest();
  rep.measurement = quote.measurement;
  rep.nonce = quote.nonce;
  rep.enclave_key = quote.enclave_key;
  rep.issued = now;
  auto it = platforms_.find(quote.host);
  const bool genuine =
      it != platforms_.end() &&
      crypto::verify(it->second, quote.signed_payload(), view(quote.platform_signature));
  rep.verdict = genuine && quote.trusted_launch ? Verdict::kPass : Verdict::kFail;
  rep.service_signature = key_.sign(rep.signed_payload());
  return rep;
}

ErrorCode check_report(const AttestationReport& report, const crypto::PublicKey& ias_key,
                       const crypto::Digest& expected_nonce,
                       const crypto::Digest& expected_measurement) {
  if (!crypto::verify(ias_key, report.signed_payload(), view(report.service_signature)) ||
      report.verdict != Verdict::kPass) {
    return ErrorCode::kAttestationRequired;
  }
  if (report.nonce != expected_nonce) return ErrorCode::kStaleNonce;
  if (report.measurement != expected_measurement) return ErrorCode::kIntegrityMismatch;
  return ErrorCode::kOk;
}

AttestationPool::AttestationPool(std::size_t workers, Millis service_time)
    : workers_(workers), service_(service_time) {
  if (workers == 0) throw Error(ErrorCode::kInvalidArgument, "attestation pool needs a worker");
  for (std::size_t i = 0; i < workers; ++i) free_at_.push(Millis{0});
}

Millis AttestationPool::reserve(Millis arrival) {
  auto start = std::max(free_at_.top(), arrival);
  free_at_.pop();
  auto done = start + service_;
  free_at_.push(done);
  return done;
}

Millis attestation_makespan(std::size_t challengers, std::size_t workers,
                            const IasConfig& config) {
  AttestationPool pool(workers, config.service_time());
  Millis makespan{0};
  for (std::size_t i = 0; i < challengers; ++i) makespan = std::max(makespan, pool.reserve(Millis{0}));
  return makespan;
}

}  // namespace dm::tee
