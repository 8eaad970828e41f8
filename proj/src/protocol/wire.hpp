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

#include <optional>
#include <string>
#include <vector>

#include "common/bytes.hpp"
#include "common/error.hpp"
#include "common/types.hpp"
#include "tee/attestation.hpp"
#include "tee/messages.hpp"

// Off-chain message bodies. Everything here travels in the clear; keys and
// data only ever move inside channel frames.
namespace dm::protocol {

void write_binding(ByteWriter& w, const tee::Binding& b);
tee::Binding read_binding(ByteReader& r);
std::string binding_label(const tee::Binding& b);  // "c3.0"

// DC -> CEE: what to compute and for whom.
struct ComputeRequest {
  std::string operation;
  std::vector<tee::Binding> bindings;
  std::vector<std::string> releasers;  // key slip recipient per binding
  std::vector<AccountId> owners;
  std::vector<std::string> descriptors;  // aligned with owners
  crypto::Digest nonce;                  // the DC's attestation challenge

  Bytes serialize() const;
  static ComputeRequest parse(ByteView wire);
};

// Attestation challenge. Stage 3 challenges name the record they are for.
struct Challenge {
  std::optional<tee::Binding> binding;
  crypto::Digest nonce;

  Bytes serialize() const;
  static Challenge parse(ByteView wire);
};

// Attested host -> challenger: the quote and the service's report on it, or
// the error the service returned.
struct AttestReply {
  std::optional<tee::Binding> binding;
  crypto::Digest nonce;
  ErrorCode error = ErrorCode::kOk;
  std::optional<tee::Quote> quote;
  std::optional<tee::AttestationReport> report;

  Bytes serialize() const;
  static AttestReply parse(ByteView wire);
};

}  // namespace dm::protocol
