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

#include "common/error.hpp"

namespace dm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk: return "ok";
    case ErrorCode::kBadSignature: return "bad-signature";
    case ErrorCode::kInsufficientFunds: return "insufficient-funds";
    case ErrorCode::kBadNonce: return "bad-nonce";
    case ErrorCode::kUnknownAccount: return "unknown-account";
    case ErrorCode::kUnknownContract: return "unknown-contract";
    case ErrorCode::kUnknownFunction: return "unknown-function";
    case ErrorCode::kContractDestroyed: return "contract-destroyed";
    case ErrorCode::kMalformedPolicy: return "malformed-policy";
    case ErrorCode::kWrongSender: return "wrong-sender";
    case ErrorCode::kWrongState: return "wrong-state";
    case ErrorCode::kNotBroker: return "not-broker";
    case ErrorCode::kUnknownRecord: return "unknown-record";
    case ErrorCode::kAuthFailure: return "auth-failure";
    case ErrorCode::kMalformedSignature: return "malformed-signature";
    case ErrorCode::kStaleNonce: return "stale-nonce";
    case ErrorCode::kServiceUnreachable: return "service-unreachable";
    case ErrorCode::kAttestationRequired: return "attestation-required";
    case ErrorCode::kChannelClosed: return "channel-closed";
    case ErrorCode::kMissingKey: return "missing-key";
    case ErrorCode::kDecryptFailure: return "decrypt-failure";
    case ErrorCode::kIntegrityMismatch: return "integrity-mismatch";
    case ErrorCode::kConfigError: return "config-error";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kMalformed: return "malformed";
    case ErrorCode::kIo: return "io-error";
  }
  return "unknown-error";
}

}  // namespace dm
