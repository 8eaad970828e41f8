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

#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include "common/bytes.hpp"
#include "crypto/crypto.hpp"

namespace dm::tee {

// Deterministic function over decrypted datasets; returns the result plaintext.
using ProgramFn = std::function<Bytes(std::span<const Bytes> inputs)>;

struct EnclaveProgram {
  std::string operation_id;
  std::string code;  // the descriptor that gets measured
  ProgramFn run;

  crypto::Digest measurement() const { return crypto::hash(std::string_view(code)); }
};

// Per-column count/mean/stddev over CSV tables.
EnclaveProgram column_stats_program();
// Broker-side key store. Holds owner keys between onboarding and use.
EnclaveProgram key_store_program();

// operation id -> program. Contracts store measurement(op) as their pOP.
class ProgramManifest {
 public:
  void add(EnclaveProgram program);
  const EnclaveProgram* find(std::string_view operation_id) const;
  // Throws kInvalidArgument for an unknown operation.
  const EnclaveProgram& at(std::string_view operation_id) const;
  crypto::Digest measurement(std::string_view operation_id) const { return at(operation_id).measurement(); }
  // "op=<id> measurement=<hex>" per line, sorted by id.
  std::string render() const;

 private:
  std::map<std::string, EnclaveProgram, std::less<>> programs_;
};

ProgramManifest default_manifest();

}  // namespace dm::tee
