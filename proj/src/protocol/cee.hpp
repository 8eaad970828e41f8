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

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "protocol/wire.hpp"
#include "protocol/world.hpp"

namespace dm::protocol {

// Confidential execution environment host. Loads one enclave per compute
// request, answers attestation challenges for it, collects keys and runs it
// once every party's channel and every key is in place.
class Cee final : public Actor {
 public:
  explicit Cee(World& world);

  void on_message(const sim::Envelope& m) override;
  void on_chain(std::span<const ledger::Receipt> receipts) override;
  void on_halt() override;

  std::size_t job_count() const { return jobs_.size(); }

 private:
  struct Job {
    ComputeRequest request;
    std::unique_ptr<tee::Enclave> enclave;
    std::map<std::string, std::string> channels;  // party -> channel id
    bool executed = false;
  };

  void on_compute(const sim::Envelope& m);
  void on_challenge(const std::string& from, const Challenge& c);
  void on_hello(const sim::Envelope& m);
  void deliver_pending();
  void maybe_execute(Job& job);
  Job* job_for(const tee::Binding& b);

  crypto::Drbg rng_;
  std::vector<std::unique_ptr<Job>> jobs_;
  std::vector<std::pair<std::string, Challenge>> waiting_challenges_;
  std::vector<Bytes> pending_frames_;
};

}  // namespace dm::protocol
