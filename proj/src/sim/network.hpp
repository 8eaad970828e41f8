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
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "common/bytes.hpp"
#include "crypto/crypto.hpp"
#include "sim/adversary.hpp"
#include "sim/scheduler.hpp"
#include "sim/transcript.hpp"

namespace dm::sim {

struct Envelope {
  std::uint64_t id = 0;
  std::string from;
  std::string to;
  std::string cls;
  bool confidential = false;
  Bytes payload;
  // Filled by the network from the actor directory.
  std::string from_host;
  std::string to_host;

  MessageMeta meta() const { return {cls, from_host, to_host}; }
};

// Point-to-point links with fixed latency. The adversary can schedule
// (drop, delay, reorder) messages that touch a compromised host; a
// compromised sender may also rewrite its own outgoing bytes. Bytes are never
// altered between send and delivery, which is asserted at delivery.
class Network {
 public:
  using Handler = std::function<void(const Envelope&)>;

  Network(Scheduler& scheduler, Transcript& transcript, AdversaryPolicy policy, Millis latency,
          Millis reorder_window);

  void attach(const std::string& actor, const std::string& host, Handler handler);
  const std::string& host_of(const std::string& actor) const;

  void send(Envelope message);

  void halt(const std::string& host);
  bool halted(const std::string& host) const { return halted_.count(host) > 0; }
  void on_halt(std::function<void(const std::string&)> fn) { halt_listeners_.push_back(std::move(fn)); }

  // Every message as it left its sender.
  const std::vector<Envelope>& sent() const { return sent_; }
  const AdversaryPolicy& policy() const { return policy_; }
  Millis latency() const { return latency_; }

 private:
  using Link = std::pair<std::string, std::string>;

  void schedule_delivery(std::size_t index, Millis at);
  void deliver(std::size_t index);
  void log(std::string step, const Envelope& m, Fields extra = {});

  Scheduler& scheduler_;
  Transcript& transcript_;
  AdversaryPolicy policy_;
  Millis latency_;
  Millis reorder_window_;
  std::map<std::string, std::pair<std::string, Handler>> actors_;
  std::vector<Envelope> sent_;
  std::vector<crypto::Digest> sent_digest_;
  std::vector<bool> delivered_;
  std::map<Link, std::vector<std::size_t>> held_;
  std::set<std::string> halted_;
  std::vector<std::function<void(const std::string&)>> halt_listeners_;
};

}  // namespace dm::sim
