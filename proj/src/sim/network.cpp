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

#include "sim/network.hpp"

#include <algorithm>
#include <stdexcept>

#include "common/error.hpp"

namespace dm::sim {

Network::Network(Scheduler& scheduler, Transcript& transcript, AdversaryPolicy policy,
                 Millis latency, Millis reorder_window)
    : scheduler_(scheduler),
      transcript_(transcript),
      policy_(std::move(policy)),
      latency_(latency),
      reorder_window_(reorder_window) {}

void Network::attach(const std::string& actor, const std::string& host, Handler handler) {
  actors_[actor] = {host, std::move(handler)};
}

const std::string& Network::host_of(const std::string& actor) const {
  auto it = actors_.find(actor);
  if (it == actors_.end()) throw Error(ErrorCode::kInvalidArgument, "unknown actor " + actor);
  return it->second.first;
}

void Network::log(std::string step, const Envelope& m, Fields extra) {
  Fields f{{"id", std::to_string(m.id)},
           {"cls", m.cls},
           {"from", m.from},
           {"to", m.to},
           {"bytes", std::to_string(m.payload.size())},
           {"digest", crypto::hash(m.payload).hex().substr(0, 16)}};
  for (auto& e : extra) f.push_back(std::move(e));
  transcript_.add(scheduler_.now(), "net", std::move(step), std::move(f));
}

void Network::send(Envelope m) {
  m.from_host = host_of(m.from);
  m.to_host = host_of(m.to);
  if (halted(m.from_host)) return;  // a halted host sends nothing
  m.id = sent_.size();
  const auto rule = policy_.decide(m.meta());
  if (rule.action == Action::kCorrupt && !m.payload.empty()) {
    // The sending host rewrites its own bytes before they leave.
    m.payload.back() ^= 0x5a;
    log("corrupt", m);
  }
  const auto index = sent_.size();
  sent_digest_.push_back(crypto::hash(m.payload));
  sent_.push_back(std::move(m));
  delivered_.push_back(false);
  const auto& msg = sent_[index];
  log("send", msg);

  const Millis due = scheduler_.now() + latency_;
  const Link link{msg.from, msg.to};
  switch (rule.action) {
    case Action::kDrop:
      log("drop", msg);
      return;
    case Action::kDelay:
      log("delay", msg, {{"ms", std::to_string(rule.delay.count())}});
      schedule_delivery(index, due + rule.delay);
      return;
    case Action::kReorder:
      log("reorder", msg);
      held_[link].push_back(index);
      scheduler_.at(due + reorder_window_, EventKind::kMessageDelivery, [this, index, link] {
        auto& h = held_[link];
        auto it = std::find(h.begin(), h.end(), index);
        if (it == h.end()) return;
        h.erase(it);
        deliver(index);
      });
      return;
    case Action::kDeliver:
    case Action::kCorrupt:
      schedule_delivery(index, due);
      // Anything held back on this link now lands behind this message.
      if (auto it = held_.find(link); it != held_.end() && !it->second.empty()) {
        for (auto h : it->second) schedule_delivery(h, due);
        it->second.clear();
      }
      return;
  }
}

void Network::schedule_delivery(std::size_t index, Millis at) {
  scheduler_.at(at, EventKind::kMessageDelivery, [this, index] { deliver(index); });
}

void Network::deliver(std::size_t index) {
  if (delivered_[index]) return;
  delivered_[index] = true;
  const Envelope copy = sent_[index];
  if (crypto::hash(copy.payload) != sent_digest_[index]) {
    throw std::logic_error("network altered message " + std::to_string(index) + " in flight");
  }
  if (halted(copy.to_host)) {
    log("lost", copy);
    return;
  }
  log("deliver", copy);
  actors_.at(copy.to).second(copy);
}

void Network::halt(const std::string& host) {
  if (!halted_.insert(host).second) return;
  transcript_.add(scheduler_.now(), "net", "halt", {{"host", host}});
  for (const auto& fn : halt_listeners_) fn(host);
}

}  // namespace dm::sim
