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

#include "sim/scheduler.hpp"

#include "common/error.hpp"

namespace dm::sim {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kMessageDelivery: return "message-delivery";
    case EventKind::kLedgerAdvance: return "ledger-advance";
    case EventKind::kActorWakeup: return "actor-wakeup";
    case EventKind::kAttestationSlot: return "attestation-slot";
  }
  return "?";
}

void Scheduler::at(Millis at, EventKind kind, Handler fn) {
  if (at < now_) {
    throw Error(ErrorCode::kInvalidArgument, "event scheduled in the past at " +
                                                 std::to_string(at.count()) + " < " +
                                                 std::to_string(now_.count()));
  }
  queue_.push(Event{at, seq_++, kind, std::move(fn)});
}

bool Scheduler::step() {
  if (queue_.empty()) return false;
  // top() is const, so the event is copied out.
  Event ev = queue_.top();
  queue_.pop();
  now_ = ev.time;
  ++processed_;
  ++by_kind_[static_cast<std::size_t>(ev.kind)];
  ev.fn();
  return true;
}

void Scheduler::run(Millis horizon) {
  while (!queue_.empty() && queue_.top().time <= horizon) step();
}

}  // namespace dm::sim
