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

#include <cstdint>
#include <functional>
#include <queue>
#include <string_view>
#include <vector>

#include "common/types.hpp"

namespace dm::sim {

enum class EventKind : std::uint8_t {
  kMessageDelivery,
  kLedgerAdvance,
  kActorWakeup,
  kAttestationSlot,
};

std::string_view to_string(EventKind kind);

// Discrete-event loop. Events run in (time, insertion order); a handler may
// schedule at the current time or later, never earlier.
class Scheduler {
 public:
  using Handler = std::function<void()>;

  Millis now() const { return now_; }

  // Throws kInvalidArgument if `at` is in the past.
  void at(Millis at, EventKind kind, Handler fn);
  void after(Millis delay, EventKind kind, Handler fn) { at(now_ + delay, kind, std::move(fn)); }

  // Runs one event; false when the queue is empty.
  bool step();
  // Runs until the queue is empty or the next event is later than `horizon`.
  void run(Millis horizon = Millis::max());

  bool idle() const { return queue_.empty(); }
  std::size_t processed() const { return processed_; }
  std::size_t processed(EventKind kind) const { return by_kind_[static_cast<std::size_t>(kind)]; }

 private:
  struct Event {
    Millis time;
    std::uint64_t seq;
    EventKind kind;
    Handler fn;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  Millis now_{0};
  std::uint64_t seq_ = 0;
  std::size_t processed_ = 0;
  std::size_t by_kind_[4] = {};
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
};

}  // namespace dm::sim
