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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "common/types.hpp"

namespace dm::sim {

using Fields = std::vector<std::pair<std::string, std::string>>;

// One line: "time|actor|step|k=v k=v". Values never contain spaces or '|'.
struct Entry {
  Millis time{0};
  std::string actor;
  std::string step;
  Fields fields;

  std::optional<std::string_view> get(std::string_view key) const;
  std::string render() const;
  static Entry parse(std::string_view line);  // throws kMalformed
  bool operator==(const Entry&) const = default;
};

class Transcript {
 public:
  using Observer = std::function<void(const Entry&)>;

  void add(Millis time, std::string actor, std::string step, Fields fields = {});
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Called after every add, in registration order.
  void observe(Observer fn) { observers_.push_back(std::move(fn)); }

  std::string render() const;
  static Transcript parse(std::string_view text);

  // Entries whose step equals `step`, in order.
  std::vector<const Entry*> find(std::string_view step) const;

 private:
  std::vector<Entry> entries_;
  std::vector<Observer> observers_;
};

}  // namespace dm::sim
