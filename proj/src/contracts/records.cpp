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

#include "contracts/records.hpp"

#include <algorithm>
#include <set>

#include "common/error.hpp"

namespace dm::contracts {

Bytes Policy::encode() const {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(dataset.size()));
  for (const auto& d : dataset) w.str(d);
  w.i64(price).fixed(operation.bytes);
  w.u32(static_cast<std::uint32_t>(consumers.size()));
  for (auto c : consumers) w.u32(c.value);
  w.i64(request_timeout.count());
  return w.take();
}

Policy Policy::decode(ByteReader& in) {
  Policy p;
  auto n = in.u32();
  for (std::uint32_t i = 0; i < n; ++i) p.dataset.push_back(in.str());
  p.price = in.i64();
  p.operation.bytes = in.fixed<32>();
  auto m = in.u32();
  for (std::uint32_t i = 0; i < m; ++i) p.consumers.push_back(AccountId{in.u32()});
  p.request_timeout = Millis{in.i64()};
  return p;
}

void Policy::validate() const {
  if (dataset.empty()) throw Error(ErrorCode::kMalformedPolicy, "empty dataset");
  if (std::set<std::string>(dataset.begin(), dataset.end()).size() != dataset.size()) {
    throw Error(ErrorCode::kMalformedPolicy, "duplicate descriptor");
  }
  if (price < 0) throw Error(ErrorCode::kMalformedPolicy, "negative price");
  if (request_timeout.count() <= 0) {
    throw Error(ErrorCode::kMalformedPolicy, "timeout must be positive");
  }
}

Bytes BrokerConfig::encode() const {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(operations.size()));
  for (const auto& op : operations) w.fixed(op.bytes);
  w.i64(request_timeout.count());
  return w.take();
}

BrokerConfig BrokerConfig::decode(ByteReader& in) {
  BrokerConfig c;
  auto n = in.u32();
  for (std::uint32_t i = 0; i < n; ++i) c.operations.push_back(crypto::Digest{in.fixed<32>()});
  c.request_timeout = Millis{in.i64()};
  return c;
}

void BrokerConfig::validate() const {
  if (operations.empty()) throw Error(ErrorCode::kMalformedPolicy, "empty operation list");
  if (request_timeout.count() <= 0) {
    throw Error(ErrorCode::kMalformedPolicy, "timeout must be positive");
  }
}

std::string_view to_string(RecordStatus status) {
  switch (status) {
    case RecordStatus::kWaitComputation: return "WAIT_COMPUTATION";
    case RecordStatus::kWaitComplete: return "WAIT_COMPLETE";
    case RecordStatus::kComplete: return "COMPLETE";
    case RecordStatus::kCanceled: return "CANCELED";
  }
  return "?";
}

std::optional<RecordStatus> parse_record_status(std::string_view text) {
  for (auto s : {RecordStatus::kWaitComputation, RecordStatus::kWaitComplete,
                 RecordStatus::kComplete, RecordStatus::kCanceled}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

bool is_terminal(RecordStatus status) {
  return status == RecordStatus::kComplete || status == RecordStatus::kCanceled;
}

bool is_allowed_transition(RecordStatus from, RecordStatus to) {
  switch (from) {
    case RecordStatus::kWaitComputation:
      return to == RecordStatus::kWaitComplete || to == RecordStatus::kCanceled;
    case RecordStatus::kWaitComplete:
      return to == RecordStatus::kComplete || to == RecordStatus::kCanceled;
    default: return false;
  }
}

}  // namespace dm::contracts
