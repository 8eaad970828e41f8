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

#include "protocol/wire.hpp"

namespace dm::protocol {
namespace {

void write_opt_binding(ByteWriter& w, const std::optional<tee::Binding>& b) {
  w.u8(b ? 1 : 0);
  if (b) write_binding(w, *b);
}

std::optional<tee::Binding> read_opt_binding(ByteReader& r) {
  if (r.u8() == 0) return std::nullopt;
  return read_binding(r);
}

}  // namespace

void write_binding(ByteWriter& w, const tee::Binding& b) { w.u32(b.contract.value).u64(b.idx); }

tee::Binding read_binding(ByteReader& r) {
  tee::Binding b;
  b.contract = ContractId{r.u32()};
  b.idx = r.u64();
  return b;
}

std::string binding_label(const tee::Binding& b) {
  return contract_label(b.contract) + "." + std::to_string(b.idx);
}

Bytes ComputeRequest::serialize() const {
  ByteWriter w;
  w.str("compute/v1").str(operation).u32(static_cast<std::uint32_t>(bindings.size()));
  for (std::size_t i = 0; i < bindings.size(); ++i) {
    write_binding(w, bindings[i]);
    w.str(releasers.at(i));
  }
  w.u32(static_cast<std::uint32_t>(owners.size()));
  for (std::size_t i = 0; i < owners.size(); ++i) w.u32(owners[i].value).str(descriptors.at(i));
  w.fixed(nonce.bytes);
  return w.take();
}

ComputeRequest ComputeRequest::parse(ByteView wire) {
  ByteReader r(wire);
  if (r.str() != "compute/v1") throw Error(ErrorCode::kMalformed, "not a compute request");
  ComputeRequest c;
  c.operation = r.str();
  for (auto n = r.u32(); n > 0; --n) {
    c.bindings.push_back(read_binding(r));
    c.releasers.push_back(r.str());
  }
  for (auto n = r.u32(); n > 0; --n) {
    c.owners.push_back(AccountId{r.u32()});
    c.descriptors.push_back(r.str());
  }
  c.nonce.bytes = r.fixed<32>();
  r.expect_done();
  return c;
}

Bytes Challenge::serialize() const {
  ByteWriter w;
  w.str("challenge/v1");
  write_opt_binding(w, binding);
  w.fixed(nonce.bytes);
  return w.take();
}

Challenge Challenge::parse(ByteView wire) {
  ByteReader r(wire);
  if (r.str() != "challenge/v1") throw Error(ErrorCode::kMalformed, "not a challenge");
  Challenge c;
  c.binding = read_opt_binding(r);
  c.nonce.bytes = r.fixed<32>();
  r.expect_done();
  return c;
}

Bytes AttestReply::serialize() const {
  ByteWriter w;
  w.str("attest-reply/v1");
  write_opt_binding(w, binding);
  w.fixed(nonce.bytes).u32(static_cast<std::uint32_t>(error));
  w.u8(quote ? 1 : 0);
  if (quote) w.blob(quote->serialize());
  w.u8(report ? 1 : 0);
  if (report) w.blob(report->serialize());
  return w.take();
}

AttestReply AttestReply::parse(ByteView wire) {
  ByteReader r(wire);
  if (r.str() != "attest-reply/v1") throw Error(ErrorCode::kMalformed, "not an attest reply");
  AttestReply a;
  a.binding = read_opt_binding(r);
  a.nonce.bytes = r.fixed<32>();
  a.error = static_cast<ErrorCode>(r.u32());
  if (r.u8()) a.quote = tee::Quote::parse(r.blob());
  if (r.u8()) a.report = tee::AttestationReport::parse(r.blob());
  r.expect_done();
  return a;
}

}  // namespace dm::protocol
