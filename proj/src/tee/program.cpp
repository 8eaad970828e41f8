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

#include "tee/program.hpp"

#include <vector>

#include "common/error.hpp"
#include "tee/workload.hpp"

namespace dm::tee {

EnclaveProgram column_stats_program() {
  EnclaveProgram p;
  p.operation_id = "column-stats";
  p.code =
      "column-stats/v1 input=csv(milli) output=csv(column,count,mean,stddev) "
      "mean=floor(sum*1000/n) stddev=floor(sqrt((n*sumsq-sum^2)*1e6/n^2))";
  p.run = [](std::span<const Bytes> inputs) {
    std::vector<Table> tables;
    tables.reserve(inputs.size());
    for (const auto& in : inputs) tables.push_back(parse_csv(to_string(in)));
    return to_bytes(render_stats(column_stats(tables)));
  };
  return p;
}

EnclaveProgram key_store_program() {
  EnclaveProgram p;
  p.operation_id = "broker-keystore";
  p.code = "broker-keystore/v1 store=provision/v1 forward=provision/v1";
  p.run = [](std::span<const Bytes>) { return Bytes{}; };
  return p;
}

void ProgramManifest::add(EnclaveProgram program) {
  auto id = program.operation_id;
  programs_.insert_or_assign(std::move(id), std::move(program));
}

const EnclaveProgram* ProgramManifest::find(std::string_view operation_id) const {
  auto it = programs_.find(operation_id);
  return it == programs_.end() ? nullptr : &it->second;
}

const EnclaveProgram& ProgramManifest::at(std::string_view operation_id) const {
  if (const auto* p = find(operation_id)) return *p;
  throw Error(ErrorCode::kInvalidArgument, "unknown operation " + std::string(operation_id));
}

std::string ProgramManifest::render() const {
  std::string out;
  for (const auto& [id, p] : programs_) {
    out += "op=" + id + " measurement=" + p.measurement().hex() + "\n";
  }
  return out;
}

ProgramManifest default_manifest() {
  ProgramManifest m;
  m.add(column_stats_program());
  m.add(key_store_program());
  return m;
}

}  // namespace dm::tee
