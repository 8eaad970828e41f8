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

#include "datamarket/datamarket.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <vector>
#include <string>

#include "common/error.hpp"
#include "harness/scenario.hpp"
#include "scenario/config.hpp"

struct dm_scenario {
  dm::harness::Scenario s;
};

struct dm_run {
  dm::harness::RunResult result;
  std::string transcript;
  std::string verdict;
  bool passed = false;
};

namespace {

thread_local std::string last_error;

dm_status fail(dm_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

dm_status map_error(const dm::Error& e) {
  switch (e.code()) {
    case dm::ErrorCode::kConfigError:
    case dm::ErrorCode::kMalformed:
      return fail(DM_ERR_CONFIG, e.what());
    case dm::ErrorCode::kIo:
      return fail(DM_ERR_IO, e.what());
    case dm::ErrorCode::kInvalidArgument:
      return fail(DM_ERR_INVALID_ARGUMENT, e.what());
    default:
      return fail(DM_ERR_INTERNAL, e.what());
  }
}

template <typename Fn>
dm_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    fn();
    return DM_OK;
  } catch (const dm::Error& e) {
    return map_error(e);
  } catch (const std::bad_alloc&) {
    return fail(DM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(DM_ERR_INTERNAL, e.what());
  }
}

dm_status null_arg(const char* what) {
  return fail(DM_ERR_INVALID_ARGUMENT, std::string(what) + " is null");
}

dm_status make_scenario(dm::harness::Scenario s, dm_scenario** out) {
  *out = new dm_scenario{std::move(s)};
  return DM_OK;
}

}  // namespace

extern "C" {

const char* dm_last_error(void) { return last_error.c_str(); }

const char* dm_version(void) { return "1.0.0"; }

const char* dm_scenario_name_at(size_t index) {
  constexpr auto n = std::size(dm::harness::kScenarioNames);
  return index < n ? dm::harness::kScenarioNames[index] : nullptr;
}

dm_status dm_scenario_from_name(const char* name, dm_scenario** out) {
  if (!name) return null_arg("name");
  if (!out) return null_arg("out");
  return guarded([&] { make_scenario(dm::harness::named_scenario(name), out); });
}

dm_status dm_scenario_from_config_text(const char* text, dm_scenario** out) {
  if (!text) return null_arg("text");
  if (!out) return null_arg("out");
  return guarded([&] { make_scenario(dm::scenario::parse_config(text), out); });
}

dm_status dm_scenario_from_config_file(const char* path, dm_scenario** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guarded([&] { make_scenario(dm::scenario::load_config(path), out); });
}

dm_status dm_scenario_set_seed(dm_scenario* scenario, uint64_t seed) {
  if (!scenario) return null_arg("scenario");
  scenario->s.config.seed = seed;
  return DM_OK;
}

dm_status dm_scenario_set_sweep(dm_scenario* scenario, size_t count) {
  if (!scenario) return null_arg("scenario");
  scenario->s.config.sweep = count;
  return DM_OK;
}

dm_status dm_scenario_render(const dm_scenario* scenario, char** out) {
  if (!scenario) return null_arg("scenario");
  if (!out) return null_arg("out");
  return guarded([&] {
    const auto text = dm::scenario::render_config(scenario->s);
    *out = static_cast<char*>(std::malloc(text.size() + 1));
    if (!*out) throw std::bad_alloc();
    std::memcpy(*out, text.c_str(), text.size() + 1);
  });
}

void dm_scenario_free(dm_scenario* scenario) { delete scenario; }

dm_status dm_run_scenario(const dm_scenario* scenario, dm_run** out) {
  if (!scenario) return null_arg("scenario");
  if (!out) return null_arg("out");
  return guarded([&] {
    auto run = std::make_unique<dm_run>();
    run->result = dm::harness::run(scenario->s);
    run->transcript = run->result.transcript.render();
    run->verdict = run->result.verdict.render();
    run->passed = run->result.verdict.passed();
    *out = run.release();
  });
}

int dm_run_passed(const dm_run* run) { return run && run->passed ? 1 : 0; }

size_t dm_run_count(const dm_run* run) { return run ? run->result.runs : 0; }

const char* dm_run_transcript(const dm_run* run) { return run ? run->transcript.c_str() : ""; }

const char* dm_run_metrics(const dm_run* run) { return run ? run->result.metrics_text.c_str() : ""; }

const char* dm_run_verdict(const dm_run* run) { return run ? run->verdict.c_str() : ""; }

const char* dm_run_outcome(const dm_run* run) { return run ? run->result.outcome.c_str() : ""; }

void dm_run_free(dm_run* run) { delete run; }

dm_status dm_bench_attest(size_t owners, const size_t* workers, size_t count, dm_bench_row* rows) {
  if (count > 0 && !workers) return null_arg("workers");
  if (count > 0 && !rows) return null_arg("rows");
  return guarded([&] {
    const auto out = dm::harness::bench_attest(owners, std::vector<std::size_t>(workers, workers + count));
    for (std::size_t i = 0; i < out.size(); ++i) {
      rows[i] = dm_bench_row{out[i].workers, out[i].makespan.count(), out[i].attestations};
    }
  });
}

dm_status dm_compare_paradigms(size_t owners, dm_paradigm_row* row) {
  if (!row) return null_arg("row");
  return guarded([&] {
    const auto r = dm::harness::compare_paradigms(owners);
    *row = dm_paradigm_row{r.owners,          r.ida_flow_calls,      r.db_flow_calls,
                           r.db_setup_calls,  r.ida_completed ? 1 : 0, r.db_completed ? 1 : 0};
  });
}

void dm_string_free(char* s) { std::free(s); }

}  // extern "C"
