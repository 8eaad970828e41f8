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

#ifndef DATAMARKET_DATAMARKET_H
#define DATAMARKET_DATAMARKET_H

#include <stddef.h>
#include <stdint.h>

#if defined(DM_BUILDING_LIBRARY)
#define DM_API __attribute__((visibility("default")))
#else
#define DM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dm_status {
  DM_OK = 0,
  DM_ERR_INVALID_ARGUMENT = 1,
  DM_ERR_CONFIG = 2,
  DM_ERR_IO = 3,
  DM_ERR_INTERNAL = 4
} dm_status;

typedef struct dm_scenario dm_scenario;
typedef struct dm_run dm_run;

/* Message of the last failing call on this thread, "" if none. */
DM_API const char* dm_last_error(void);
DM_API const char* dm_version(void);

/* Built-in scenario names, NULL past the end. */
DM_API const char* dm_scenario_name_at(size_t index);

DM_API dm_status dm_scenario_from_name(const char* name, dm_scenario** out);
DM_API dm_status dm_scenario_from_config_text(const char* text, dm_scenario** out);
DM_API dm_status dm_scenario_from_config_file(const char* path, dm_scenario** out);
DM_API dm_status dm_scenario_set_seed(dm_scenario* scenario, uint64_t seed);
/* count 0 turns a sweep back into a single run. */
DM_API dm_status dm_scenario_set_sweep(dm_scenario* scenario, size_t count);
/* Config text that parses back to the same scenario. Free with dm_string_free. */
DM_API dm_status dm_scenario_render(const dm_scenario* scenario, char** out);
DM_API void dm_scenario_free(dm_scenario* scenario);

DM_API dm_status dm_run_scenario(const dm_scenario* scenario, dm_run** out);
/* 1 if every invariant and scenario expectation held. */
DM_API int dm_run_passed(const dm_run* run);
DM_API size_t dm_run_count(const dm_run* run);
/* Strings below are owned by the run and live until dm_run_free. */
DM_API const char* dm_run_transcript(const dm_run* run);
DM_API const char* dm_run_metrics(const dm_run* run);
DM_API const char* dm_run_verdict(const dm_run* run);
DM_API const char* dm_run_outcome(const dm_run* run);
DM_API void dm_run_free(dm_run* run);

typedef struct dm_bench_row {
  size_t workers;
  int64_t makespan_ms;
  size_t attestations;
} dm_bench_row;

/* rows must hold count entries. */
DM_API dm_status dm_bench_attest(size_t owners, const size_t* workers, size_t count,
                                 dm_bench_row* rows);

typedef struct dm_paradigm_row {
  size_t owners;
  size_t ida_flow_calls;
  size_t db_flow_calls;
  size_t db_setup_calls;
  int ida_completed;
  int db_completed;
} dm_paradigm_row;

DM_API dm_status dm_compare_paradigms(size_t owners, dm_paradigm_row* row);

DM_API void dm_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
