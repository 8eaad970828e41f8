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

/* Exercises the public header from plain C. */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "datamarket/datamarket.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static void test_names(void) {
  size_t n = 0;
  while (dm_scenario_name_at(n)) ++n;
  EXPECT(n == 6);
  EXPECT(strcmp(dm_scenario_name_at(1), "honest-db") == 0);
}

static void test_honest_run(void) {
  dm_scenario* sc = NULL;
  dm_run* a = NULL;
  dm_run* b = NULL;
  EXPECT(dm_scenario_from_name("honest-db", &sc) == DM_OK);
  EXPECT(dm_run_scenario(sc, &a) == DM_OK);
  EXPECT(dm_run_scenario(sc, &b) == DM_OK);
  EXPECT(dm_run_passed(a) == 1);
  EXPECT(dm_run_count(a) == 1);
  EXPECT(strcmp(dm_run_outcome(a), "completed") == 0);
  EXPECT(strcmp(dm_run_transcript(a), dm_run_transcript(b)) == 0);
  EXPECT(strstr(dm_run_metrics(a), "flow_calls=3\n") != NULL);
  EXPECT(strstr(dm_run_verdict(a), "atomicity: pass") != NULL);
  dm_run_free(a);
  dm_run_free(b);

  EXPECT(dm_scenario_set_seed(sc, 42) == DM_OK);
  EXPECT(dm_run_scenario(sc, &a) == DM_OK);
  EXPECT(dm_run_passed(a) == 1);
  dm_run_free(a);
  dm_scenario_free(sc);
}

static void test_config_text(void) {
  dm_scenario* sc = NULL;
  char* text = NULL;
  dm_scenario* back = NULL;
  EXPECT(dm_scenario_from_config_text("[scenario]\npreset = timeout-cancel\n[market]\nrows = 10\n", &sc) ==
         DM_OK);
  EXPECT(dm_scenario_render(sc, &text) == DM_OK);
  EXPECT(text && strstr(text, "rows = 10") != NULL);
  EXPECT(dm_scenario_from_config_text(text, &back) == DM_OK);
  dm_string_free(text);
  dm_scenario_free(back);

  {
    dm_run* r = NULL;
    EXPECT(dm_run_scenario(sc, &r) == DM_OK);
    EXPECT(dm_run_passed(r) == 1);
    EXPECT(strcmp(dm_run_outcome(r), "canceled") == 0);
    dm_run_free(r);
  }
  dm_scenario_free(sc);
}

static void test_errors(void) {
  dm_scenario* sc = NULL;
  EXPECT(dm_scenario_from_name("nope", &sc) == DM_ERR_CONFIG);
  EXPECT(sc == NULL);
  EXPECT(strstr(dm_last_error(), "nope") != NULL);
  EXPECT(dm_scenario_from_config_text("[market]\nowners = x\n", &sc) == DM_ERR_CONFIG);
  EXPECT(dm_scenario_from_config_file("/nonexistent.ini", &sc) == DM_ERR_IO);
  EXPECT(dm_scenario_from_name(NULL, &sc) == DM_ERR_INVALID_ARGUMENT);
  EXPECT(dm_scenario_from_name("honest-db", NULL) == DM_ERR_INVALID_ARGUMENT);
  EXPECT(dm_run_scenario(NULL, NULL) == DM_ERR_INVALID_ARGUMENT);
  EXPECT(dm_scenario_set_seed(NULL, 1) == DM_ERR_INVALID_ARGUMENT);
  EXPECT(dm_run_passed(NULL) == 0);
  EXPECT(strcmp(dm_run_transcript(NULL), "") == 0);
  dm_run_free(NULL);
  dm_scenario_free(NULL);
}

static void test_experiments(void) {
  size_t workers[2] = {1, 64};
  dm_bench_row rows[2];
  dm_paradigm_row row;
  EXPECT(dm_bench_attest(160, workers, 2, rows) == DM_OK);
  EXPECT(rows[0].makespan_ms == 96000);
  EXPECT(rows[1].makespan_ms == 1800);
  EXPECT(rows[1].attestations == 160);
  EXPECT(dm_bench_attest(0, workers, 2, rows) == DM_ERR_INVALID_ARGUMENT);

  EXPECT(dm_compare_paradigms(4, &row) == DM_OK);
  EXPECT(row.ida_flow_calls == 12);
  EXPECT(row.db_flow_calls == 3);
  EXPECT(row.ida_completed && row.db_completed);
  EXPECT(dm_compare_paradigms(4, NULL) == DM_ERR_INVALID_ARGUMENT);
}

int main(void) {
  test_names();
  test_honest_run();
  test_config_text();
  test_errors();
  test_experiments();
  if (failures) {
    fprintf(stderr, "%d failures\n", failures);
    return 1;
  }
  printf("capi: ok\n");
  return 0;
}
