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

// dmsim: run data-market scenarios and the desk-scale experiments.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "datamarket/datamarket.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInternal = 3;

int exit_for(dm_status s) {
  switch (s) {
    case DM_OK: return kExitPass;
    case DM_ERR_CONFIG:
    case DM_ERR_IO:
    case DM_ERR_INVALID_ARGUMENT: return kExitConfig;
    default: return kExitInternal;
  }
}

int report(dm_status s) {
  std::cerr << "dmsim: " << dm_last_error() << "\n";
  return exit_for(s);
}

bool write_out(const std::string& path, const char* text) {
  if (path == "-") {
    std::cout << text;
    return true;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "dmsim: cannot write " << path << "\n";
    return false;
  }
  return true;
}

// "1800" -> "1.8"; the bench reports to the tenth of a second.
std::string seconds(std::int64_t ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld.%03lld", static_cast<long long>(ms / 1000),
                static_cast<long long>(ms % 1000));
  std::string s = buf;
  while (s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  return s;
}

struct RunOptions {
  std::string config;
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> sweep;
  std::string transcript;
  std::string metrics;
  bool quiet = false;
};

int cmd_run(const RunOptions& o) {
  dm_scenario* sc = nullptr;
  dm_status s = DM_OK;
  if (!o.config.empty() && !o.scenario.empty()) {
    std::cerr << "dmsim: --config and --scenario are exclusive\n";
    return kExitConfig;
  }
  if (!o.config.empty()) {
    s = dm_scenario_from_config_file(o.config.c_str(), &sc);
  } else {
    s = dm_scenario_from_name(o.scenario.empty() ? "honest-db" : o.scenario.c_str(), &sc);
  }
  if (s != DM_OK) return report(s);
  if (o.seed) dm_scenario_set_seed(sc, *o.seed);
  if (o.sweep) dm_scenario_set_sweep(sc, *o.sweep);

  dm_run* run = nullptr;
  s = dm_run_scenario(sc, &run);
  dm_scenario_free(sc);
  if (s != DM_OK) return report(s);

  bool ok = true;
  if (!o.transcript.empty()) ok &= write_out(o.transcript, dm_run_transcript(run));
  if (!o.metrics.empty()) ok &= write_out(o.metrics, dm_run_metrics(run));
  if (!o.quiet) std::cout << dm_run_verdict(run);
  const int code = !ok ? kExitConfig : dm_run_passed(run) ? kExitPass : kExitInvariant;
  dm_run_free(run);
  return code;
}

int cmd_bench(std::size_t owners, const std::vector<std::size_t>& workers) {
  std::vector<dm_bench_row> rows(workers.size());
  const auto s = dm_bench_attest(owners, workers.data(), workers.size(), rows.data());
  if (s != DM_OK) return report(s);
  std::cout << "owners workers makespan_s attestations\n";
  for (const auto& r : rows) {
    std::cout << owners << " " << r.workers << " " << seconds(r.makespan_ms) << " "
              << r.attestations << "\n";
  }
  if (rows.size() >= 2 && rows.front().makespan_ms > 0) {
    char ratio[32];
    std::snprintf(ratio, sizeof ratio, "%.4f",
                  static_cast<double>(rows.back().makespan_ms) / rows.front().makespan_ms);
    std::cout << "ratio W=" << rows.back().workers << "/W=" << rows.front().workers << " " << ratio
              << "\n";
  }
  return kExitPass;
}

int cmd_compare(std::size_t from, std::size_t to) {
  std::cout << "owners ida_flow_calls db_flow_calls db_setup_calls\n";
  for (std::size_t n = from; n <= to; ++n) {
    dm_paradigm_row row{};
    const auto s = dm_compare_paradigms(n, &row);
    if (s != DM_OK) return report(s);
    if (!row.ida_completed || !row.db_completed) {
      std::cerr << "dmsim: flow did not complete at N=" << n << "\n";
      return kExitInvariant;
    }
    std::cout << row.owners << " " << row.ida_flow_calls << " " << row.db_flow_calls << " "
              << row.db_setup_calls << "\n";
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic data-market protocol simulator"};
  app.set_version_flag("--version", dm_version());

  RunOptions ro;
  std::uint64_t seed = 0;
  std::size_t sweep = 0;
  auto add_run_options = [&](CLI::App& a) {
    a.add_option("--config", ro.config, "Scenario config file (INI)");
    a.add_option("--scenario", ro.scenario, "Built-in scenario name");
    a.add_option("--seed", seed, "Override the scenario seed");
    a.add_option("--sweep", sweep, "Run N random adversary policies");
    a.add_option("--transcript", ro.transcript, "Write the transcript here ('-' for stdout)");
    a.add_option("--metrics", ro.metrics, "Write metrics here ('-' for stdout)");
    a.add_flag("--quiet", ro.quiet, "Do not print the verdict");
  };
  add_run_options(app);

  auto* run = app.add_subcommand("run", "Run a scenario; exit 0 iff every invariant holds");
  add_run_options(*run);

  auto* list = app.add_subcommand("list", "List built-in scenarios");

  std::size_t bench_owners = 160;
  std::vector<std::size_t> bench_workers{1, 64};
  auto* bench = app.add_subcommand("bench-attest", "Onboarding attestation makespan per worker count");
  bench->add_option("--owners,-n", bench_owners, "Owners attesting at once")->check(CLI::PositiveNumber);
  bench->add_option("--workers,-w", bench_workers, "Worker counts")->delimiter(',');

  std::size_t cmp_owners = 10;
  std::optional<std::size_t> cmp_to;
  auto* cmp = app.add_subcommand("compare-paradigms", "Per-flow on-chain calls, iDA vs broker");
  cmp->add_option("--owners,-n", cmp_owners, "Owner count, or range start with --to")
      ->check(CLI::PositiveNumber);
  cmp->add_option("--to", cmp_to, "Last owner count of a range")->check(CLI::PositiveNumber);

  app.require_subcommand(0, 1);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }

  auto given = [](CLI::App* a, CLI::App& top, const char* opt) {
    return a->count(opt) > 0 || top.count(opt) > 0;
  };
  if (*list) {
    for (std::size_t i = 0; const char* n = dm_scenario_name_at(i); ++i) std::cout << n << "\n";
    return kExitPass;
  }
  if (*bench) {
    for (auto w : bench_workers) {
      if (w == 0) {
        std::cerr << "dmsim: workers must be positive\n";
        return kExitConfig;
      }
    }
    return cmd_bench(bench_owners, bench_workers);
  }
  if (*cmp) {
    const auto to = cmp_to.value_or(cmp_owners);
    if (to < cmp_owners) {
      std::cerr << "dmsim: --to is below --owners\n";
      return kExitConfig;
    }
    return cmd_compare(cmp_owners, to);
  }
  if (given(run, app, "--seed")) ro.seed = seed;
  if (given(run, app, "--sweep")) ro.sweep = sweep;
  return cmd_run(ro);
}
