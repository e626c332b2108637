// Copyright 2026 The upcross Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// upcross: Monte Carlo experiments on upcrossing estimates of Brownian local
// time. Exit status 0 on pass, 2 when a verdict fails, 1 on usage or runtime
// errors.

#include <cstdio>
#include <exception>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "upcross/config.hpp"
#include "upcross/experiments.hpp"
#include "upcross/report.hpp"

namespace {

using upcross::ExperimentConfig;
using upcross::ExperimentReport;

struct Flags {
  std::string config_file;
  // Setting name -> raw flag text, in the order the flags are declared.
  std::vector<std::pair<std::string, std::optional<std::string>>> settings{
      {"seed", {}},  {"paths", {}},   {"levels", {}}, {"proxy-offset", {}}, {"horizons", {}},
      {"eta", {}},   {"delta", {}},   {"m", {}},      {"lambda", {}},       {"threads", {}},
      {"out", {}},   {"mode", {}},    {"log-base", {}}, {"step-budget", {}},
  };
};

const std::map<std::string, std::string> kHelp{
    {"seed", "master seed (64-bit)"},
    {"paths", "Monte Carlo paths per sample"},
    {"levels", "coarse levels k, e.g. 2..6 or 2,4,6"},
    {"proxy-offset", "reference level minus k"},
    {"horizons", "comma list of horizons T"},
    {"eta", "moment exponent offset: E R^(2+eta)"},
    {"delta", "variation exponent offset: q = 2+delta"},
    {"m", "variation interval I_m = [-2^m, 2^m]"},
    {"lambda", "scaling factor for scaling-test"},
    {"threads", "worker threads (default: UPCROSS_THREADS or all cores)"},
    {"out", "write <out>.csv and <out>.json instead of CSV on stdout"},
    {"mode", "exact | deterministic-durations"},
    {"log-base", "base of the log in the normalizer, or e"},
    {"step-budget", "refuse runs projected above this many fine steps"},
};

void add_common(CLI::App* sub, Flags& flags) {
  sub->add_option("--config", flags.config_file, "key = value config file; flags override it");
  for (auto& [name, slot] : flags.settings) sub->add_option("--" + name, slot, kHelp.at(name));
}

ExperimentConfig build_config(const Flags& flags) {
  ExperimentConfig c;
  if (!flags.config_file.empty()) c = upcross::load_config_file(flags.config_file, c);
  for (const auto& [name, slot] : flags.settings) {
    if (slot) upcross::apply_setting(c, name, *slot);
  }
  return c;
}

int emit(const ExperimentReport& report, const ExperimentConfig& c) {
  if (c.output.empty()) {
    std::cout << upcross::to_csv(report);
  } else {
    upcross::write_report(report, c.output);
  }
  for (const auto& v : report.verdicts) {
    std::fprintf(stderr, "%s %s: %s\n", v.passed ? "PASS" : "FAIL", v.name.c_str(), v.detail.c_str());
  }
  std::fprintf(stderr, "%s in %.1f s\n", report.passed() ? "passed" : "FAILED", report.wall_seconds);
  return report.passed() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Upcrossing estimates of Brownian local time: Monte Carlo experiments"};
  app.require_subcommand(1);
  Flags flags;
  std::size_t samples = 1000000;

  using Runner = std::function<ExperimentReport(const ExperimentConfig&)>;
  const std::vector<std::tuple<std::string, std::string, Runner>> commands{
      {"selftest", "exit law, Levy mean, DP vs enumeration, exact identities", upcross::run_selftest},
      {"sup-rate", "sup-deviation rate trend in k", upcross::run_sup_rate},
      {"lp-rate", "L^p moments of the normalized sup-deviation", upcross::run_lp_rate},
      {"variation", "q-variation of U^k over I_m, sup over time", upcross::run_variation},
      {"scaling-test", "KS test of F(lambda^2)/lambda against F(lambda)", upcross::run_scaling_test},
      {"subadditivity", "square-root subadditivity at every coarse crossing time", upcross::run_subadditivity},
  };
  std::map<CLI::App*, Runner> runners;
  CLI::App* exit_law = app.add_subcommand("selftest-exit-law", "moments and series agreement of the exit-time law");
  add_common(exit_law, flags);
  exit_law->add_option("--samples", samples, "exit-time samples (>= 10000)");
  runners[exit_law] = [&samples](const ExperimentConfig& c) { return upcross::run_selftest_exit_law(c, samples); };
  for (const auto& [name, help, run] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, flags);
    runners[sub] = run;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    const ExperimentConfig config = build_config(flags);
    for (auto& [sub, run] : runners) {
      if (sub->parsed()) return emit(run(config), config);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
