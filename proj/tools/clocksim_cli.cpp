// Copyright 2026 The clocksim authors
// SPDX-License-Identifier: MIT
//
// Command-line front end: runs one scenario and writes a CSV or JSON table.
//
//   clocksim fig1       sensitivity-vs-pulse-area curves per strength
//   clocksim fig2       optimal pulse area and sensitivity per strength
//   clocksim qnd-demo   one measurement record, round by round
//   clocksim qfi-table  Fisher-information showcase for Fock-layer states
//   clocksim sweep      user-defined strength/pulse-area grid
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "clocksim/common.hpp"
#include "clocksim/scenarios.hpp"

namespace {

void add_common_options(CLI::App *sub, clocksim::ScenarioConfig *cfg) {
  sub->add_option("--nbar", cfg->n_mean,
                  "Mean total atom number (default 1e4, or 1e5 with "
                  "--paper-scale)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--sigma2", cfg->sigma2,
                  "Total-number variance (default: equal to --nbar)")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--gamma", cfg->gamma_list,
                  "Integrated measurement strength; repeatable")
      ->allow_extra_args(false);
  sub->add_option("--theta-min", cfg->theta_min, "Smallest pulse area");
  sub->add_option("--theta-max", cfg->theta_max, "Largest pulse area");
  sub->add_option("--theta-count", cfg->theta_count,
                  "Number of pulse-area grid points");
  sub->add_option("--m", cfg->reps, "Repetitions averaged per estimate");
  sub->add_option("--records", cfg->records,
                  "Simulated measurement records (0: analytic model only)");
  sub->add_option("--alpha", cfg->alpha,
                  "Probe amplitude per round (default: auto-sized so "
                  "--rounds rounds realize the requested strength)")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--rounds", cfg->rounds_target,
                  "Probe rounds per measurement record (default 60)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--seed", cfg->seed, "Random seed");
  sub->add_option("--out", cfg->output_path,
                  "Output file (default: stdout)");
  sub->add_option("--format", cfg->format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_flag("--paper-scale", cfg->paper_scale,
                "Use the publication-scale default of 1e5 atoms");
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"clocksim: number-squeezed two-mode clock simulator"};
  app.set_version_flag("--version", std::string("clocksim ") +
                                        clocksim::kVersion);
  app.require_subcommand(1);

  clocksim::ScenarioConfig cfg;
  const std::vector<std::pair<std::string, std::string>> scenarios = {
      {"fig1", "Sensitivity vs pulse area for several strengths"},
      {"fig2", "Optimal pulse area and sensitivity vs strength"},
      {"qnd-demo", "One measurement record, round by round"},
      {"qfi-table", "Fisher-information showcase states"},
      {"sweep", "User-defined strength and pulse-area grid"},
  };
  for (const auto &[name, description] : scenarios) {
    CLI::App *sub = app.add_subcommand(name, description);
    add_common_options(sub, &cfg);
    sub->callback([&cfg, name = name]() { cfg.scenario = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &err) {
    const int code = app.exit(err);
    // Help/version requests exit 0; every other parse problem is a
    // configuration error.
    return code == 0 ? 0 : 2;
  }

  try {
    const clocksim::ScenarioResult result = clocksim::run_scenario(cfg);
    clocksim::emit(result, cfg);
  } catch (const clocksim::domain_error &err) {
    std::fprintf(stderr, "configuration error: %s\n", err.what());
    return 2;
  } catch (const clocksim::numeric_error &err) {
    std::fprintf(stderr, "numerical failure: %s\n", err.what());
    return 3;
  } catch (const std::exception &err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 3;
  }
  return 0;
}
