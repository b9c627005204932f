// Copyright 2026 The clocksim authors
// SPDX-License-Identifier: MIT

#include "clocksim/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "clocksim/fisher.hpp"
#include "clocksim/moments.hpp"
#include "clocksim/qnd.hpp"
#include "clocksim/sensitivity.hpp"
#include "clocksim/states.hpp"

namespace clocksim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double resolved_n_mean(const ScenarioConfig &cfg) {
  if (cfg.n_mean >= 0.0) return cfg.n_mean;
  return cfg.paper_scale ? 1e5 : 1e4;
}

double resolved_sigma2(const ScenarioConfig &cfg, double n_mean) {
  return cfg.sigma2 >= 0.0 ? cfg.sigma2 : n_mean;
}

std::vector<double> theta_grid(const ScenarioConfig &cfg) {
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(cfg.theta_count));
  if (cfg.theta_count == 1) {
    grid.push_back(cfg.theta_min);
    return grid;
  }
  const double step = (cfg.theta_max - cfg.theta_min) /
                      static_cast<double>(cfg.theta_count - 1);
  for (int i = 0; i < cfg.theta_count; ++i) {
    grid.push_back(cfg.theta_min + step * static_cast<double>(i));
  }
  return grid;
}

nlohmann::json base_echo(const ScenarioConfig &cfg, double n_mean,
                         double sigma2, const std::vector<double> &gammas) {
  nlohmann::json echo;
  echo["tool"] = "clocksim";
  echo["version"] = kVersion;
  echo["scenario"] = cfg.scenario;
  echo["n_mean"] = n_mean;
  echo["sigma2"] = sigma2;
  echo["gamma"] = gammas;
  echo["theta_min"] = cfg.theta_min;
  echo["theta_max"] = cfg.theta_max;
  echo["theta_count"] = cfg.theta_count;
  echo["m"] = cfg.reps;
  echo["records"] = cfg.records;
  echo["alpha"] = cfg.alpha;
  echo["rounds_target"] = cfg.rounds_target;
  echo["seed"] = cfg.seed;
  echo["format"] = cfg.format;
  echo["paper_scale"] = cfg.paper_scale;
  echo["output"] = cfg.output_path.empty() ? "stdout" : cfg.output_path;
  return echo;
}

nlohmann::json protocol_echo(const QndConfig &qc) {
  nlohmann::json j;
  j["alpha"] = qc.alpha;
  j["omega"] = qc.omega;
  j["rounds"] = qc.rounds;
  j["gamma_realized"] = qc.gamma();
  return j;
}

// Record-averaged sensitivity curve and optimum for one measurement
// strength.  Returns per-theta averages over the finite per-record values
// (infinity where every record diverged), plus the averaged per-record
// optimum.
struct McSummary {
  std::vector<double> delta_theta_avg;
  double theta_opt_avg = 0.0;
  double delta_theta_opt_avg = 0.0;
  int records = 0;
};

McSummary run_mc_curves(const AtomState &base, const QndConfig &qc,
                        const std::vector<double> &thetas, int reps,
                        int records, std::uint64_t seed,
                        std::uint64_t &stream_counter, bool want_optimum) {
  McSummary out;
  out.records = records;
  std::vector<double> sum(thetas.size(), 0.0);
  std::vector<int> cnt(thetas.size(), 0);
  double opt_theta_sum = 0.0, opt_value_sum = 0.0;
  int opt_cnt = 0;
  for (int r = 0; r < records; ++r) {
    Rng rng = Rng::record_stream(seed, stream_counter++);
    const AtomState posterior = run_protocol(base, qc, rng).first;
    const MomentSet mm = moments(posterior);
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      const SensitivityPoint pt = delta_theta(mm, thetas[i], reps);
      if (!pt.divergent && std::isfinite(pt.delta_theta)) {
        sum[i] += pt.delta_theta;
        cnt[i] += 1;
      }
    }
    if (want_optimum) {
      const OptimalTheta opt = optimal_theta(mm, reps);
      opt_theta_sum += opt.theta_opt;
      opt_value_sum += opt.delta_theta_opt;
      opt_cnt += 1;
    }
  }
  out.delta_theta_avg.resize(thetas.size(), kInf);
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    if (cnt[i] > 0) out.delta_theta_avg[i] = sum[i] / cnt[i];
  }
  if (opt_cnt > 0) {
    out.theta_opt_avg = opt_theta_sum / opt_cnt;
    out.delta_theta_opt_avg = opt_value_sum / opt_cnt;
  }
  return out;
}

// Shared engine of fig1 and sweep: per strength, the analytic curve and the
// optional record-averaged simulated curve.
ScenarioResult curve_scenario(const ScenarioConfig &cfg,
                              std::vector<double> gammas, bool include_refs) {
  const double n_mean = resolved_n_mean(cfg);
  const double sigma2 = resolved_sigma2(cfg, n_mean);
  const std::vector<double> thetas = theta_grid(cfg);

  ScenarioResult result;
  result.table.columns = {"theta", "delta_theta", "gamma", "n_mean",
                          "sigma2", "m", "route"};
  result.config_echo = base_echo(cfg, n_mean, sigma2, gammas);

  for (double gamma : gammas) {
    const MomentSet model = analytic_squeezed_moments(n_mean, sigma2, gamma);
    for (double th : thetas) {
      const SensitivityPoint pt = delta_theta(model, th, cfg.reps);
      result.table.add_row({th, pt.divergent ? kInf : pt.delta_theta, gamma,
                            n_mean, sigma2, cfg.reps, "analytic"});
    }
  }

  if (cfg.records > 0) {
    const AtomState base = prepared_clock_state(make_number_distribution(
        DistributionKind::gaussian, n_mean, sigma2));
    std::uint64_t stream_counter = 0;
    nlohmann::json protocols = nlohmann::json::array();
    for (double gamma : gammas) {
      const QndConfig qc =
          derive_qnd_config(gamma, base.max_total(), cfg.rounds_target,
                            cfg.alpha, cfg.seed);
      protocols.push_back(protocol_echo(qc));
      const McSummary mc =
          run_mc_curves(base, qc, thetas, cfg.reps, cfg.records, cfg.seed,
                        stream_counter, false);
      for (std::size_t i = 0; i < thetas.size(); ++i) {
        result.table.add_row({thetas[i], mc.delta_theta_avg[i], gamma, n_mean,
                              sigma2, cfg.reps, "mc"});
      }
    }
    result.config_echo["protocol"] = std::move(protocols);
  }

  if (include_refs) {
    result.table.add_row({0.0, sql_limit(n_mean, cfg.reps), 0.0, n_mean,
                          sigma2, cfg.reps, "sql"});
    result.table.add_row({0.0, heisenberg_limit(n_mean, cfg.reps), 0.0,
                          n_mean, sigma2, cfg.reps, "heisenberg"});
  }
  return result;
}

}  // namespace

void ScenarioConfig::validate() const {
  static const char *kScenarios[] = {"fig1", "fig2", "qnd-demo", "qfi-table",
                                     "sweep"};
  bool known = false;
  for (const char *s : kScenarios) known = known || scenario == s;
  if (!known) throw domain_error("unknown scenario: " + scenario);
  if (n_mean >= 0.0 && !(n_mean > 0.0)) {
    throw domain_error("--nbar must be > 0");
  }
  if (n_mean > 0.0 && !(n_mean <= 2e6)) {
    throw domain_error("--nbar above 2e6 is not supported");
  }
  if (sigma2 >= 0.0 && !std::isfinite(sigma2)) {
    throw domain_error("--sigma2 must be finite");
  }
  for (double g : gamma_list) {
    if (!(g >= 0.0) || !std::isfinite(g)) {
      throw domain_error("--gamma values must be finite and >= 0");
    }
  }
  if (theta_count < 1) throw domain_error("--theta-count must be >= 1");
  if (theta_count > 1 && !(theta_max > theta_min)) {
    throw domain_error("--theta-max must exceed --theta-min");
  }
  if (reps < 1) throw domain_error("--m must be >= 1");
  if (records < 0) throw domain_error("--records must be >= 0");
  if (records > 100000) throw domain_error("--records above 1e5 is not supported");
  if (rounds_target < 1) throw domain_error("rounds_target must be >= 1");
  if (format != "csv" && format != "json") {
    throw domain_error("--format must be csv or json");
  }
}

ScenarioResult run_fig1(const ScenarioConfig &cfg) {
  cfg.validate();
  std::vector<double> gammas = cfg.gamma_list;
  if (gammas.empty()) {
    gammas = {0.0, kPi * 1e-5, kPi * 1e-4, kPi * 1e-3, kPi * 1e-2};
  }
  return curve_scenario(cfg, std::move(gammas), /*include_refs=*/true);
}

ScenarioResult run_sweep(const ScenarioConfig &cfg) {
  cfg.validate();
  std::vector<double> gammas = cfg.gamma_list;
  if (gammas.empty()) gammas = {0.0};
  return curve_scenario(cfg, std::move(gammas), /*include_refs=*/false);
}

ScenarioResult run_fig2(const ScenarioConfig &cfg) {
  cfg.validate();
  const double n_mean = resolved_n_mean(cfg);
  const double sigma2 = resolved_sigma2(cfg, n_mean);
  const double total = sigma2 + n_mean;

  std::vector<double> gammas = cfg.gamma_list;
  if (gammas.empty()) {
    for (double x : {1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3}) {
      gammas.push_back(x / total);
    }
  }

  ScenarioResult result;
  result.table.columns = {"gamma",
                          "x_total",
                          "theta_opt",
                          "delta_theta_opt",
                          "delta_theta_small_angle",
                          "delta_theta_opt_sigma0",
                          "n_mean",
                          "sigma2",
                          "m",
                          "records",
                          "route"};
  result.config_echo = base_echo(cfg, n_mean, sigma2, gammas);

  std::optional<AtomState> base;
  if (cfg.records > 0) {
    base = prepared_clock_state(
        make_number_distribution(DistributionKind::gaussian, n_mean, sigma2));
  }

  std::uint64_t stream_counter = 0;
  double coincidence_max_dev = 0.0;
  int coincidence_rows = 0;
  bool coincidence_violated = false;
  nlohmann::json protocols = nlohmann::json::array();

  for (double gamma : gammas) {
    const double x = gamma * total;
    const double small =
        squeezed_small_angle_sensitivity(n_mean, sigma2, gamma, cfg.reps);
    const double sigma0 =
        squeezed_small_angle_sensitivity(n_mean, 0.0, gamma, cfg.reps);

    // Analytic reference rows are the closed-form small-angle evaluations;
    // theta_opt = 0 marks the evaluation point of the small-angle formula.
    result.table.add_row({gamma, x, 0.0, small, small, sigma0, n_mean,
                          sigma2, cfg.reps, 0, "analytic"});

    if (cfg.records > 0) {
      const QndConfig qc =
          derive_qnd_config(gamma, base->max_total(), cfg.rounds_target,
                            cfg.alpha, cfg.seed);
      protocols.push_back(protocol_echo(qc));
      const McSummary mc =
          run_mc_curves(*base, qc, {}, cfg.reps, cfg.records, cfg.seed,
                        stream_counter, true);
      result.table.add_row({gamma, x, mc.theta_opt_avg,
                            mc.delta_theta_opt_avg, small, sigma0, n_mean,
                            sigma2, cfg.reps, cfg.records, "mc"});

      // Coincidence of the optimal sensitivity with the number-certain
      // (sigma2 = 0) small-angle curve, valid for X >= 1 well below the
      // twin-Fock floor.
      if (x >= 1.0 && x <= 0.02 * n_mean && sigma0 > 0.0) {
        const double dev = std::abs(mc.delta_theta_opt_avg / sigma0 - 1.0);
        coincidence_max_dev = std::max(coincidence_max_dev, dev);
        coincidence_rows += 1;
        if (cfg.records >= 16 && dev > 0.05) coincidence_violated = true;
      }
    }
  }

  if (cfg.records > 0) {
    result.config_echo["protocol"] = std::move(protocols);
    result.config_echo["coincidence_checked_rows"] = coincidence_rows;
    result.config_echo["coincidence_max_rel_dev"] = coincidence_max_dev;
    result.config_echo["coincidence_tol"] = 0.05;
  }
  if (coincidence_violated) {
    throw numeric_error(
        "simulated optimal sensitivity deviates more than 5% from the "
        "sigma2 = 0 reference in its regime of validity");
  }
  return result;
}

ScenarioResult run_qnd_demo(const ScenarioConfig &cfg) {
  cfg.validate();
  const double n_mean = resolved_n_mean(cfg);
  const double sigma2 = resolved_sigma2(cfg, n_mean);
  const double gamma =
      cfg.gamma_list.empty() ? 1.0 / (sigma2 + n_mean) : cfg.gamma_list[0];

  AtomState state = prepared_clock_state(
      make_number_distribution(DistributionKind::gaussian, n_mean, sigma2));
  const QndConfig qc = derive_qnd_config(gamma, state.max_total(),
                                         cfg.rounds_target, cfg.alpha,
                                         cfg.seed);

  ScenarioResult result;
  result.table.columns = {"round", "outcome", "na_var", "coherence"};
  result.config_echo =
      base_echo(cfg, n_mean, sigma2, std::vector<double>{gamma});
  result.config_echo["protocol"] = protocol_echo(qc);
  result.config_echo["predicted_na_var"] =
      variance_after_qnd(n_mean, sigma2, qc.gamma());
  result.config_echo["predicted_coherence"] =
      coherence_after_qnd(n_mean, qc.alpha, qc.omega, qc.rounds);

  Rng rng = Rng::record_stream(cfg.seed, 0);
  for (int r = 0; r < qc.rounds; ++r) {
    const double outcome = sample_homodyne(state, qc, rng);
    state = qnd_update(state, outcome, qc);
    const MomentSet mm = moments(state);
    result.table.add_row({r + 1, outcome, mm.na_var, mm.coherence});
  }
  state.compact();
  result.config_echo["posterior_participation_ratio"] =
      participation_ratio(state);
  result.config_echo["posterior_state_digest"] = state_digest(state);
  return result;
}

ScenarioResult run_qfi_table(const ScenarioConfig &cfg) {
  cfg.validate();

  struct Showcase {
    const char *name;
    std::int64_t n_a;
    std::vector<double> rho_b;
  };
  const Showcase showcase[] = {
      {"twin_fock_5_5", 5, {0, 0, 0, 0, 0, 1}},
      {"twin_fock_20_20",
       20,
       {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1}},
      {"fock_10_0", 10, {1}},
      {"fock_4_mix_01", 4, {0.5, 0.5}},
  };

  ScenarioResult result;
  result.table.columns = {"state",  "n_a",
                          "nb_mean", "quantum_fisher",
                          "cr_delta_theta", "classical_fisher_small_theta",
                          "entangled", "m"};
  result.config_echo = base_echo(cfg, resolved_n_mean(cfg),
                                 resolved_sigma2(cfg, resolved_n_mean(cfg)),
                                 cfg.gamma_list);
  result.config_echo["cfi_theta"] = 1e-3;

  for (const auto &sc : showcase) {
    const AtomState state = fock_mixture_state(sc.n_a, sc.rho_b);
    double nb_mean = 0.0;
    for (std::size_t i = 0; i < sc.rho_b.size(); ++i) {
      nb_mean += sc.rho_b[i] * static_cast<double>(i);
    }
    const FisherReport report = fisher_report(state, cfg.reps, 1e-3);
    result.table.add_row({sc.name, sc.n_a, nb_mean, report.quantum_fisher,
                          report.cr_delta_theta,
                          report.classical_fisher.value_or(0.0),
                          report.entangled ? 1 : 0, cfg.reps});
  }
  return result;
}

ScenarioResult run_scenario(const ScenarioConfig &cfg) {
  cfg.validate();
  if (cfg.scenario == "fig1") return run_fig1(cfg);
  if (cfg.scenario == "fig2") return run_fig2(cfg);
  if (cfg.scenario == "qnd-demo") return run_qnd_demo(cfg);
  if (cfg.scenario == "qfi-table") return run_qfi_table(cfg);
  return run_sweep(cfg);
}

void emit(const ScenarioResult &result, const ScenarioConfig &config) {
  const std::string content =
      config.format == "json"
          ? to_json(result.table, result.config_echo)
          : to_csv(result.table);
  write_output(config.output_path, content);
}

}  // namespace clocksim
