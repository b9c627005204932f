// Copyright 2026 The clocksim authors
// SPDX-License-Identifier: MIT

#include "clocksim/qnd.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace clocksim {

namespace {

constexpr double kQuadratureSigma = 0.5;  // vacuum quadrature std dev

// Per-occupation kernel ingredients shared by every round of a record:
//   q[n]      = -alpha sin(omega n)          outcome mean for occupation n
//   bcos[n]   =  2 alpha cos(omega n)        outcome-dependent phase factor
//   aphase[n] =  alpha^2 sin(omega n) cos(omega n)   static phase
// The conditional amplitude factor for outcome p is then
//   exp(-(p - q[n])^2) * exp(i (-p * bcos[n] - aphase[n])).
struct KernelTables {
  std::vector<double> q;
  std::vector<double> bcos;
  std::vector<double> aphase;

  void build(double alpha, double omega, std::int64_t n_max) {
    const std::size_t size = static_cast<std::size_t>(n_max) + 1;
    q.resize(size);
    bcos.resize(size);
    aphase.resize(size);
    for (std::size_t n = 0; n < size; ++n) {
      const double ph = omega * static_cast<double>(n);
      const double s = std::sin(ph);
      const double c = std::cos(ph);
      q[n] = -alpha * s;
      bcos[n] = 2.0 * alpha * c;
      aphase[n] = alpha * alpha * s * c;
    }
  }
};

// Conditions the state on outcome p0 (one probe round), in place.  Returns
// the outcome's total likelihood density before renormalization; the caller
// decides how to handle zero.
//
// Amplitudes at equal occupation n share the same conditional factor across
// all sectors, so the factor is evaluated once per occupation in the union
// of the support windows (typically ~sqrt(n) values) instead of once per
// stored amplitude.
double condition_on_outcome(AtomState &state, double p0,
                            const KernelTables &tables) {
  std::int64_t base = tables.q.empty() ? 0 : static_cast<std::int64_t>(
                                                 tables.q.size()) - 1;
  std::int64_t top = 0;
  for (const auto &sec : state.sectors) {
    base = std::min(base, sec.support_lo);
    top = std::max(top, sec.support_hi);
  }
  if (top < base) return 0.0;

  std::vector<std::complex<double>> factor(
      static_cast<std::size_t>(top - base + 1));
  for (std::int64_t n = base; n <= top; ++n) {
    const std::size_t nn = static_cast<std::size_t>(n);
    const double t = p0 - tables.q[nn];
    const double env = std::exp(-t * t);
    const double phase = -p0 * tables.bcos[nn] - tables.aphase[nn];
    factor[static_cast<std::size_t>(n - base)] = {env * std::cos(phase),
                                                  env * std::sin(phase)};
  }

  double total = 0.0;
  std::vector<double> sector_likelihood(state.sectors.size(), 0.0);
  for (std::size_t k = 0; k < state.sectors.size(); ++k) {
    SectorState &sec = state.sectors[k];
    double like = 0.0;
    const std::complex<double> *f =
        factor.data() + (sec.support_lo - base);
    for (std::size_t i = 0; i < sec.amplitudes.size(); ++i) {
      sec.amplitudes[i] *= f[i];
      like += std::norm(sec.amplitudes[i]);
    }
    sector_likelihood[k] = like;
    total += state.weights[k] * like;
  }
  if (!(total > 0.0)) return 0.0;
  const double inv_total = 1.0 / total;
  for (std::size_t k = 0; k < state.sectors.size(); ++k) {
    const double like = sector_likelihood[k];
    if (like > 0.0) {
      const double inv_amp = 1.0 / std::sqrt(like);
      for (auto &a : state.sectors[k].amplitudes) a *= inv_amp;
    }
    state.weights[k] *= like * inv_total;
  }
  return total;
}

double sample_outcome(const AtomState &state, const KernelTables &tables,
                      Rng &rng) {
  // Draw order is part of the reproducibility contract: sector, occupation,
  // noise.
  const double u_sector = rng.uniform();
  double acc = 0.0;
  std::size_t pick = 0;
  bool found = false;
  for (std::size_t k = 0; k < state.sectors.size(); ++k) {
    if (state.weights[k] <= 0.0) continue;
    pick = k;  // last positive-weight sector becomes the rounding fallback
    acc += state.weights[k];
    if (u_sector < acc) {
      found = true;
      break;
    }
  }
  if (!found && !(acc > 0.0)) {
    throw numeric_error("state has zero total weight");
  }
  const SectorState &sec = state.sectors[pick];
  const double u_occ = rng.uniform() * sec.norm_sq();
  double acc2 = 0.0;
  std::size_t idx = sec.amplitudes.size() - 1;
  for (std::size_t i = 0; i < sec.amplitudes.size(); ++i) {
    acc2 += std::norm(sec.amplitudes[i]);
    if (u_occ < acc2) {
      idx = i;
      break;
    }
  }
  const std::size_t n = static_cast<std::size_t>(sec.support_lo) + idx;
  return tables.q[n] + kQuadratureSigma * rng.normal();
}

}  // namespace

double HomodyneDistribution::density(double p) const {
  // Each component is Normal(mean, 1/4): density sqrt(2/pi) exp(-2 (p-q)^2).
  constexpr double kNorm = 0.79788456080286541;  // sqrt(2/pi)
  double total = 0.0;
  for (const auto &c : components) {
    const double d = p - c.mean;
    total += c.weight * kNorm * std::exp(-2.0 * d * d);
  }
  return total;
}

std::complex<double> homodyne_kernel(double p, std::int64_t n, double alpha,
                                     double omega) {
  const double ph = omega * static_cast<double>(n);
  const double u = alpha * std::cos(ph);
  const double v = -alpha * std::sin(ph);
  const double d = p - v;
  const double mag = std::pow(2.0 / kPi, 0.25) * std::exp(-d * d);
  const double arg = -2.0 * p * u + u * v;
  return {mag * std::cos(arg), mag * std::sin(arg)};
}

HomodyneDistribution homodyne_distribution(const AtomState &state,
                                           const QndConfig &config) {
  HomodyneDistribution dist;
  for (std::size_t k = 0; k < state.sectors.size(); ++k) {
    const SectorState &sec = state.sectors[k];
    const double nrm = sec.norm_sq();
    if (!(nrm > 0.0)) continue;
    for (std::size_t i = 0; i < sec.amplitudes.size(); ++i) {
      const double w =
          state.weights[k] * std::norm(sec.amplitudes[i]) / nrm;
      if (w <= 0.0) continue;
      const double n =
          static_cast<double>(sec.support_lo + static_cast<std::int64_t>(i));
      dist.components.push_back(
          {w, -config.alpha * std::sin(config.omega * n)});
    }
  }
  return dist;
}

double sample_homodyne(const AtomState &state, const QndConfig &config,
                       Rng &rng) {
  if (state.sectors.empty()) throw domain_error("state has no sectors");
  KernelTables tables;
  tables.build(config.alpha, config.omega, state.max_total());
  return sample_outcome(state, tables, rng);
}

AtomState qnd_update(const AtomState &state, double p0,
                     const QndConfig &config) {
  AtomState out = state;
  KernelTables tables;
  tables.build(config.alpha, config.omega, out.max_total());
  if (condition_on_outcome(out, p0, tables) <= 0.0) {
    throw numeric_error("probe outcome has zero likelihood on this state");
  }
  out.refresh_metadata();
  return out;
}

std::pair<AtomState, QndRecord> run_protocol(const AtomState &state,
                                             const QndConfig &config,
                                             Rng &rng) {
  if (state.sectors.empty()) throw domain_error("state has no sectors");
  if (config.rounds < 0) throw domain_error("rounds must be >= 0");

  QndConfig cfg = config;
  if (cfg.tuning == PhaseTuning::snap_to_pi_multiple && cfg.rounds > 0 &&
      cfg.alpha > 0.0 && cfg.omega > 0.0) {
    const double accumulated =
        static_cast<double>(cfg.rounds) * cfg.alpha * cfg.alpha * cfg.omega;
    double k = std::nearbyint(accumulated / kPi);
    if (k < 1.0) k = 1.0;
    cfg.omega = k * kPi /
                (static_cast<double>(cfg.rounds) * cfg.alpha * cfg.alpha);
  }

  AtomState posterior = state;
  KernelTables tables;
  tables.build(cfg.alpha, cfg.omega, posterior.max_total());

  QndRecord record;
  record.outcomes.reserve(static_cast<std::size_t>(cfg.rounds));
  for (int r = 0; r < cfg.rounds; ++r) {
    const double p0 = sample_outcome(posterior, tables, rng);
    record.outcomes.push_back(p0);
    if (condition_on_outcome(posterior, p0, tables) <= 0.0) {
      throw numeric_error("probe outcome has zero likelihood on this state");
    }
    // Periodically drop negligible weight so the windows track the
    // conditioning instead of accumulating dead amplitudes.
    if ((r & 7) == 7) posterior.compact();
  }
  posterior.compact();
  record.gamma = cfg.gamma();
  record.posterior_state_digest = state_digest(posterior);
  return {std::move(posterior), record};
}

double variance_after_qnd(double n_mean, double sigma2, double gamma) {
  if (!(n_mean >= 0.0)) throw domain_error("n_mean must be >= 0");
  if (!(sigma2 >= 0.0)) throw domain_error("sigma2 must be >= 0");
  if (!(gamma >= 0.0)) throw domain_error("gamma must be >= 0");
  const double total = sigma2 + n_mean;
  return 0.25 * total / (1.0 + gamma * total);
}

double coherence_after_qnd(double n_mean, double alpha, double omega,
                           int rounds) {
  if (!(n_mean >= 0.0)) throw domain_error("n_mean must be >= 0");
  if (rounds < 0) throw domain_error("rounds must be >= 0");
  const double accumulated =
      static_cast<double>(rounds) * alpha * alpha * omega;
  return n_mean * std::cos(accumulated);
}

QndConfig derive_qnd_config(double gamma, std::int64_t n_max,
                            int rounds_target, double alpha_override,
                            std::uint64_t seed) {
  if (!(gamma >= 0.0)) throw domain_error("gamma must be >= 0");
  if (n_max < 1) throw domain_error("n_max must be >= 1");
  if (rounds_target < 1) throw domain_error("rounds_target must be >= 1");

  QndConfig cfg;
  cfg.seed = seed;
  cfg.tuning = PhaseTuning::snap_to_pi_multiple;
  if (gamma == 0.0) {
    cfg.alpha = 0.0;
    cfg.omega = 0.0;
    cfg.rounds = rounds_target;
    cfg.tuning = PhaseTuning::none;
    return cfg;
  }

  // Smallest even k with omega = gamma / (k pi) <= 0.1 / n_max.  Even k makes
  // cos(k pi) = +1, so the tuned coherence returns with positive sign.
  double k = std::ceil(gamma * static_cast<double>(n_max) / (0.1 * kPi));
  if (k < 2.0) {
    k = 2.0;
  } else if (std::fmod(k, 2.0) != 0.0) {
    k += 1.0;
  }
  cfg.omega = gamma / (k * kPi);

  if (alpha_override > 0.0) {
    cfg.alpha = alpha_override;
    const double ideal_rounds =
        (k * kPi) * (k * kPi) / (gamma * alpha_override * alpha_override);
    cfg.rounds = std::max(1, static_cast<int>(std::llround(ideal_rounds)));
    // Keep the accumulated phase at exactly k pi for the realized rounds.
    cfg.omega = k * kPi /
                (static_cast<double>(cfg.rounds) * cfg.alpha * cfg.alpha);
  } else {
    cfg.rounds = rounds_target;
    cfg.alpha = k * kPi / std::sqrt(static_cast<double>(rounds_target) * gamma);
  }
  return cfg;
}

MomentSet analytic_squeezed_moments(double n_mean, double sigma2, double gamma,
                                    double coherence_cos) {
  if (!(n_mean > 0.0)) throw domain_error("n_mean must be > 0");
  if (!(sigma2 >= 0.0)) throw domain_error("sigma2 must be >= 0");
  if (!(gamma >= 0.0)) throw domain_error("gamma must be >= 0");

  // Gaussian-conditioning model: the probe measures n_a with an effective
  // resolution set by gamma, so the prior population variance
  // v0 = (sigma2 + n) / 4 is reduced by phi = X / (1 + X), X = gamma
  // (sigma2 + n), and the total-number variance is reduced only through its
  // correlation with n_a (Cov(N, n_a) = sigma2 / 2 before the measurement).
  const double total = sigma2 + n_mean;
  const double v0 = 0.25 * total;
  const double x = gamma * total;
  const double phi = x / (1.0 + x);
  const double na_var = v0 * (1.0 - phi);
  const double cov_n_na = 0.5 * sigma2 * (1.0 - phi);
  const double vn =
      v0 > 0.0 ? sigma2 - phi * (0.25 * sigma2 * sigma2) / v0 : sigma2;

  MomentSet m;
  m.n_mean = n_mean;
  m.n2_mean = vn + n_mean * n_mean;
  m.na_mean = 0.5 * n_mean;
  m.na_var = na_var;
  m.jz = 0.0;
  m.jz2 = na_var + 0.25 * vn - cov_n_na;  // Var(n_a - N/2)
  m.jx = 0.5 * n_mean * coherence_cos;
  m.coherence = 2.0 * m.jx;
  m.jy = 0.0;
  m.jx2 = 0.25 * vn + m.jx * m.jx;  // Var Jx tracks the number variance
  m.jxjz_sym = 2.0 * m.jx * m.jz;   // Cov(Jz, Jx) = 0 by symmetry
  m.n_jz_mean = (cov_n_na - 0.5 * vn) + n_mean * m.jz;
  m.n_jx_mean = coherence_cos * 0.5 * vn + n_mean * m.jx;
  return m;
}

std::uint64_t state_digest(const AtomState &state) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto mix = [&h](const void *data, std::size_t len) {
    const unsigned char *bytes = static_cast<const unsigned char *>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (std::size_t k = 0; k < state.sectors.size(); ++k) {
    mix(&state.weights[k], sizeof(double));
    const SectorState &sec = state.sectors[k];
    mix(&sec.total_n, sizeof(sec.total_n));
    mix(&sec.support_lo, sizeof(sec.support_lo));
    if (!sec.amplitudes.empty()) {
      mix(sec.amplitudes.data(),
          sec.amplitudes.size() * sizeof(std::complex<double>));
    }
  }
  return h;
}

}  // namespace clocksim
