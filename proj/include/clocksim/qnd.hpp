// Copyright 2026 The clocksim authors
// SPDX-License-Identifier: MIT

#ifndef CLOCKSIM_QND_HPP
#define CLOCKSIM_QND_HPP

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "clocksim/moments.hpp"
#include "clocksim/rng.hpp"
#include "clocksim/states.hpp"

namespace clocksim {

enum class PhaseTuning {
  none,
  snap_to_pi_multiple,  // adjust omega so rounds * alpha^2 * omega = k pi
};

/// Dispersive probe configuration.  Each measurement round couples a probe
/// field of amplitude alpha to the mode-a population with phase shift
/// omega per atom, then reads the probe's p quadrature.  The integrated
/// measurement strength of a full record is gamma = alpha^2 omega^2 rounds.
struct QndConfig {
  double alpha = 0.0;
  double omega = 0.0;
  int rounds = 1;
  std::uint64_t seed = 0;
  PhaseTuning tuning = PhaseTuning::none;

  double gamma() const {
    return alpha * alpha * omega * omega * static_cast<double>(rounds);
  }

  /// The linear-response treatment of the probe assumes omega n << 1 for all
  /// occupied n.
  bool linear_regime(std::int64_t n_max) const {
    return omega * static_cast<double>(n_max) <= 0.1;
  }
};

/// Outcome log of one measurement record.
struct QndRecord {
  std::vector<double> outcomes;
  double gamma = 0.0;
  std::uint64_t posterior_state_digest = 0;
};

/// One Gaussian component of the probe-quadrature distribution: outcomes are
/// Normal(mean, 1/4) weighted by the population of the occupation behind it.
struct HomodyneComponent {
  double weight = 0.0;
  double mean = 0.0;
};

struct HomodyneDistribution {
  std::vector<HomodyneComponent> components;

  /// Mixture density at outcome p.
  double density(double p) const;
};

/// Probe-quadrature amplitude <p | alpha e^{-i omega n}> for a coherent
/// probe dephased by n atoms, in the convention where the vacuum quadrature
/// variance is 1/4:
///   (2/pi)^(1/4) exp(-(p - v)^2) exp(i (-2 p u + u v)),
/// with u = alpha cos(omega n), v = -alpha sin(omega n).
std::complex<double> homodyne_kernel(double p, std::int64_t n, double alpha,
                                     double omega);

/// Exact outcome distribution of a single probe round on the given state.
HomodyneDistribution homodyne_distribution(const AtomState &state,
                                           const QndConfig &config);

/// Samples one probe outcome from the exact mixture distribution.  Draw
/// order (stable across versions): sector pick, occupation pick, Gaussian
/// noise.
double sample_homodyne(const AtomState &state, const QndConfig &config,
                       Rng &rng);

/// Bayesian state update after observing outcome p0 in one probe round.
/// Throws numeric_error if the outcome has zero likelihood on every sector.
AtomState qnd_update(const AtomState &state, double p0,
                     const QndConfig &config);

/// Runs a full measurement record: `rounds` sequential probe rounds, each
/// sampling an outcome from the current posterior and conditioning on it.
/// With PhaseTuning::snap_to_pi_multiple, omega is first adjusted so the
/// accumulated probe phase rounds * alpha^2 * omega is the nearest positive
/// multiple of pi (this keeps the squeezed state's coherence at its envelope
/// rather than at an arbitrary point of its oscillation).
std::pair<AtomState, QndRecord> run_protocol(const AtomState &state,
                                             const QndConfig &config,
                                             Rng &rng);

/// Predicted mode-a population variance after measurement of integrated
/// strength gamma on the standard clock input:
///   (sigma2 + n) / 4 / (1 + gamma (sigma2 + n)).
double variance_after_qnd(double n_mean, double sigma2, double gamma);

/// Predicted coherence after `rounds` probe rounds on the standard clock
/// input: n cos(rounds * alpha^2 * omega), i.e. the measurement back-action
/// rotates the coherence at the accumulated probe phase while leaving its
/// envelope intact (the envelope decay is negligible in the linear regime).
double coherence_after_qnd(double n_mean, double alpha, double omega,
                           int rounds);

/// Builds a protocol configuration realizing integrated strength gamma on
/// states occupying totals up to n_max.  omega is set to gamma / (k pi) with
/// the smallest even k that keeps omega * n_max <= 0.1 (the linear-response
/// budget), and alpha is sized so that rounds_target rounds accumulate the
/// probe phase k pi exactly; the realized gamma then equals the request
/// exactly and the coherence comes back at its full envelope.  A positive
/// alpha_override fixes alpha instead and the number of rounds is chosen to
/// keep the accumulated phase as close to k pi as the rounding allows.
QndConfig derive_qnd_config(double gamma, std::int64_t n_max,
                            int rounds_target, double alpha_override,
                            std::uint64_t seed);

/// Gaussian-conditioning model of the post-measurement moments of the
/// standard clock input (number mean n_mean, variance sigma2) after
/// integrated strength gamma, with the coherence reduced by the factor
/// coherence_cos = cos(accumulated probe phase); 1 for a tuned protocol.
MomentSet analytic_squeezed_moments(double n_mean, double sigma2, double gamma,
                                    double coherence_cos = 1.0);

/// Deterministic digest of a state's numerical content (FNV-1a over the
/// weight and amplitude bit patterns, in storage order).
std::uint64_t state_digest(const AtomState &state);

}  // namespace clocksim

#endif  // CLOCKSIM_QND_HPP
