// Copyright 2026 The clocksim authors
// SPDX-License-Identifier: MIT

#ifndef CLOCKSIM_STATES_HPP
#define CLOCKSIM_STATES_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "clocksim/common.hpp"

namespace clocksim {

/// Pure state of two bosonic modes (a, b) restricted to a fixed total
/// particle number.  The basis is |n_a = n, n_b = total_n - n> and only the
/// window [support_lo, support_hi] of occupations with non-negligible weight
/// is stored; amplitudes outside the window are exactly zero.
struct SectorState {
  std::int64_t total_n = 0;
  std::int64_t support_lo = 0;
  std::int64_t support_hi = -1;  // inclusive; empty window when hi < lo
  std::vector<std::complex<double>> amplitudes;  // index i <-> n = support_lo + i

  std::int64_t window_size() const { return support_hi - support_lo + 1; }

  /// Amplitude of |n_a = n>; zero outside the stored window.
  std::complex<double> amplitude(std::int64_t n) const {
    if (n < support_lo || n > support_hi) return {0.0, 0.0};
    return amplitudes[static_cast<std::size_t>(n - support_lo)];
  }

  double norm_sq() const;

  /// Rescales amplitudes to unit norm.  Throws numeric_error on zero norm.
  void normalize();

  /// Shrinks the stored window: leading/trailing entries whose probability is
  /// below rel_cut times the peak probability are dropped (set to exact zero).
  void trim(double rel_cut = 1e-30);
};

/// Incoherent mixture of fixed-total-number sectors.  This is the general
/// state of the simulator: a total-number distribution dephases all
/// coherences between different totals, so a weighted list of sector states
/// is fully general for every preparation and update implemented here.
struct AtomState {
  std::vector<double> weights;       // mixture weight of each sector
  std::vector<SectorState> sectors;  // strictly increasing total_n
  double number_mean = 0.0;          // mean of the total-number marginal
  double number_var = 0.0;           // variance of the total-number marginal

  std::size_t n_sectors() const { return sectors.size(); }
  std::int64_t max_total() const;

  /// Recomputes number_mean / number_var from the current weights.
  void refresh_metadata();

  /// Rescales weights to unit sum.  Throws numeric_error on zero total.
  void renormalize_weights();

  /// Drops sectors of negligible weight and trims every amplitude window,
  /// then restores exact normalization.
  void compact(double rel_cut = 1e-30);
};

enum class DistributionKind { gaussian, delta, custom };

/// Probability distribution of the total particle number.
struct NumberDistribution {
  DistributionKind kind = DistributionKind::delta;
  double mean = 0.0;
  double variance = 0.0;
  double truncation_halfwidth = 6.0;  // in standard deviations (gaussian kind)
  std::int64_t first_n = 0;
  std::vector<double> weights;  // P(N) for N = first_n, first_n + 1, ...
};

/// Builds a discretized total-number distribution.
///
/// gaussian: P(N) proportional to exp(-(N - mean)^2 / (2 variance)) on the
///   integer range within truncation_halfwidth standard deviations of the
///   mean (clipped at N >= 0), renormalized.  variance == 0 degenerates to a
///   point mass at round(mean).
/// delta: point mass at round(mean).
NumberDistribution make_number_distribution(DistributionKind kind, double mean,
                                            double variance,
                                            double truncation_halfwidth = 6.0);

/// Builds an explicit tabulated total-number distribution (kind == custom).
NumberDistribution make_custom_distribution(std::int64_t first_n,
                                            std::vector<double> weights);

/// State of one sector after an ideal 50/50 beam-splitter pulse acting on
/// |total_n, 0>: binomial amplitudes c_n = 2^(-N/2) sqrt(C(N, n)).
SectorState binomial_sector_state(std::int64_t total_n);

/// Standard Ramsey input: every sector prepared in the binomial (coherent
/// spin) state, mixed over the given total-number distribution.  The
/// population variance of mode a is (variance + mean) / 4.
AtomState prepared_clock_state(const NumberDistribution &dist);

/// Mixture of independent Gaussian-profiled mode occupations: modes a and b
/// carry independent Gaussian number envelopes centered at mean_total / 2
/// with standard deviations sigma_a and sigma_b.  Conditioning on the total
/// N yields, per sector, amplitudes proportional to the product of the two
/// envelopes along the line n_a + n_b = N.  sigma == 0 selects a delta
/// envelope for that mode.
AtomState gaussian_product_state(double mean_total, double sigma_a,
                                 double sigma_b);

/// Mode a in the Fock state |n_a>, mode b in the diagonal mixture described
/// by rho_b_diagonal (probabilities of n_b = 0, 1, ...).  Every sector of the
/// result has a single occupied basis state.
AtomState fock_mixture_state(std::int64_t n_a,
                             const std::vector<double> &rho_b_diagonal);

/// Inverse participation ratio of the sector weights, 1 / sum w_k^2 for a
/// normalized mixture: the effective number of totals the state straddles.
double participation_ratio(const AtomState &state);

}  // namespace clocksim

#endif  // CLOCKSIM_STATES_HPP
