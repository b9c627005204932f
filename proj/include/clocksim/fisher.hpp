// Copyright 2026 The clocksim authors
// SPDX-License-Identifier: MIT

#ifndef CLOCKSIM_FISHER_HPP
#define CLOCKSIM_FISHER_HPP

#include <optional>

#include "clocksim/states.hpp"

namespace clocksim {

struct FisherReport {
  double quantum_fisher = 0.0;
  double cr_delta_theta = 0.0;  // Cramer-Rao bound 1 / sqrt(m F_Q)
  bool entangled = false;       // witness F_Q > <N>
  std::optional<double> classical_fisher;  // population-readout CFI, if asked
};

/// Quantum Fisher information of a rotation exp(-i theta Jy) acting on a
/// number-diagonal state (every sector occupies a single |n_a, n_b> basis
/// state).  Evaluated from the spectral pair sum
///   F_Q = 2 sum_{k,l} (p_k - p_l)^2 / (p_k + p_l) |<k| Jy |l>|^2,
/// where unoccupied basis states enter as zero-probability partners.  Jy
/// couples only |n_a, n_b> to |n_a +/- 1, n_b -/+ 1>, so the sum is linear
/// in the number of occupied states.  Throws domain_error if some sector is
/// not a single basis state.
double qfi_diagonal(const AtomState &state);

/// Closed form of the same quantity for fock_mixture_state(n_a, rho_b):
///   F_Q = 2 n_a <n_b> + n_a + <n_b>,
/// returned as the phase bound 1 / sqrt(m F_Q).
double fock_mixture_cr_sensitivity(double n_a, double nb_mean, int reps);

/// Entanglement witness: quantum Fisher information exceeding the total
/// particle number is impossible for any separable (unentangled) input.
bool entanglement_witness(const AtomState &state, double quantum_fisher);

/// Classical Fisher information of the mode-a population readout after the
/// pulse exp(-i theta Jy), with the derivative taken by central differences:
///   F_C(theta) = sum_n (d p(n|theta) / dtheta)^2 / p(n|theta),
/// restricted to outcomes with p(n|theta) >= prob_floor.  Exact dense
/// rotations are used, so states are limited to totals <= n_rot_max.
double classical_fisher_single_port(const AtomState &state, double theta,
                                    double epsilon = 1e-5,
                                    std::int64_t n_rot_max = 200,
                                    double prob_floor = 1e-15);

/// Bundles the quantum bound and (optionally) the readout information at one
/// pulse area.
FisherReport fisher_report(const AtomState &state, int reps,
                           std::optional<double> theta_for_cfi);

}  // namespace clocksim

#endif  // CLOCKSIM_FISHER_HPP
