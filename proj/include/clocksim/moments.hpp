// Copyright 2026 The clocksim authors
// SPDX-License-Identifier: MIT

#ifndef CLOCKSIM_MOMENTS_HPP
#define CLOCKSIM_MOMENTS_HPP

#include "clocksim/states.hpp"

namespace clocksim {

/// Collective-spin and population moments of a state.  Per sector of total
/// number N the spin components are
///   Jx = (a'b + b'a) / 2,  Jy = (a'b - b'a) / (2i),  Jz = (n_a - n_b) / 2,
/// where primes denote adjoints; the mode-a population is n_a = N/2 + Jz.
/// Mixture moments are weight-averaged raw moments (not centered).
struct MomentSet {
  double jx = 0.0;
  double jy = 0.0;
  double jz = 0.0;
  double jx2 = 0.0;       // <Jx^2>
  double jz2 = 0.0;       // <Jz^2>
  double jxjz_sym = 0.0;  // <Jx Jz + Jz Jx>
  double n_mean = 0.0;    // <N> (total number)
  double n2_mean = 0.0;   // <N^2>
  double n_jx_mean = 0.0;  // <N Jx> (N is constant within a sector)
  double n_jz_mean = 0.0;  // <N Jz>
  double na_mean = 0.0;   // <n_a>
  double na_var = 0.0;    // <n_a^2> - <n_a>^2
  double coherence = 0.0;  // <a'b + b'a> = 2 <Jx>
};

/// Moments of a single normalized sector.
MomentSet sector_moments(const SectorState &sector);

/// Weight-averaged moments of a mixture.
MomentSet moments(const AtomState &state);

/// Squeezing figure of merit Var(Jz) / (<Jx>^2 + <Jy>^2), classified so that
/// degenerate numerators/denominators are reported rather than returned as
/// overflow.  A fully symmetric beam-splitter state of N atoms scores 1/N.
struct XiSquared {
  enum class Kind { value, divergent, undetermined };
  Kind kind = Kind::value;
  double value = 0.0;  // meaningful only when kind == value
};

XiSquared xi_squared(const AtomState &state);

}  // namespace clocksim

#endif  // CLOCKSIM_MOMENTS_HPP
