// Copyright 2026 The clocksim authors
// SPDX-License-Identifier: MIT

#ifndef CLOCKSIM_SENSITIVITY_HPP
#define CLOCKSIM_SENSITIVITY_HPP

#include <string>
#include <vector>

#include "clocksim/moments.hpp"

namespace clocksim {

/// Phase sensitivity of a second-pulse readout at one pulse area theta.
struct SensitivityPoint {
  double theta = 0.0;
  double delta_theta = 0.0;  // +infinity when divergent
  double mean_out = 0.0;     // <n_a> after the readout pulse
  double var_out = 0.0;      // Var(n_a) after the readout pulse
  double slope = 0.0;        // d<n_a>/dtheta
  int m = 1;                 // number of averaged repetitions
  bool divergent = false;
};

struct SensitivityCurve {
  std::vector<SensitivityPoint> points;
  std::string state_descriptor;
  double gamma = 0.0;
  double n_mean = 0.0;
  double sigma2 = 0.0;
};

/// Mode-a population statistics after the readout pulse exp(-i theta Jy),
/// computed in the Heisenberg picture from the input-state moments:
///   n_a(theta) = N/2 + cos(theta) Jz - sin(theta) Jx.
void output_number_moments(const MomentSet &m, double theta, double *mean_out,
                           double *var_out, double *slope_out);

/// Error-propagation sensitivity sqrt(Var n_a) / (sqrt(m) |d<n_a>/dtheta|).
/// Points where the slope vanishes but the variance does not are flagged
/// divergent (delta_theta = +infinity).  Points where variance and slope
/// both vanish to rounding are resolved by their leading quadratic response,
/// which yields the finite limiting value attained infinitesimally off the
/// degenerate angle.  A genuinely negative variance (possible only for
/// moments from an analytic model outside its regime of validity) is also
/// flagged divergent rather than reported as zero noise.
SensitivityPoint delta_theta(const MomentSet &m, double theta, int reps);
SensitivityPoint delta_theta(const AtomState &state, double theta, int reps);

/// theta -> 0 limit 2 sqrt(Var n_a) / (sqrt(m) |coherence|).  Requires
/// symmetric mode populations (|<Jz>| <= 1e-6 * <n_a>); throws domain_error
/// otherwise.  Returns +infinity when the coherence vanishes.
double small_angle_delta_theta(const MomentSet &m, int reps);
double small_angle_delta_theta(const AtomState &state, int reps);

/// Reference scalings: 1 / sqrt(m n) and sqrt(2) / (sqrt(m) n).
double sql_limit(double n_mean, int reps);
double heisenberg_limit(double n_mean, int reps);

/// Closed-form sensitivity of the unsqueezed clock input with total-number
/// mean n_mean and variance sigma2, as a function of the readout pulse area:
///   sqrt(1/n + (sigma2/n^2) tan^2(pi/4 - theta/2)) / sqrt(m).
/// Throws domain_error at the singular angles theta = 3 pi/2 + 2 pi k.
double ramsey_clock_sensitivity(double n_mean, double sigma2, double theta,
                                int reps);

/// Closed-form small-angle sensitivity after number squeezing of integrated
/// strength gamma:  sqrt((sigma2 + n) / (1 + gamma (sigma2 + n))) / (n sqrt(m)).
double squeezed_small_angle_sensitivity(double n_mean, double sigma2,
                                        double gamma, int reps);

/// Squeezing strength at which the small-angle sensitivity crosses the
/// standard quantum limit: sigma2 / (n (n + sigma2)).
double sub_shot_noise_gamma_threshold(double n_mean, double sigma2);

struct OptimalTheta {
  double theta_opt = 0.0;
  double delta_theta_opt = 0.0;
};

/// Minimizes delta_theta over a window of pulse areas: coarse scan on a
/// uniform grid followed by golden-section refinement to 1e-6 in theta.
/// Throws numeric_error if no grid point has finite sensitivity.
OptimalTheta optimal_theta(const MomentSet &m, int reps,
                           double window_lo = -1.55,
                           double window_hi = 3.13,
                           int grid_points = 2001);
OptimalTheta optimal_theta(const AtomState &state, int reps,
                           double window_lo = -1.55,
                           double window_hi = 3.13,
                           int grid_points = 2001);

/// Evaluates delta_theta on an explicit grid of pulse areas.
SensitivityCurve sensitivity_curve(const AtomState &state,
                                   const std::vector<double> &theta_grid,
                                   int reps);

}  // namespace clocksim

#endif  // CLOCKSIM_SENSITIVITY_HPP
