// Copyright 2026 The clocksim authors
// SPDX-License-Identifier: MIT

#include "clocksim/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace clocksim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct CenteredCov {
  double vn = 0.0;   // Var N
  double vz = 0.0;   // Var Jz
  double vx = 0.0;   // Var Jx
  double cnz = 0.0;  // Cov(N, Jz)
  double cnx = 0.0;  // Cov(N, Jx)
  double czx = 0.0;  // Cov(Jz, Jx), symmetrized
};

CenteredCov centered_cov(const MomentSet &m) {
  CenteredCov c;
  c.vn = m.n2_mean - m.n_mean * m.n_mean;
  c.vz = m.jz2 - m.jz * m.jz;
  c.vx = m.jx2 - m.jx * m.jx;
  c.cnz = m.n_jz_mean - m.n_mean * m.jz;
  c.cnx = m.n_jx_mean - m.n_mean * m.jx;
  c.czx = 0.5 * m.jxjz_sym - m.jx * m.jz;
  return c;
}

void check_reps(int reps) {
  if (reps < 1) throw domain_error("repetition count must be >= 1");
}

}  // namespace

void output_number_moments(const MomentSet &m, double theta, double *mean_out,
                           double *var_out, double *slope_out) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const CenteredCov k = centered_cov(m);
  if (mean_out) *mean_out = 0.5 * m.n_mean + c * m.jz - s * m.jx;
  if (var_out) {
    const double v = 0.25 * k.vn + c * c * k.vz + s * s * k.vx + c * k.cnz -
                     s * k.cnx - 2.0 * s * c * k.czx;
    *var_out = std::max(0.0, v);
  }
  if (slope_out) *slope_out = -s * m.jz - c * m.jx;
}

SensitivityPoint delta_theta(const MomentSet &m, double theta, int reps) {
  check_reps(reps);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const CenteredCov k = centered_cov(m);

  SensitivityPoint pt;
  pt.theta = theta;
  pt.m = reps;
  pt.mean_out = 0.5 * m.n_mean + c * m.jz - s * m.jx;
  const double var = 0.25 * k.vn + c * c * k.vz + s * s * k.vx + c * k.cnz -
                     s * k.cnx - 2.0 * s * c * k.czx;
  pt.var_out = std::max(0.0, var);
  pt.slope = -s * m.jz - c * m.jx;
  const double sqrt_m = std::sqrt(static_cast<double>(reps));

  // Scale against which "the variance vanishes" is judged: the raw quadratic
  // terms it was assembled from, so catastrophic cancellation is detected
  // independent of the state's overall magnitude.
  const double raw_scale = 0.25 * m.n2_mean + c * c * m.jz2 + s * s * m.jx2 +
                           std::abs(c * m.n_jz_mean) +
                           std::abs(s * m.n_jx_mean) +
                           std::abs(s * c * m.jxjz_sym) +
                           pt.mean_out * pt.mean_out;
  const double var_floor =
      64.0 * std::numeric_limits<double>::epsilon() * raw_scale;
  const double slope_floor = 1e-7 * (std::abs(m.jz) + std::abs(m.jx));

  if (pt.var_out <= var_floor && std::abs(pt.slope) <= slope_floor) {
    // Both the signal slope and the noise vanish at this angle; the ratio is
    // resolved by the leading (quadratic) response just off the degenerate
    // angle: second derivatives of mean and standard deviation give
    //   sqrt(s^2 Vz + c^2 Vx + 2 s c Czx) / |s Jx - c Jz|.
    const double v2 =
        std::max(0.0, s * s * k.vz + c * c * k.vx + 2.0 * s * c * k.czx);
    const double s2 = std::abs(s * m.jx - c * m.jz);
    const double s2_floor = 1e-14 * (std::abs(m.jz) + std::abs(m.jx) +
                                     std::sqrt(v2));
    if (s2 <= s2_floor) {
      pt.divergent = true;
      pt.delta_theta = kInf;
      return pt;
    }
    pt.delta_theta = std::sqrt(v2) / (sqrt_m * s2);
    return pt;
  }

  if (var < -var_floor) {
    // A genuinely negative quadratic form cannot come from a physical state:
    // it signals moments supplied by an analytic model evaluated outside its
    // regime of validity. Flag the point instead of reporting zero noise.
    pt.divergent = true;
    pt.delta_theta = kInf;
    return pt;
  }

  if (std::abs(pt.slope) < 1e-14 * std::sqrt(pt.var_out)) {
    pt.divergent = true;
    pt.delta_theta = kInf;
    return pt;
  }
  pt.delta_theta = std::sqrt(pt.var_out) / (sqrt_m * std::abs(pt.slope));
  return pt;
}

SensitivityPoint delta_theta(const AtomState &state, double theta, int reps) {
  return delta_theta(moments(state), theta, reps);
}

double small_angle_delta_theta(const MomentSet &m, int reps) {
  check_reps(reps);
  if (std::abs(m.jz) > 1e-6 * std::max(1.0, m.na_mean)) {
    throw domain_error(
        "small-angle sensitivity requires symmetric mode populations");
  }
  const double coh = std::abs(m.coherence);
  const double noise = 2.0 * std::sqrt(m.na_var);
  if (coh < 1e-14 * std::max(1.0, noise)) return kInf;
  return noise / (std::sqrt(static_cast<double>(reps)) * coh);
}

double small_angle_delta_theta(const AtomState &state, int reps) {
  return small_angle_delta_theta(moments(state), reps);
}

double sql_limit(double n_mean, int reps) {
  check_reps(reps);
  if (!(n_mean > 0.0)) throw domain_error("n_mean must be > 0");
  return 1.0 / std::sqrt(static_cast<double>(reps) * n_mean);
}

double heisenberg_limit(double n_mean, int reps) {
  check_reps(reps);
  if (!(n_mean > 0.0)) throw domain_error("n_mean must be > 0");
  // Balanced-Fock reference sqrt(2)/n: the best sensitivity reachable by the
  // single-port readout, attained in the n_a = n_b Fock limit.
  return std::sqrt(2.0) / (std::sqrt(static_cast<double>(reps)) * n_mean);
}

double ramsey_clock_sensitivity(double n_mean, double sigma2, double theta,
                                int reps) {
  check_reps(reps);
  if (!(n_mean > 0.0)) throw domain_error("n_mean must be > 0");
  if (!(sigma2 >= 0.0)) throw domain_error("sigma2 must be >= 0");
  const double half = 0.25 * kPi - 0.5 * theta;
  if (std::abs(std::cos(half)) < 1e-9) {
    throw domain_error("sensitivity formula is singular at this pulse area");
  }
  const double t = std::tan(half);
  return std::sqrt(1.0 / n_mean + sigma2 / (n_mean * n_mean) * t * t) /
         std::sqrt(static_cast<double>(reps));
}

double squeezed_small_angle_sensitivity(double n_mean, double sigma2,
                                        double gamma, int reps) {
  check_reps(reps);
  if (!(n_mean > 0.0)) throw domain_error("n_mean must be > 0");
  if (!(sigma2 >= 0.0)) throw domain_error("sigma2 must be >= 0");
  if (!(gamma >= 0.0)) throw domain_error("gamma must be >= 0");
  const double total = sigma2 + n_mean;
  return std::sqrt(total / (1.0 + gamma * total)) /
         (n_mean * std::sqrt(static_cast<double>(reps)));
}

double sub_shot_noise_gamma_threshold(double n_mean, double sigma2) {
  if (!(n_mean > 0.0)) throw domain_error("n_mean must be > 0");
  if (!(sigma2 >= 0.0)) throw domain_error("sigma2 must be >= 0");
  return sigma2 / (n_mean * (n_mean + sigma2));
}

OptimalTheta optimal_theta(const MomentSet &m, int reps, double window_lo,
                           double window_hi, int grid_points) {
  check_reps(reps);
  if (!(window_hi > window_lo)) {
    throw domain_error("optimal_theta window is empty");
  }
  if (grid_points < 3) throw domain_error("grid_points must be >= 3");

  const auto value = [&](double th) {
    const SensitivityPoint pt = delta_theta(m, th, reps);
    return pt.divergent ? kInf : pt.delta_theta;
  };

  const double step =
      (window_hi - window_lo) / static_cast<double>(grid_points - 1);
  double best_theta = window_lo;
  double best_value = kInf;
  int best_index = -1;
  for (int i = 0; i < grid_points; ++i) {
    const double th = window_lo + step * static_cast<double>(i);
    const double v = value(th);
    if (v < best_value) {
      best_value = v;
      best_theta = th;
      best_index = i;
    }
  }
  if (best_index < 0 || !std::isfinite(best_value)) {
    throw numeric_error("no finite sensitivity in the search window");
  }

  // Golden-section refinement on the bracketing interval.
  double a = window_lo + step * static_cast<double>(std::max(0, best_index - 1));
  double b = window_lo +
             step * static_cast<double>(std::min(grid_points - 1, best_index + 1));
  const double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = value(x1);
  double f2 = value(x2);
  while (b - a > 1e-6) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = value(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = value(x2);
    }
  }
  const double mid = 0.5 * (a + b);
  const double fm = value(mid);

  OptimalTheta out;
  out.theta_opt = mid;
  out.delta_theta_opt = fm;
  if (best_value < out.delta_theta_opt) {
    out.theta_opt = best_theta;
    out.delta_theta_opt = best_value;
  }
  return out;
}

OptimalTheta optimal_theta(const AtomState &state, int reps, double window_lo,
                           double window_hi, int grid_points) {
  return optimal_theta(moments(state), reps, window_lo, window_hi, grid_points);
}

SensitivityCurve sensitivity_curve(const AtomState &state,
                                   const std::vector<double> &theta_grid,
                                   int reps) {
  check_reps(reps);
  const MomentSet m = moments(state);
  SensitivityCurve curve;
  curve.points.reserve(theta_grid.size());
  for (double th : theta_grid) {
    curve.points.push_back(delta_theta(m, th, reps));
  }
  curve.n_mean = m.n_mean;
  curve.sigma2 = std::max(0.0, m.n2_mean - m.n_mean * m.n_mean);
  return curve;
}

}  // namespace clocksim
