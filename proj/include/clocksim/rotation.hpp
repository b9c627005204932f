// Copyright 2026 The clocksim authors
// SPDX-License-Identifier: MIT

#ifndef CLOCKSIM_ROTATION_HPP
#define CLOCKSIM_ROTATION_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "clocksim/states.hpp"

namespace clocksim {

/// Applies exp(-i theta Jy) within one fixed-total-number sector.
///
/// Jy = D Jx D' with the diagonal unitary D = diag((-i)^n), so the rotation
/// is computed from the eigendecomposition of the real symmetric tridiagonal
/// Jx; the decomposition is done once per sector size and reused for every
/// angle.  Vectors are full-length (total_n + 1) occupation amplitudes of
/// mode a.
class SectorRotator {
 public:
  explicit SectorRotator(std::int64_t total_n);

  std::int64_t total_n() const { return n_; }

  /// out = exp(-i theta Jy) in.  `in` and `out` must have size total_n + 1
  /// and must not alias.
  void apply(double theta, const std::vector<std::complex<double>> &in,
             std::vector<std::complex<double>> &out) const;

  /// Rotates a sector state, returning full-length occupation amplitudes.
  std::vector<std::complex<double>> rotate(const SectorState &sector,
                                           double theta) const;

 private:
  std::int64_t n_;
  Eigen::MatrixXd evec_;   // eigenvectors of Jx, one per column
  Eigen::VectorXd eval_;   // eigenvalues of Jx
};

}  // namespace clocksim

#endif  // CLOCKSIM_ROTATION_HPP
