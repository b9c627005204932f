// Copyright 2026 The clocksim authors
// SPDX-License-Identifier: MIT

#include "clocksim/rotation.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace clocksim {

namespace {

// (-i)^n for n >= 0.
inline std::complex<double> minus_i_pow(std::int64_t n) {
  switch (n & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

}  // namespace

SectorRotator::SectorRotator(std::int64_t total_n) : n_(total_n) {
  if (total_n < 0) throw domain_error("total_n must be >= 0");
  const Eigen::Index dim = static_cast<Eigen::Index>(total_n) + 1;
  Eigen::MatrixXd jx = Eigen::MatrixXd::Zero(dim, dim);
  const double N = static_cast<double>(total_n);
  for (Eigen::Index n = 0; n + 1 < dim; ++n) {
    const double v = 0.5 * std::sqrt((static_cast<double>(n) + 1.0) *
                                     (N - static_cast<double>(n)));
    jx(n, n + 1) = v;
    jx(n + 1, n) = v;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jx);
  if (solver.info() != Eigen::Success) {
    throw numeric_error("eigendecomposition of the rotation generator failed");
  }
  evec_ = solver.eigenvectors();
  eval_ = solver.eigenvalues();
}

void SectorRotator::apply(double theta,
                          const std::vector<std::complex<double>> &in,
                          std::vector<std::complex<double>> &out) const {
  const Eigen::Index dim = static_cast<Eigen::Index>(n_) + 1;
  if (static_cast<Eigen::Index>(in.size()) != dim) {
    throw domain_error("rotation input has wrong length");
  }
  out.resize(static_cast<std::size_t>(dim));

  // exp(-i theta Jy) = D V exp(-i theta L) V^T D', with D = diag((-i)^n).
  Eigen::VectorXcd v(dim);
  for (Eigen::Index n = 0; n < dim; ++n) {
    // D' = diag(conj((-i)^n)) = diag(i^n).
    v(n) = std::conj(minus_i_pow(n)) * in[static_cast<std::size_t>(n)];
  }
  Eigen::VectorXcd coeffs = evec_.transpose() * v;
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double phi = -theta * eval_(k);
    coeffs(k) *= std::complex<double>(std::cos(phi), std::sin(phi));
  }
  Eigen::VectorXcd rotated = evec_ * coeffs;
  for (Eigen::Index n = 0; n < dim; ++n) {
    out[static_cast<std::size_t>(n)] =
        minus_i_pow(n) * rotated(n);
  }
}

std::vector<std::complex<double>> SectorRotator::rotate(
    const SectorState &sector, double theta) const {
  if (sector.total_n != n_) {
    throw domain_error("sector total does not match the rotator");
  }
  std::vector<std::complex<double>> full(static_cast<std::size_t>(n_) + 1,
                                         {0.0, 0.0});
  for (std::int64_t n = sector.support_lo; n <= sector.support_hi; ++n) {
    full[static_cast<std::size_t>(n)] = sector.amplitude(n);
  }
  std::vector<std::complex<double>> out;
  apply(theta, full, out);
  return out;
}

}  // namespace clocksim
