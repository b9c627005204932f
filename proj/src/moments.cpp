// Copyright 2026 The clocksim authors
// SPDX-License-Identifier: MIT

#include "clocksim/moments.hpp"

#include <cmath>
#include <complex>

namespace clocksim {

namespace {

// Matrix element <n+1| Jx |n> within a sector of total N (real, symmetric):
// sqrt((n + 1)(N - n)) / 2 without the 1/2, i.e. the a'b ladder factor.
inline double ladder_up(double n, double N) {
  return std::sqrt((n + 1.0) * (N - n));
}

}  // namespace

MomentSet sector_moments(const SectorState &sector) {
  MomentSet m;
  const std::int64_t N = sector.total_n;
  const double Nd = static_cast<double>(N);
  const std::int64_t lo = sector.support_lo;
  const auto &a = sector.amplitudes;
  const std::size_t L = a.size();

  double psum = 0.0, na = 0.0, na2 = 0.0;
  for (std::size_t i = 0; i < L; ++i) {
    const double p = std::norm(a[i]);
    const double n = static_cast<double>(lo + static_cast<std::int64_t>(i));
    psum += p;
    na += p * n;
    na2 += p * n * n;
  }
  if (!(psum > 0.0)) throw numeric_error("sector has zero norm");

  // <a'b> couples neighboring occupations: sum conj(c_{n+1}) c_n * ladder.
  std::complex<double> adb(0.0, 0.0);
  for (std::size_t i = 0; i + 1 < L; ++i) {
    const double n = static_cast<double>(lo + static_cast<std::int64_t>(i));
    adb += std::conj(a[i + 1]) * a[i] * ladder_up(n, Nd);
  }

  // w = Jx |psi> lives on the window extended by one on each side; <Jx^2> is
  // its norm and <Jx Jz + Jz Jx> follows from the overlap with Jz |psi>.
  double jx2 = 0.0;
  double sym = 0.0;
  for (std::int64_t n = std::max<std::int64_t>(0, lo - 1);
       n <= std::min<std::int64_t>(N, sector.support_hi + 1); ++n) {
    const double nd = static_cast<double>(n);
    std::complex<double> w(0.0, 0.0);
    if (n >= 1) w += 0.5 * ladder_up(nd - 1.0, Nd) * sector.amplitude(n - 1);
    if (n < N) w += 0.5 * ladder_up(nd, Nd) * sector.amplitude(n + 1);
    jx2 += std::norm(w);
    const double z = nd - 0.5 * Nd;
    sym += 2.0 * z * (std::conj(w) * sector.amplitude(n)).real();
  }

  // Normalize by the sector weight so the result is exact even for sectors
  // that are only approximately unit-norm.
  const double inv_p = 1.0 / psum;
  na *= inv_p;
  na2 *= inv_p;
  // Jx = (a'b + b'a)/2, so <Jx> = Re<a'b>: the 1/2 is absorbed when the
  // conjugate ladder pair is combined (likewise <Jy> = Im<a'b>).
  m.jx = adb.real() * inv_p;
  m.jy = adb.imag() * inv_p;
  m.jz = na - 0.5 * Nd;
  m.jx2 = jx2 * inv_p;
  m.jz2 = na2 - Nd * na + 0.25 * Nd * Nd;
  m.jxjz_sym = sym * inv_p;
  m.n_mean = Nd;
  m.n2_mean = Nd * Nd;
  m.n_jx_mean = Nd * m.jx;
  m.n_jz_mean = Nd * m.jz;
  m.na_mean = na;
  m.na_var = std::max(0.0, na2 - na * na);
  m.coherence = 2.0 * m.jx;
  return m;
}

MomentSet moments(const AtomState &state) {
  if (state.sectors.empty()) throw domain_error("state has no sectors");
  MomentSet acc;
  double wsum = 0.0;
  double na2_raw = 0.0;
  for (std::size_t k = 0; k < state.sectors.size(); ++k) {
    const double w = state.weights[k];
    if (w <= 0.0) continue;
    const MomentSet s = sector_moments(state.sectors[k]);
    wsum += w;
    acc.jx += w * s.jx;
    acc.jy += w * s.jy;
    acc.jz += w * s.jz;
    acc.jx2 += w * s.jx2;
    acc.jz2 += w * s.jz2;
    acc.jxjz_sym += w * s.jxjz_sym;
    acc.n_mean += w * s.n_mean;
    acc.n2_mean += w * s.n2_mean;
    acc.n_jx_mean += w * s.n_jx_mean;
    acc.n_jz_mean += w * s.n_jz_mean;
    acc.na_mean += w * s.na_mean;
    na2_raw += w * (s.na_var + s.na_mean * s.na_mean);
  }
  if (!(wsum > 0.0)) throw domain_error("state has zero total weight");
  const double inv = 1.0 / wsum;
  acc.jx *= inv;
  acc.jy *= inv;
  acc.jz *= inv;
  acc.jx2 *= inv;
  acc.jz2 *= inv;
  acc.jxjz_sym *= inv;
  acc.n_mean *= inv;
  acc.n2_mean *= inv;
  acc.n_jx_mean *= inv;
  acc.n_jz_mean *= inv;
  acc.na_mean *= inv;
  na2_raw *= inv;
  acc.na_var = std::max(0.0, na2_raw - acc.na_mean * acc.na_mean);
  acc.coherence = 2.0 * acc.jx;
  return acc;
}

XiSquared xi_squared(const AtomState &state) {
  const MomentSet m = moments(state);
  const double num = std::max(0.0, m.jz2 - m.jz * m.jz);
  const double den = m.jx * m.jx + m.jy * m.jy;
  XiSquared out;
  if (num < 1e-15 && den < 1e-15) {
    out.kind = XiSquared::Kind::undetermined;
    return out;
  }
  if (den < 1e-12 * num) {
    out.kind = XiSquared::Kind::divergent;
    return out;
  }
  out.kind = XiSquared::Kind::value;
  out.value = num / den;
  return out;
}

}  // namespace clocksim
