// Copyright 2026 The clocksim authors
// SPDX-License-Identifier: MIT

#include "clocksim/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace clocksim {

namespace {

// Relative probability below which amplitudes and mixture weights are
// discarded when building or compacting states.
constexpr double kWeightCut = 1e-30;

double round_to_nonnegative_integer(double x, const char *what) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw domain_error(std::string(what) + " must be a finite value >= 0");
  }
  return std::nearbyint(x);
}

}  // namespace

double SectorState::norm_sq() const {
  double total = 0.0;
  for (const auto &a : amplitudes) total += std::norm(a);
  return total;
}

void SectorState::normalize() {
  const double n2 = norm_sq();
  if (!(n2 > 0.0) || !std::isfinite(n2)) {
    throw numeric_error("cannot normalize a sector with zero or invalid norm");
  }
  const double inv = 1.0 / std::sqrt(n2);
  for (auto &a : amplitudes) a *= inv;
}

void SectorState::trim(double rel_cut) {
  if (amplitudes.empty()) return;
  double peak = 0.0;
  for (const auto &a : amplitudes) peak = std::max(peak, std::norm(a));
  const double cut = rel_cut * peak;
  std::size_t lo = 0;
  std::size_t hi = amplitudes.size();
  while (lo < hi && std::norm(amplitudes[lo]) < cut) ++lo;
  while (hi > lo && std::norm(amplitudes[hi - 1]) < cut) --hi;
  if (lo == 0 && hi == amplitudes.size()) return;
  amplitudes = std::vector<std::complex<double>>(amplitudes.begin() + lo,
                                                 amplitudes.begin() + hi);
  support_lo += static_cast<std::int64_t>(lo);
  support_hi = support_lo + static_cast<std::int64_t>(amplitudes.size()) - 1;
}

std::int64_t AtomState::max_total() const {
  std::int64_t best = 0;
  for (const auto &s : sectors) best = std::max(best, s.total_n);
  return best;
}

void AtomState::refresh_metadata() {
  double wsum = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < sectors.size(); ++i) {
    const double w = weights[i];
    const double n = static_cast<double>(sectors[i].total_n);
    wsum += w;
    m1 += w * n;
    m2 += w * n * n;
  }
  if (wsum > 0.0) {
    m1 /= wsum;
    m2 /= wsum;
  }
  number_mean = m1;
  number_var = std::max(0.0, m2 - m1 * m1);
}

void AtomState::renormalize_weights() {
  double wsum = 0.0;
  for (double w : weights) wsum += w;
  if (!(wsum > 0.0) || !std::isfinite(wsum)) {
    throw numeric_error("cannot renormalize a state with zero total weight");
  }
  for (auto &w : weights) w /= wsum;
}

void AtomState::compact(double rel_cut) {
  double peak = 0.0;
  for (double w : weights) peak = std::max(peak, w);
  const double cut = rel_cut * peak;
  std::size_t keep = 0;
  for (std::size_t i = 0; i < sectors.size(); ++i) {
    if (weights[i] < cut) continue;
    if (keep != i) {
      weights[keep] = weights[i];
      sectors[keep] = std::move(sectors[i]);
    }
    sectors[keep].trim(rel_cut);
    sectors[keep].normalize();
    ++keep;
  }
  weights.resize(keep);
  sectors.resize(keep);
  renormalize_weights();
  refresh_metadata();
}

NumberDistribution make_number_distribution(DistributionKind kind, double mean,
                                            double variance,
                                            double truncation_halfwidth) {
  if (kind == DistributionKind::custom) {
    throw domain_error(
        "custom distributions are built with make_custom_distribution");
  }
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw domain_error("number distribution mean must be finite and >= 0");
  }
  if (!(variance >= 0.0) || !std::isfinite(variance)) {
    throw domain_error("number distribution variance must be finite and >= 0");
  }
  if (!(truncation_halfwidth > 0.0)) {
    throw domain_error("truncation halfwidth must be > 0");
  }

  NumberDistribution dist;
  dist.kind = kind;
  dist.mean = mean;
  dist.variance = variance;
  dist.truncation_halfwidth = truncation_halfwidth;

  if (kind == DistributionKind::delta || variance == 0.0) {
    dist.first_n =
        static_cast<std::int64_t>(round_to_nonnegative_integer(mean, "mean"));
    dist.weights = {1.0};
    return dist;
  }

  const double sigma = std::sqrt(variance);
  const double lo_real = mean - truncation_halfwidth * sigma;
  const double hi_real = mean + truncation_halfwidth * sigma;
  const std::int64_t lo =
      std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(lo_real)));
  const std::int64_t hi =
      std::max(lo, static_cast<std::int64_t>(std::floor(hi_real)));

  dist.first_n = lo;
  dist.weights.resize(static_cast<std::size_t>(hi - lo + 1));
  double total = 0.0;
  for (std::int64_t n = lo; n <= hi; ++n) {
    const double d = static_cast<double>(n) - mean;
    const double w = std::exp(-0.5 * d * d / variance);
    dist.weights[static_cast<std::size_t>(n - lo)] = w;
    total += w;
  }
  if (!(total > 0.0)) {
    throw numeric_error("number distribution lost all weight to truncation");
  }
  for (auto &w : dist.weights) w /= total;
  return dist;
}

NumberDistribution make_custom_distribution(std::int64_t first_n,
                                            std::vector<double> weights) {
  if (first_n < 0) throw domain_error("first_n must be >= 0");
  if (weights.empty()) throw domain_error("custom distribution is empty");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw domain_error("custom distribution weights must be finite and >= 0");
    }
    total += w;
  }
  if (!(total > 0.0)) {
    throw domain_error("custom distribution has zero total weight");
  }

  NumberDistribution dist;
  dist.kind = DistributionKind::custom;
  dist.first_n = first_n;
  dist.weights = std::move(weights);
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < dist.weights.size(); ++i) {
    dist.weights[i] /= total;
    const double n = static_cast<double>(first_n + static_cast<std::int64_t>(i));
    m1 += dist.weights[i] * n;
    m2 += dist.weights[i] * n * n;
  }
  dist.mean = m1;
  dist.variance = std::max(0.0, m2 - m1 * m1);
  return dist;
}

SectorState binomial_sector_state(std::int64_t total_n) {
  if (total_n < 0) throw domain_error("total_n must be >= 0");
  const double N = static_cast<double>(total_n);
  // log |c_n|^2 = log C(N, n) - N log 2, evaluated with lgamma so the state
  // is exact to rounding for every N, then windowed at the usual cut.  The
  // binomial concentrates around N/2 with variance N/4; the cut at 1e-30 of
  // the peak lies within 5.9 sqrt(N) of the center, so scanning a generous
  // neighborhood of the center finds the full window without touching all
  // N + 1 occupations.
  const std::int64_t center = total_n / 2;
  const std::int64_t halfspan =
      static_cast<std::int64_t>(6.5 * std::sqrt(N)) + 25;
  const std::int64_t scan_lo = std::max<std::int64_t>(0, center - halfspan);
  const std::int64_t scan_hi = std::min(total_n, center + halfspan);

  const double log2v = std::log(2.0);
  const double lgN = std::lgamma(N + 1.0);
  std::vector<double> logp(static_cast<std::size_t>(scan_hi - scan_lo + 1));
  double peak = -std::numeric_limits<double>::infinity();
  for (std::int64_t n = scan_lo; n <= scan_hi; ++n) {
    const double v = lgN - std::lgamma(static_cast<double>(n) + 1.0) -
                     std::lgamma(N - static_cast<double>(n) + 1.0) - N * log2v;
    logp[static_cast<std::size_t>(n - scan_lo)] = v;
    peak = std::max(peak, v);
  }
  const double log_cut = peak + std::log(kWeightCut);
  std::int64_t lo = scan_lo;
  while (lo < scan_hi && logp[static_cast<std::size_t>(lo - scan_lo)] < log_cut) {
    ++lo;
  }
  std::int64_t hi = scan_hi;
  while (hi > lo && logp[static_cast<std::size_t>(hi - scan_lo)] < log_cut) {
    --hi;
  }

  SectorState sector;
  sector.total_n = total_n;
  sector.support_lo = lo;
  sector.support_hi = hi;
  sector.amplitudes.resize(static_cast<std::size_t>(hi - lo + 1));
  for (std::int64_t n = lo; n <= hi; ++n) {
    sector.amplitudes[static_cast<std::size_t>(n - lo)] =
        std::exp(0.5 * logp[static_cast<std::size_t>(n - scan_lo)]);
  }
  sector.normalize();
  return sector;
}

AtomState prepared_clock_state(const NumberDistribution &dist) {
  AtomState state;
  state.weights.reserve(dist.weights.size());
  state.sectors.reserve(dist.weights.size());
  for (std::size_t i = 0; i < dist.weights.size(); ++i) {
    if (dist.weights[i] <= 0.0) continue;
    const std::int64_t N = dist.first_n + static_cast<std::int64_t>(i);
    state.weights.push_back(dist.weights[i]);
    state.sectors.push_back(binomial_sector_state(N));
  }
  if (state.sectors.empty()) {
    throw domain_error("number distribution carries no weight");
  }
  state.renormalize_weights();
  state.refresh_metadata();
  return state;
}

AtomState gaussian_product_state(double mean_total, double sigma_a,
                                 double sigma_b) {
  if (!(mean_total >= 0.0) || !std::isfinite(mean_total)) {
    throw domain_error("mean_total must be finite and >= 0");
  }
  if (!(sigma_a >= 0.0) || !(sigma_b >= 0.0)) {
    throw domain_error("mode envelope widths must be >= 0");
  }
  const double mu = 0.5 * mean_total;  // center of each mode envelope

  // Per-mode occupation envelopes (amplitude profiles), truncated at the
  // usual probability cut.  sigma == 0 selects the single occupation
  // round(mu).
  const auto envelope = [mu](double sigma, std::int64_t &lo_out)
      -> std::vector<double> {
    if (sigma == 0.0) {
      lo_out = static_cast<std::int64_t>(
          round_to_nonnegative_integer(mu, "mode occupation"));
      return {1.0};
    }
    // |f(n)|^2 ~ exp(-(n - mu)^2 / (2 sigma^2)); keep |f|^2 >= cut * peak.
    const double halfwidth =
        sigma * std::sqrt(-2.0 * std::log(kWeightCut));
    const std::int64_t lo = std::max<std::int64_t>(
        0, static_cast<std::int64_t>(std::ceil(mu - halfwidth)));
    const std::int64_t hi = std::max(
        lo, static_cast<std::int64_t>(std::floor(mu + halfwidth)));
    std::vector<double> f(static_cast<std::size_t>(hi - lo + 1));
    for (std::int64_t n = lo; n <= hi; ++n) {
      const double d = static_cast<double>(n) - mu;
      f[static_cast<std::size_t>(n - lo)] =
          std::exp(-0.25 * d * d / (sigma * sigma));
    }
    lo_out = lo;
    return f;
  };

  std::int64_t lo_a = 0, lo_b = 0;
  const std::vector<double> fa = envelope(sigma_a, lo_a);
  const std::vector<double> fb = envelope(sigma_b, lo_b);
  const std::int64_t hi_a = lo_a + static_cast<std::int64_t>(fa.size()) - 1;
  const std::int64_t hi_b = lo_b + static_cast<std::int64_t>(fb.size()) - 1;

  // Group the product amplitudes f_a(n_a) f_b(n_b) by total N = n_a + n_b.
  const std::int64_t n_min = lo_a + lo_b;
  const std::int64_t n_max = hi_a + hi_b;
  AtomState state;
  for (std::int64_t N = n_min; N <= n_max; ++N) {
    const std::int64_t a_lo = std::max(lo_a, N - hi_b);
    const std::int64_t a_hi = std::min(hi_a, N - lo_b);
    if (a_hi < a_lo) continue;
    SectorState sector;
    sector.total_n = N;
    sector.support_lo = a_lo;
    sector.support_hi = a_hi;
    sector.amplitudes.resize(static_cast<std::size_t>(a_hi - a_lo + 1));
    double wsec = 0.0;
    for (std::int64_t na = a_lo; na <= a_hi; ++na) {
      const double amp = fa[static_cast<std::size_t>(na - lo_a)] *
                         fb[static_cast<std::size_t>(N - na - lo_b)];
      sector.amplitudes[static_cast<std::size_t>(na - a_lo)] = amp;
      wsec += amp * amp;
    }
    if (!(wsec > 0.0)) continue;
    sector.trim(kWeightCut);
    sector.normalize();
    state.weights.push_back(wsec);
    state.sectors.push_back(std::move(sector));
  }
  if (state.sectors.empty()) {
    throw domain_error("product state carries no weight after truncation");
  }
  state.renormalize_weights();
  state.refresh_metadata();
  return state;
}

AtomState fock_mixture_state(std::int64_t n_a,
                             const std::vector<double> &rho_b_diagonal) {
  if (n_a < 0) throw domain_error("n_a must be >= 0");
  if (rho_b_diagonal.empty()) {
    throw domain_error("rho_b_diagonal must not be empty");
  }
  double total = 0.0;
  for (double p : rho_b_diagonal) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw domain_error("rho_b_diagonal entries must be finite and >= 0");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw domain_error("rho_b_diagonal must sum to 1");
  }

  AtomState state;
  for (std::size_t nb = 0; nb < rho_b_diagonal.size(); ++nb) {
    const double p = rho_b_diagonal[nb];
    if (p <= 0.0) continue;
    SectorState sector;
    sector.total_n = n_a + static_cast<std::int64_t>(nb);
    sector.support_lo = n_a;
    sector.support_hi = n_a;
    sector.amplitudes = {{1.0, 0.0}};
    state.weights.push_back(p);
    state.sectors.push_back(std::move(sector));
  }
  if (state.sectors.empty()) {
    throw domain_error("rho_b_diagonal carries no weight");
  }
  state.renormalize_weights();
  state.refresh_metadata();
  return state;
}

double participation_ratio(const AtomState &state) {
  double wsum = 0.0, w2sum = 0.0;
  for (double w : state.weights) {
    wsum += w;
    w2sum += w * w;
  }
  if (!(w2sum > 0.0)) throw numeric_error("state has zero total weight");
  return wsum * wsum / w2sum;
}

}  // namespace clocksim
