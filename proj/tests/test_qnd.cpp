// Copyright 2026 The clocksim authors
// SPDX-License-Identifier: MIT

#include <cmath>
#include <complex>
#include <map>
#include <tuple>
#include <vector>

#include <doctest.h>

#include "clocksim/moments.hpp"
#include "clocksim/qnd.hpp"
#include "clocksim/rng.hpp"
#include "clocksim/sensitivity.hpp"
#include "clocksim/states.hpp"
#include "oracles.hpp"

using namespace clocksim;

namespace {

AtomState clock_state(double n, double s2) {
  return prepared_clock_state(
      make_number_distribution(DistributionKind::gaussian, n, s2));
}

}  // namespace

TEST_CASE("probe kernel is normalized in the outcome variable") {
  for (const auto &[alpha, omega, n] :
       std::vector<std::tuple<double, double, std::int64_t>>{
           {2.3, 0.7, 1}, {0.9, 0.05, 13}, {4.0, 0.0, 5}}) {
    const auto f = [&, alpha = alpha, omega = omega, n = n](double p) {
      return std::complex<double>(std::norm(homodyne_kernel(p, n, alpha, omega)),
                                  0.0);
    };
    const std::complex<double> total = oracle::simpson(f, -16.0, 16.0, 32000);
    CHECK(total.real() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("probe kernel overlap reproduces the coherent-state overlap") {
  // Completeness of the quadrature basis: integrating <beta'|p><p|beta> over
  // p must return the known overlap of the two probe states
  // beta = alpha e^{-i omega n}, beta' = alpha e^{-i omega n'}.
  const double alpha = 2.3, omega = 0.7;
  const std::int64_t n = 0, np = 1;
  const auto f = [&](double p) {
    return std::conj(homodyne_kernel(p, np, alpha, omega)) *
           homodyne_kernel(p, n, alpha, omega);
  };
  const std::complex<double> integral = oracle::simpson(f, -16.0, 16.0, 32000);

  const std::complex<double> i_unit(0.0, 1.0);
  const std::complex<double> beta = alpha * std::exp(-i_unit * (omega * n));
  const std::complex<double> betap = alpha * std::exp(-i_unit * (omega * np));
  const std::complex<double> overlap =
      std::exp(std::conj(betap) * beta -
               0.5 * (std::norm(beta) + std::norm(betap)));
  CHECK(integral.real() == doctest::Approx(overlap.real()).epsilon(1e-10));
  CHECK(integral.imag() ==
        doctest::Approx(overlap.imag()).epsilon(1e-10).scale(1.0));
}

TEST_CASE("outcome distribution without dephasing is a single Gaussian") {
  const AtomState state = clock_state(100.0, 100.0);
  QndConfig cfg;
  cfg.alpha = 3.0;
  cfg.omega = 0.0;
  const HomodyneDistribution dist = homodyne_distribution(state, cfg);
  const double norm = std::sqrt(2.0 / kPi);
  for (double p : {-1.0, -0.3, 0.0, 0.4, 1.2}) {
    CHECK(dist.density(p) ==
          doctest::Approx(norm * std::exp(-2.0 * p * p)).epsilon(1e-12));
  }
}

TEST_CASE("outcome distribution resolves well-separated occupations") {
  // One atom on the beam splitter with a strong probe: two components at
  // 0 and -alpha sin(omega).
  AtomState state;
  state.weights = {1.0};
  state.sectors = {binomial_sector_state(1)};
  state.refresh_metadata();
  QndConfig cfg;
  cfg.alpha = 3.0;
  cfg.omega = 1.0;
  const HomodyneDistribution dist = homodyne_distribution(state, cfg);
  const double q1 = -3.0 * std::sin(1.0);
  const double norm = std::sqrt(2.0 / kPi);
  CHECK(dist.density(0.0) == doctest::Approx(0.5 * norm).epsilon(1e-3));
  CHECK(dist.density(q1) == doctest::Approx(0.5 * norm).epsilon(1e-3));
  CHECK(dist.density(0.5 * q1) < 0.05 * norm);
}

TEST_CASE("sampled outcomes follow the quadrature distribution") {
  // omega = 0: every occupation produces Normal(0, 1/4); the empirical CDF
  // of 1e5 draws must pass a Kolmogorov-Smirnov test at the 1% level.
  const AtomState state = clock_state(50.0, 50.0);
  QndConfig cfg;
  cfg.alpha = 2.0;
  cfg.omega = 0.0;
  Rng rng(99);
  std::vector<double> samples;
  samples.reserve(100000);
  for (int i = 0; i < 100000; ++i) {
    samples.push_back(sample_homodyne(state, cfg, rng));
  }
  const double d = oracle::ks_statistic(
      samples, [](double x) { return oracle::normal_quarter_cdf(x, 0.0); });
  CHECK(d * std::sqrt(100000.0) < 1.628);  // 1% critical value
}

TEST_CASE("sampled outcome mean tracks the occupation-weighted centers") {
  const AtomState state = clock_state(50.0, 50.0);
  QndConfig cfg;
  cfg.alpha = 1.5;
  cfg.omega = 0.02;
  const HomodyneDistribution dist = homodyne_distribution(state, cfg);
  double expected = 0.0;
  for (const auto &c : dist.components) expected += c.weight * c.mean;
  Rng rng(123);
  double sum = 0.0;
  const int draws = 40000;
  for (int i = 0; i < draws; ++i) sum += sample_homodyne(state, cfg, rng);
  // Outcome std is ~0.5 plus center spread; 4 sigma of the mean estimate.
  CHECK(std::abs(sum / draws - expected) < 4.0 * 0.6 / std::sqrt(draws));
}

TEST_CASE("conditioning is an exact Bayes update of the joint weights") {
  const AtomState prior = clock_state(30.0, 40.0);
  QndConfig cfg;
  cfg.alpha = 2.0;
  cfg.omega = 0.05;
  for (double p0 : {-1.0, -0.2, 0.1, 0.8}) {
    const AtomState post = qnd_update(prior, p0, cfg);
    // Independent evaluation: posterior(N, n) must equal
    // prior(N, n) * |<p0|probe(n)>|^2 / evidence.
    double evidence = 0.0;
    for (std::size_t k = 0; k < prior.sectors.size(); ++k) {
      const SectorState &sec = prior.sectors[k];
      for (std::int64_t n = sec.support_lo; n <= sec.support_hi; ++n) {
        evidence += prior.weights[k] * std::norm(sec.amplitude(n)) *
                    std::norm(homodyne_kernel(p0, n, cfg.alpha, cfg.omega));
      }
    }
    for (std::size_t k = 0; k < prior.sectors.size(); ++k) {
      const SectorState &prior_sec = prior.sectors[k];
      const SectorState &post_sec = post.sectors[k];
      for (std::int64_t n = prior_sec.support_lo; n <= prior_sec.support_hi;
           ++n) {
        const double expected =
            prior.weights[k] * std::norm(prior_sec.amplitude(n)) *
            std::norm(homodyne_kernel(p0, n, cfg.alpha, cfg.omega)) / evidence;
        const double got =
            post.weights[k] * std::norm(post_sec.amplitude(n));
        CHECK(got == doctest::Approx(expected).epsilon(1e-12).scale(1e-12));
      }
    }
  }
}

TEST_CASE("conditioning preserves the mode-b distribution at fixed n_a") {
  // The probe couples only to n_a, so the relative weights of different
  // totals at the same n_a must be untouched.
  const AtomState prior = gaussian_product_state(30.0, 2.0, 2.0);
  QndConfig cfg;
  cfg.alpha = 2.0;
  cfg.omega = 0.05;
  const AtomState post = qnd_update(prior, 0.3, cfg);
  REQUIRE(post.sectors.size() == prior.sectors.size());
  // Find two sectors sharing an occupied n_a.
  const std::int64_t n_ref = 15;
  std::vector<std::size_t> holders;
  for (std::size_t k = 0; k < prior.sectors.size(); ++k) {
    const auto &sec = prior.sectors[k];
    if (n_ref >= sec.support_lo && n_ref <= sec.support_hi &&
        std::norm(sec.amplitude(n_ref)) > 1e-20) {
      holders.push_back(k);
    }
  }
  REQUIRE(holders.size() >= 2);
  const auto joint = [n_ref](const AtomState &st, std::size_t k) {
    return st.weights[k] * std::norm(st.sectors[k].amplitude(n_ref));
  };
  const double prior_ratio = joint(prior, holders[0]) / joint(prior, holders[1]);
  const double post_ratio = joint(post, holders[0]) / joint(post, holders[1]);
  CHECK(post_ratio == doctest::Approx(prior_ratio).epsilon(1e-11));
}

TEST_CASE("a zero-coupling round leaves the state unchanged") {
  const AtomState prior = clock_state(40.0, 40.0);
  QndConfig cfg;
  cfg.alpha = 0.0;
  cfg.omega = 0.0;
  const AtomState post = qnd_update(prior, 0.4, cfg);
  const MomentSet before = moments(prior);
  const MomentSet after = moments(post);
  CHECK(after.na_var == doctest::Approx(before.na_var).epsilon(1e-12));
  CHECK(after.coherence == doctest::Approx(before.coherence).epsilon(1e-12));
  for (std::size_t k = 0; k < prior.sectors.size(); ++k) {
    CHECK(post.weights[k] == doctest::Approx(prior.weights[k]).epsilon(1e-12));
  }
}

TEST_CASE("impossible outcomes raise a numeric error") {
  const AtomState prior = clock_state(30.0, 30.0);
  QndConfig cfg;
  cfg.alpha = 1.0;
  cfg.omega = 0.01;
  CHECK_THROWS_AS(qnd_update(prior, 1e5, cfg), numeric_error);
}

TEST_CASE("measurement is a martingale and contracts the population noise") {
  const AtomState prior = clock_state(300.0, 300.0);
  const MomentSet m0 = moments(prior);
  QndConfig cfg;
  cfg.alpha = 110.0;
  cfg.omega = 2e-4;
  cfg.rounds = 1;

  const int records = 400;
  double mean_sum = 0.0, var_sum = 0.0;
  std::vector<double> means;
  means.reserve(records);
  for (int r = 0; r < records; ++r) {
    Rng rng = Rng::record_stream(4242, static_cast<std::uint64_t>(r));
    const AtomState post = run_protocol(prior, cfg, rng).first;
    const MomentSet m = moments(post);
    mean_sum += m.na_mean;
    var_sum += m.na_var;
    means.push_back(m.na_mean);
  }
  const double mean_avg = mean_sum / records;
  const double var_avg = var_sum / records;

  // Martingale: the record-averaged posterior mean stays at the prior mean
  // within 3 standard errors (the spread of posterior means is what the
  // measurement extracts from the prior variance).
  double spread = 0.0;
  for (double v : means) spread += (v - mean_avg) * (v - mean_avg);
  spread = std::sqrt(spread / records);
  CHECK(std::abs(mean_avg - m0.na_mean) <
        3.0 * spread / std::sqrt(static_cast<double>(records)) + 1e-9);

  // Contraction: conditioning cannot increase the average population
  // variance, and one round at this strength visibly reduces it.
  CHECK(var_avg < m0.na_var);
  // Law of total variance: posterior variance plus spread of posterior means
  // recovers the prior variance.
  CHECK(var_avg + spread * spread ==
        doctest::Approx(m0.na_var).epsilon(0.15));
}

TEST_CASE("protocol variance matches the conditioning model") {
  const double n = 1000.0, s2 = 1000.0;
  const AtomState prior = clock_state(n, s2);
  const double gamma = 0.1 / (s2 + n);  // X = 0.1
  const QndConfig cfg =
      derive_qnd_config(gamma, prior.max_total(), 12, 0.0, 5);
  const double predicted = variance_after_qnd(n, s2, cfg.gamma());

  const int records = 160;
  double var_sum = 0.0;
  for (int r = 0; r < records; ++r) {
    Rng rng = Rng::record_stream(777, static_cast<std::uint64_t>(r));
    const AtomState post = run_protocol(prior, cfg, rng).first;
    var_sum += moments(post).na_var;
  }
  CHECK(var_sum / records == doctest::Approx(predicted).epsilon(0.15));
}

TEST_CASE("strong measurement pins the population to a few values") {
  const double n = 200.0, s2 = 200.0;
  const AtomState prior = clock_state(n, s2);
  const double gamma = 2000.0 / (s2 + n);
  const QndConfig cfg =
      derive_qnd_config(gamma, prior.max_total(), 30, 0.0, 11);
  Rng rng = Rng::record_stream(31337, 0);
  const AtomState post = run_protocol(prior, cfg, rng).first;

  // The mode-a population collapses to O(1) adjacent integers (a Gaussian
  // of variance 1/(4 gamma) = 0.05 discretized on integers has variance at
  // most 0.25 + tails, whatever its center offset).
  CHECK(moments(post).na_var < 0.3);
  std::map<std::int64_t, double> marginal;
  for (std::size_t k = 0; k < post.sectors.size(); ++k) {
    const SectorState &sec = post.sectors[k];
    for (std::int64_t na = sec.support_lo; na <= sec.support_hi; ++na) {
      marginal[na] += post.weights[k] * std::norm(sec.amplitude(na));
    }
  }
  double total = 0.0, p2 = 0.0;
  for (const auto &[na, p] : marginal) total += p;
  for (const auto &[na, p] : marginal) p2 += (p / total) * (p / total);
  CHECK(1.0 / p2 < 3.0);

  // The total number narrows but stays broad: the probe reads the mode-a
  // population, and N keeps the binomial partition uncertainty on top of it.
  CHECK(participation_ratio(prior) > 10.0);
  CHECK(participation_ratio(post) > 3.0);
  CHECK(participation_ratio(post) < participation_ratio(prior));
}

TEST_CASE("tuned protocols restore the coherence envelope") {
  const double n = 400.0, s2 = 400.0;
  const AtomState prior = clock_state(n, s2);
  const double gamma = 1.0 / (s2 + n);
  const QndConfig cfg = derive_qnd_config(gamma, prior.max_total(), 20, 0.0, 3);
  // The accumulated probe phase of the derived configuration is an even
  // multiple of pi.
  const double accumulated =
      static_cast<double>(cfg.rounds) * cfg.alpha * cfg.alpha * cfg.omega;
  CHECK(std::abs(std::remainder(accumulated / kPi, 2.0)) < 1e-9);
  CHECK(cfg.gamma() == doctest::Approx(gamma).epsilon(1e-12));
  CHECK(coherence_after_qnd(n, cfg.alpha, cfg.omega, cfg.rounds) ==
        doctest::Approx(n).epsilon(1e-9));

  Rng rng = Rng::record_stream(2024, 0);
  const AtomState post = run_protocol(prior, cfg, rng).first;
  const MomentSet m = moments(post);
  CHECK(m.coherence / n > 0.98);
}

TEST_CASE("untuned accumulated probe phase rotates the coherence") {
  const double n = 100.0, s2 = 100.0;
  const AtomState prior = clock_state(n, s2);
  const auto n_max = static_cast<double>(prior.max_total());

  // Quarter turn: an accumulated probe phase of pi/2 erases the coherence.
  QndConfig quarter;
  quarter.rounds = 10;
  quarter.omega = 0.08 / n_max;  // inside the linear-response budget
  quarter.alpha =
      std::sqrt((kPi / 2.0) / (quarter.rounds * quarter.omega));
  quarter.tuning = PhaseTuning::none;
  Rng rng_q = Rng::record_stream(99, 7);
  const AtomState post_q = run_protocol(prior, quarter, rng_q).first;
  CHECK(std::abs(moments(post_q).coherence) < 0.08 * n);

  // Half turn: an accumulated probe phase of pi flips the coherence sign.
  QndConfig half = quarter;
  half.alpha = std::sqrt(kPi / (half.rounds * half.omega));
  Rng rng_h = Rng::record_stream(99, 8);
  const AtomState post_h = run_protocol(prior, half, rng_h).first;
  CHECK(moments(post_h).coherence / n == doctest::Approx(-1.0).epsilon(0.05));
  CHECK(coherence_after_qnd(n, half.alpha, half.omega, half.rounds) ==
        doctest::Approx(-n).epsilon(1e-9));
}

TEST_CASE("protocol reruns are bit-identical and seed sensitive") {
  const AtomState prior = clock_state(200.0, 200.0);
  const double gamma = 1.0 / 400.0;
  const QndConfig cfg = derive_qnd_config(gamma, prior.max_total(), 10, 0.0, 1);

  Rng rng_a = Rng::record_stream(5150, 3);
  const auto [post_a, rec_a] = run_protocol(prior, cfg, rng_a);
  Rng rng_b = Rng::record_stream(5150, 3);
  const auto [post_b, rec_b] = run_protocol(prior, cfg, rng_b);
  Rng rng_c = Rng::record_stream(5150, 4);
  const auto [post_c, rec_c] = run_protocol(prior, cfg, rng_c);

  REQUIRE(rec_a.outcomes.size() == rec_b.outcomes.size());
  for (std::size_t i = 0; i < rec_a.outcomes.size(); ++i) {
    CHECK(rec_a.outcomes[i] == rec_b.outcomes[i]);
  }
  CHECK(rec_a.posterior_state_digest == rec_b.posterior_state_digest);
  CHECK(state_digest(post_a) == state_digest(post_b));
  CHECK(rec_a.posterior_state_digest != rec_c.posterior_state_digest);
  CHECK(rec_a.gamma == doctest::Approx(gamma).epsilon(1e-12));
}

TEST_CASE("variance prediction: explicit values and limits") {
  CHECK(variance_after_qnd(1e5, 1e5, 0.0) == doctest::Approx(5e4).epsilon(1e-15));
  // 0.25 * 2e5 / (1 + pi * 1e-4 * 2e5) evaluated independently.
  const double expected = 50000.0 / (1.0 + kPi * 1e-4 * 2e5);
  CHECK(variance_after_qnd(1e5, 1e5, kPi * 1e-4) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(783.307).epsilon(1e-5));
  // Strong-measurement limit: 1 / (4 gamma).
  CHECK(variance_after_qnd(1e4, 1e4, 1e6) ==
        doctest::Approx(0.25e-6).epsilon(1e-4));
  CHECK_THROWS_AS(variance_after_qnd(10.0, 10.0, -1.0), domain_error);
}

TEST_CASE("analytic squeezed moments reduce to the clock state at zero "
          "strength") {
  const double n = 400.0, s2 = 400.0;
  const MomentSet model = analytic_squeezed_moments(n, s2, 0.0);
  const MomentSet exact = moments(clock_state(n, s2));
  CHECK(model.na_var == doctest::Approx(exact.na_var).epsilon(1e-3));
  CHECK(model.jz2 == doctest::Approx(exact.jz2).epsilon(1e-3));
  CHECK(model.jx == doctest::Approx(exact.jx).epsilon(2e-3));
  CHECK(model.jx2 == doctest::Approx(exact.jx2).epsilon(5e-3));
  CHECK(model.n_jz_mean ==
        doctest::Approx(exact.n_jz_mean).epsilon(1e-3).scale(1.0));
  CHECK(model.n2_mean == doctest::Approx(exact.n2_mean).epsilon(1e-3));
}

TEST_CASE("analytic squeezed moments reproduce the small-angle formula") {
  const double n = 1e4, s2 = 1e4;
  for (double x : {0.0, 0.1, 1.0, 10.0, 100.0}) {
    const double gamma = x / (s2 + n);
    const MomentSet model = analytic_squeezed_moments(n, s2, gamma);
    const double from_model = small_angle_delta_theta(model, 1);
    const double formula = squeezed_small_angle_sensitivity(n, s2, gamma, 1);
    CHECK(from_model == doctest::Approx(formula).epsilon(1e-9));
  }
}

TEST_CASE("analytic squeezed moments flag their own validity boundary") {
  // For gamma > 0 the conditioning model's readout variance turns negative
  // in a band of pulse areas just below the half pulse (its per-sector
  // coherence carries no spread), so those points must come back flagged as
  // divergent instead of reporting zero noise.  At zero strength the model
  // is a faithful clock-state surrogate and stays finite everywhere.
  const double n = 1e4, s2 = 1e4;
  const MomentSet squeezed = analytic_squeezed_moments(n, s2, 1.0 / (s2 + n));
  CHECK(delta_theta(squeezed, 1.2, 1).divergent);
  CHECK_FALSE(delta_theta(squeezed, 0.05, 1).divergent);

  const MomentSet plain = analytic_squeezed_moments(n, s2, 0.0);
  for (int i = 0; i <= 24; ++i) {
    const SensitivityPoint pt = delta_theta(plain, 0.075 * i, 1);
    CHECK_FALSE(pt.divergent);
    CHECK(std::isfinite(pt.delta_theta));
  }
}

TEST_CASE("derived configurations scale with the strength request") {
  const QndConfig weak = derive_qnd_config(1e-6, 10000, 60, 0.0, 0);
  CHECK(weak.gamma() == doctest::Approx(1e-6).epsilon(1e-12));
  CHECK(weak.linear_regime(10000));
  const QndConfig strong = derive_qnd_config(0.5, 10000, 60, 0.0, 0);
  CHECK(strong.gamma() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(strong.linear_regime(10000));
  CHECK(derive_qnd_config(0.0, 100, 8, 0.0, 0).gamma() == 0.0);
  // Explicit probe amplitude: rounds are derived instead.
  const QndConfig fixed = derive_qnd_config(1e-3, 1000, 60, 10.0, 0);
  CHECK(fixed.alpha == 10.0);
  CHECK(fixed.gamma() == doctest::Approx(1e-3).epsilon(0.05));
}
