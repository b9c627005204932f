// Copyright 2026 The clocksim authors
// SPDX-License-Identifier: MIT

#include "clocksim/fisher.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "clocksim/moments.hpp"
#include "clocksim/rotation.hpp"

namespace clocksim {

namespace {

// Occupied basis state of a number-diagonal mixture.
struct DiagonalEntry {
  std::int64_t total_n;
  std::int64_t n_a;
  double probability;
};

std::vector<DiagonalEntry> diagonal_entries(const AtomState &state) {
  std::vector<DiagonalEntry> entries;
  entries.reserve(state.sectors.size());
  for (std::size_t k = 0; k < state.sectors.size(); ++k) {
    const SectorState &sec = state.sectors[k];
    std::int64_t occupied = -1;
    for (std::int64_t n = sec.support_lo; n <= sec.support_hi; ++n) {
      if (std::norm(sec.amplitude(n)) > 1e-24) {
        if (occupied >= 0) {
          throw domain_error(
              "state is not number-diagonal (a sector superposes several "
              "occupations)");
        }
        occupied = n;
      }
    }
    if (occupied < 0) continue;
    entries.push_back({sec.total_n, occupied, state.weights[k]});
  }
  return entries;
}

}  // namespace

double qfi_diagonal(const AtomState &state) {
  if (state.sectors.empty()) throw domain_error("state has no sectors");
  const std::vector<DiagonalEntry> entries = diagonal_entries(state);

  // Probability lookup for occupied partners; everything else has p = 0.
  std::map<std::pair<std::int64_t, std::int64_t>, double> prob;
  for (const auto &e : entries) {
    prob[{e.total_n, e.n_a}] += e.probability;
  }

  // F_Q = 2 sum over ordered pairs (k, l) of (p_k - p_l)^2 / (p_k + p_l)
  // |<k|Jy|l>|^2.  Jy only couples |n_a, n_b> with |n_a + 1, n_b - 1> (and
  // the mirror), with |<n_a + 1|Jy|n_a>|^2 = (n_a + 1)(N - n_a) / 4.  Each
  // unordered pair contributes its two (identical) ordered terms.  A partner
  // that appears in the lookup is iterated from its own side, so each visit
  // adds one ordered term; a partner absent from the lookup (probability
  // zero) is never iterated, so the visit from the occupied side must carry
  // both ordered terms.  Pure-state check: a lone occupation then collects
  // 4 (elem_up^2 + elem_down^2) = 4 Var Jy, as it must.
  double fq = 0.0;
  for (const auto &[key, p_k] : prob) {
    const auto [N, n_a] = key;
    const double Nd = static_cast<double>(N);
    const double nd = static_cast<double>(n_a);
    if (n_a + 1 <= N) {
      const auto it = prob.find({N, n_a + 1});
      const bool listed = it != prob.end();
      const double p_l = listed ? it->second : 0.0;
      const double elem2 = 0.25 * (nd + 1.0) * (Nd - nd);
      if (p_k + p_l > 0.0) {
        const double diff = p_k - p_l;
        fq += (listed ? 2.0 : 4.0) * diff * diff / (p_k + p_l) * elem2;
      }
    }
    if (n_a - 1 >= 0) {
      const auto it = prob.find({N, n_a - 1});
      const bool listed = it != prob.end();
      const double p_l = listed ? it->second : 0.0;
      const double elem2 = 0.25 * nd * (Nd - nd + 1.0);
      if (p_k + p_l > 0.0) {
        const double diff = p_k - p_l;
        fq += (listed ? 2.0 : 4.0) * diff * diff / (p_k + p_l) * elem2;
      }
    }
  }
  return fq;
}

double fock_mixture_cr_sensitivity(double n_a, double nb_mean, int reps) {
  if (reps < 1) throw domain_error("repetition count must be >= 1");
  if (!(n_a >= 0.0) || !(nb_mean >= 0.0)) {
    throw domain_error("occupations must be >= 0");
  }
  const double fq = 2.0 * n_a * nb_mean + n_a + nb_mean;
  if (!(fq > 0.0)) throw domain_error("Fisher information vanishes");
  return 1.0 / std::sqrt(static_cast<double>(reps) * fq);
}

bool entanglement_witness(const AtomState &state, double quantum_fisher) {
  const MomentSet m = moments(state);
  return quantum_fisher > m.n_mean;
}

double classical_fisher_single_port(const AtomState &state, double theta,
                                    double epsilon, std::int64_t n_rot_max,
                                    double prob_floor) {
  if (state.sectors.empty()) throw domain_error("state has no sectors");
  if (!(epsilon > 0.0)) throw domain_error("epsilon must be > 0");
  const std::int64_t n_max = state.max_total();
  if (n_max > n_rot_max) {
    throw domain_error(
        "state exceeds the exact-rotation size limit for the classical "
        "Fisher information");
  }

  // Mode-a population distribution marginalized over the sector mixture, at
  // theta and theta +/- epsilon.
  const std::size_t bins = static_cast<std::size_t>(n_max) + 1;
  std::vector<double> p_mid(bins, 0.0), p_hi(bins, 0.0), p_lo(bins, 0.0);
  for (std::size_t k = 0; k < state.sectors.size(); ++k) {
    const SectorState &sec = state.sectors[k];
    const double w = state.weights[k];
    if (w <= 0.0) continue;
    const SectorRotator rot(sec.total_n);
    const auto accumulate = [&](double th, std::vector<double> &target) {
      const auto amps = rot.rotate(sec, th);
      for (std::size_t n = 0; n < amps.size(); ++n) {
        target[n] += w * std::norm(amps[n]);
      }
    };
    accumulate(theta, p_mid);
    accumulate(theta + epsilon, p_hi);
    accumulate(theta - epsilon, p_lo);
  }

  double fc = 0.0;
  for (std::size_t n = 0; n < bins; ++n) {
    if (p_mid[n] < prob_floor) continue;
    const double dp = (p_hi[n] - p_lo[n]) / (2.0 * epsilon);
    fc += dp * dp / p_mid[n];
  }
  return fc;
}

FisherReport fisher_report(const AtomState &state, int reps,
                           std::optional<double> theta_for_cfi) {
  if (reps < 1) throw domain_error("repetition count must be >= 1");
  FisherReport report;
  report.quantum_fisher = qfi_diagonal(state);
  report.cr_delta_theta =
      report.quantum_fisher > 0.0
          ? 1.0 / std::sqrt(static_cast<double>(reps) * report.quantum_fisher)
          : std::numeric_limits<double>::infinity();
  report.entangled = entanglement_witness(state, report.quantum_fisher);
  if (theta_for_cfi.has_value()) {
    report.classical_fisher =
        classical_fisher_single_port(state, *theta_for_cfi);
  }
  return report;
}

}  // namespace clocksim
