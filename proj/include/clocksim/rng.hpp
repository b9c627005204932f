// Copyright 2026 The clocksim authors
// SPDX-License-Identifier: MIT

#ifndef CLOCKSIM_RNG_HPP
#define CLOCKSIM_RNG_HPP

#include <cmath>
#include <cstdint>

namespace clocksim {

/// Deterministic pseudo-random generator (xoshiro256++) with a splitmix64
/// seeding stage and an explicit Box-Muller normal transform.
///
/// All randomized routines in this library draw exclusively through this
/// class so that results are bit-identical across runs and platforms for a
/// fixed seed.  The standard-library distributions are deliberately avoided:
/// their output sequences are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) { reseed(seed); }

  void reseed(std::uint64_t seed) {
    // splitmix64 expansion of the seed into the 256-bit state.  splitmix64
    // never maps distinct inputs to identical four-word outputs, so the
    // all-zero xoshiro state cannot occur.
    std::uint64_t x = seed;
    for (auto &word : state_) {
      x += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      word = z ^ (z >> 31);
    }
    has_spare_ = false;
    spare_ = 0.0;
  }

  /// Independent stream for a numbered repetition (measurement record,
  /// scenario row, ...).  Streams with distinct indices are decorrelated by
  /// the splitmix64 seeding stage.
  static Rng record_stream(std::uint64_t seed, std::uint64_t record_index) {
    return Rng(seed ^ (0x5851f42d4c957f2dULL * (record_index + 1)));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal deviate via Box-Muller (explicit so the bit pattern of
  /// the stream is stable; one spare value is cached between calls).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the logarithm is finite.
    const double u1 =
        (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
  }

 private:
  static std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }

  std::uint64_t state_[4] = {1, 2, 3, 4};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace clocksim

#endif  // CLOCKSIM_RNG_HPP
