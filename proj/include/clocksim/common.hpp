// Copyright 2026 The clocksim authors
// SPDX-License-Identifier: MIT

#ifndef CLOCKSIM_COMMON_HPP
#define CLOCKSIM_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace clocksim {

/// Raised when inputs violate a documented precondition (bad configuration,
/// out-of-range parameter, malformed probability vector, ...).
class domain_error : public std::runtime_error {
 public:
  explicit domain_error(const std::string &what) : std::runtime_error(what) {}
};

/// Raised when a computation cannot produce a meaningful result at runtime
/// (total likelihood underflow, no finite value in a search window, ...).
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string &what) : std::runtime_error(what) {}
};

constexpr double kPi = 3.14159265358979323846;

constexpr const char *kVersion = "0.1.0";

}  // namespace clocksim

#endif  // CLOCKSIM_COMMON_HPP
