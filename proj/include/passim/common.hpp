// SPDX-License-Identifier: Apache-2.0
//
// passim: simulation and position optimization for pinching-antenna systems
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace passim {

using cx = std::complex<double>;

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// ---------------------------------------------------------------------------
// Error taxonomy

struct invalid_config_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct constraint_violation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct degenerate_channel_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct scheme_infeasible_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct singular_update_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Link direction and linear baseband schemes

enum class Link { downlink, uplink };

// matched = MRT on the downlink, MRC on the uplink
enum class Scheme { matched, zero_forcing, mmse };

std::string link_label(Link link);
std::string scheme_label(Scheme scheme, Link link);
Link parse_link(const std::string& text);
Scheme parse_scheme(const std::string& text);

// ---------------------------------------------------------------------------
// Power units. Conversion happens at the configuration boundary only; all
// internal computation is in linear watts.

inline double dbm_to_watts(double dbm) {
  return std::pow(10.0, (dbm - 30.0) / 10.0);
}

inline double watts_to_dbm(double watts) {
  return 10.0 * std::log10(watts) + 30.0;
}

// Unit-magnitude phasor exp(j * angle). The argument is reduced mod 2*pi
// before evaluation so that kilo-radian propagation phases keep full
// precision.
inline cx unit_phasor(double angle) {
  const double r = std::remainder(angle, kTwoPi);
  return {std::cos(r), std::sin(r)};
}

// ---------------------------------------------------------------------------
// Deterministic uniform source. Draws depend only on the seed (53-bit
// mantissa construction, no library distribution objects), so a fixed seed
// reproduces the same sequence on every platform.

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace passim
