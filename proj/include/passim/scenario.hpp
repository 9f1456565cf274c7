// SPDX-License-Identifier: Apache-2.0
//
// passim: simulation and position optimization for pinching-antenna systems
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <armadillo>
#include <optional>

#include "passim/common.hpp"

namespace passim {

// ---------------------------------------------------------------------------
// Fully resolved scenario parameters. All quantities in SI units (meters,
// hertz, watts). The text config format uses the keys listed per field, with
// powers given in dBm.

struct ScenarioConfig {
  double region_x = 50.0;      // D_x: service region extent along x (m)
  double region_y = 6.0;       // D_y: service region extent along y (m)
  arma::uword num_guides = 5;  // M: waveguides / RF chains
  arma::uword pas_per_guide = 6;  // N: pinching antennas per waveguide
  arma::uword num_users = 4;      // K
  double height = 5.0;            // a: waveguide deployment height (m)
  double guide_spacing = 1.5;     // d: waveguide pitch along y (m)
  double freq = 28e9;             // f: carrier frequency (Hz)
  double n_eff = 1.4;             // effective refractive index of the guide
  double kappa = 0.1;             // in-guide attenuation (dB/m)
  double noise_w = 1e-12;         // sigma2: noise power (W)
  double power_dl_w = 1e-3;       // P_d: downlink power budget (W)
  double power_ul_w = 1e-3;       // P_u: per-user uplink power (W)
  double min_spacing = 0.0;       // Delta: minimum PA spacing (m)
  double usable_len = 50.0;       // L_m: usable waveguide length (m)
  arma::uword search_points = 10000;  // N_s: 1-D search sample count
  std::uint64_t seed = 1;
  arma::uword max_sweeps = 50;
  double rel_tol = 1e-3;
};

// Optional overrides; unset fields fall back to defaults derived from the
// resolved values (guide_spacing = D_y/(M-1), min_spacing = lambda/2,
// usable_len = D_x). Powers are taken in dBm here.
struct ConfigOverrides {
  std::optional<double> region_x, region_y, height, guide_spacing, freq, n_eff,
      kappa;
  std::optional<double> noise_dbm, power_dl_dbm, power_ul_dbm;
  std::optional<double> min_spacing, usable_len, rel_tol;
  std::optional<arma::uword> num_guides, pas_per_guide, num_users,
      search_points, max_sweeps;
  std::optional<std::uint64_t> seed;
};

ScenarioConfig resolve_config(const ConfigOverrides& overrides = {});

// Throws invalid_config_error naming the offending field.
void validate_config(const ScenarioConfig& cfg);

// ---------------------------------------------------------------------------

struct Wavenumbers {
  double wavelength = 0;        // lambda = c / f
  double wavenumber = 0;        // k0 = 2 pi / lambda
  double guide_wavelength = 0;  // lambda_g = lambda / n_eff
  double guide_wavenumber = 0;  // k_g = 2 pi / lambda_g
};

Wavenumbers derive_wavenumbers(const ScenarioConfig& cfg);

// Validated config plus derived geometry. Waveguides run along x at height
// `height`; they are centred on the region along y, and every guide is fed
// from the left edge of the region.
struct Scenario {
  ScenarioConfig cfg;
  Wavenumbers wn;
  arma::vec guide_y;  // M waveguide y coordinates
  arma::vec feed_x;   // M feed positions (all -D_x/2)
};

Scenario make_scenario(const ScenarioConfig& cfg);

// ---------------------------------------------------------------------------

struct UserSet {
  arma::mat pos;  // 3 x K; z row is zero (users on the ground plane)

  arma::uword count() const { return pos.n_cols; }
};

// Users sampled i.i.d. uniform over the D_x x D_y rectangle.
UserSet draw_users(const ScenarioConfig& cfg, Rng& rng);

// ---------------------------------------------------------------------------

struct PinchingLayout {
  arma::mat x;       // M x N PA positions along the guides
  arma::vec feed_x;  // M
  arma::vec guide_y;  // M
  double height = 0;

  arma::uword guides() const { return x.n_rows; }
  arma::uword pas_per_guide() const { return x.n_cols; }
};

// Span and pairwise-spacing feasibility (relaxed, permutation-invariant
// spacing form). `tol` absorbs representation error at exactly-Delta layouts.
bool layout_feasible(const PinchingLayout& layout, double min_spacing,
                     double usable_len, double tol = 1e-9);

void require_feasible(const PinchingLayout& layout, double min_spacing,
                      double usable_len);

}  // namespace passim
