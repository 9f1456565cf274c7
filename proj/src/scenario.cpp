// SPDX-License-Identifier: Apache-2.0
//
// passim: simulation and position optimization for pinching-antenna systems
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "passim/scenario.hpp"

#include <sstream>

namespace passim {

std::string link_label(Link link) {
  return link == Link::downlink ? "dl" : "ul";
}

std::string scheme_label(Scheme scheme, Link link) {
  switch (scheme) {
    case Scheme::matched:
      return link == Link::downlink ? "mrt" : "mrc";
    case Scheme::zero_forcing:
      return "zf";
    case Scheme::mmse:
      return "mmse";
  }
  return "?";
}

Link parse_link(const std::string& text) {
  if (text == "dl" || text == "downlink") return Link::downlink;
  if (text == "ul" || text == "uplink") return Link::uplink;
  throw invalid_config_error("direction: expected dl or ul, got '" + text +
                             "'");
}

Scheme parse_scheme(const std::string& text) {
  if (text == "mrt" || text == "mrc" || text == "matched")
    return Scheme::matched;
  if (text == "zf") return Scheme::zero_forcing;
  if (text == "mmse") return Scheme::mmse;
  throw invalid_config_error("schemes: unknown scheme '" + text + "'");
}

// ---------------------------------------------------------------------------

ScenarioConfig resolve_config(const ConfigOverrides& ov) {
  ScenarioConfig cfg;
  if (ov.region_x) cfg.region_x = *ov.region_x;
  if (ov.region_y) cfg.region_y = *ov.region_y;
  if (ov.num_guides) cfg.num_guides = *ov.num_guides;
  if (ov.pas_per_guide) cfg.pas_per_guide = *ov.pas_per_guide;
  if (ov.num_users) cfg.num_users = *ov.num_users;
  if (ov.height) cfg.height = *ov.height;
  if (ov.freq) cfg.freq = *ov.freq;
  if (ov.n_eff) cfg.n_eff = *ov.n_eff;
  if (ov.kappa) cfg.kappa = *ov.kappa;
  cfg.noise_w = dbm_to_watts(ov.noise_dbm.value_or(-90.0));
  cfg.power_dl_w = dbm_to_watts(ov.power_dl_dbm.value_or(0.0));
  cfg.power_ul_w = dbm_to_watts(ov.power_ul_dbm.value_or(0.0));
  if (ov.search_points) cfg.search_points = *ov.search_points;
  if (ov.seed) cfg.seed = *ov.seed;
  if (ov.max_sweeps) cfg.max_sweeps = *ov.max_sweeps;
  if (ov.rel_tol) cfg.rel_tol = *ov.rel_tol;

  // Dependent defaults.
  cfg.guide_spacing =
      ov.guide_spacing.value_or(cfg.num_guides > 1
                                    ? cfg.region_y /
                                          static_cast<double>(cfg.num_guides - 1)
                                    : 0.0);
  cfg.min_spacing =
      ov.min_spacing.value_or(0.5 * kSpeedOfLight / cfg.freq);
  cfg.usable_len = ov.usable_len.value_or(cfg.region_x);

  validate_config(cfg);
  return cfg;
}

namespace {

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
  throw invalid_config_error(field + ": " + why);
}

}  // namespace

void validate_config(const ScenarioConfig& cfg) {
  if (!(cfg.region_x > 0)) bad_field("D_x", "must be positive");
  if (!(cfg.region_y > 0)) bad_field("D_y", "must be positive");
  if (cfg.num_guides < 1) bad_field("M", "must be at least 1");
  if (cfg.pas_per_guide < 1) bad_field("N", "must be at least 1");
  if (cfg.num_users < 1) bad_field("K", "must be at least 1");
  if (!(cfg.height > 0)) bad_field("a", "must be positive");
  if (!(cfg.freq > 0)) bad_field("f", "must be positive");
  if (!(cfg.n_eff >= 1.0)) bad_field("n_eff", "must be at least 1");
  if (!(cfg.kappa >= 0.0)) bad_field("kappa", "must be non-negative");
  if (!(cfg.noise_w > 0)) bad_field("sigma2", "must be positive");
  if (!(cfg.power_dl_w > 0)) bad_field("P_d", "must be positive");
  if (!(cfg.power_ul_w > 0)) bad_field("P_u", "must be positive");
  if (!(cfg.min_spacing > 0)) bad_field("Delta", "must be positive");
  if (!(cfg.usable_len > 0)) bad_field("L_m", "must be positive");
  if (cfg.search_points < 2) bad_field("N_s", "must be at least 2");
  if (!(cfg.rel_tol >= 0)) bad_field("rel_tol", "must be non-negative");
  if (cfg.num_guides > 1 && !(cfg.guide_spacing > 0))
    bad_field("d", "must be positive for M > 1");
  const double span =
      cfg.min_spacing * static_cast<double>(cfg.pas_per_guide - 1);
  if (span > cfg.usable_len) {
    std::ostringstream msg;
    msg << "Delta: spacing infeasible, Delta*(N-1) = " << span
        << " m exceeds L_m = " << cfg.usable_len << " m";
    throw invalid_config_error(msg.str());
  }
}

// ---------------------------------------------------------------------------

Wavenumbers derive_wavenumbers(const ScenarioConfig& cfg) {
  if (!(cfg.freq > 0)) throw invalid_config_error("f: must be positive");
  if (!(cfg.n_eff >= 1.0))
    throw invalid_config_error("n_eff: must be at least 1");
  Wavenumbers wn;
  wn.wavelength = kSpeedOfLight / cfg.freq;
  wn.wavenumber = kTwoPi / wn.wavelength;
  wn.guide_wavelength = wn.wavelength / cfg.n_eff;
  wn.guide_wavenumber = kTwoPi / wn.guide_wavelength;
  return wn;
}

Scenario make_scenario(const ScenarioConfig& cfg) {
  validate_config(cfg);
  Scenario sc;
  sc.cfg = cfg;
  sc.wn = derive_wavenumbers(cfg);
  sc.guide_y.set_size(cfg.num_guides);
  if (cfg.num_guides == 1) {
    sc.guide_y(0) = 0.0;
  } else {
    for (arma::uword m = 0; m < cfg.num_guides; ++m)
      sc.guide_y(m) = static_cast<double>(m) * cfg.guide_spacing -
                      0.5 * cfg.region_y;
  }
  sc.feed_x = arma::vec(cfg.num_guides, arma::fill::value(-0.5 * cfg.region_x));
  return sc;
}

// ---------------------------------------------------------------------------

UserSet draw_users(const ScenarioConfig& cfg, Rng& rng) {
  UserSet users;
  users.pos.zeros(3, cfg.num_users);
  for (arma::uword k = 0; k < cfg.num_users; ++k) {
    users.pos(0, k) = rng.uniform(-0.5 * cfg.region_x, 0.5 * cfg.region_x);
    users.pos(1, k) = rng.uniform(-0.5 * cfg.region_y, 0.5 * cfg.region_y);
  }
  return users;
}

// ---------------------------------------------------------------------------

bool layout_feasible(const PinchingLayout& layout, double min_spacing,
                     double usable_len, double tol) {
  for (arma::uword m = 0; m < layout.guides(); ++m) {
    const double feed = layout.feed_x(m);
    for (arma::uword n = 0; n < layout.pas_per_guide(); ++n) {
      const double off = layout.x(m, n) - feed;
      if (off < -tol || off > usable_len + tol) return false;
      for (arma::uword n2 = n + 1; n2 < layout.pas_per_guide(); ++n2) {
        if (std::abs(layout.x(m, n) - layout.x(m, n2)) < min_spacing - tol)
          return false;
      }
    }
  }
  return true;
}

void require_feasible(const PinchingLayout& layout, double min_spacing,
                      double usable_len) {
  if (!layout_feasible(layout, min_spacing, usable_len))
    throw constraint_violation_error(
        "layout violates the spacing or span constraints");
}

}  // namespace passim
