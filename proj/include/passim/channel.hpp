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

#include "passim/common.hpp"
#include "passim/scenario.hpp"

namespace passim {

// ---------------------------------------------------------------------------
// Elementary channel pieces

// Downlink in-guide power factor: the feed signal loses kappa dB/m up to the
// PA and is split across the guide's N antennas.
double downlink_attenuation(double pa_x, double feed_x, double kappa,
                            arma::uword pas_per_guide);

// Uplink in-guide power factor: same propagation loss, no 1/N split (each PA
// couples its received signal into the guide independently).
double uplink_attenuation(double pa_x, double feed_x, double kappa);

inline double link_attenuation(double pa_x, double feed_x, double kappa,
                               arma::uword pas_per_guide, Link link) {
  return link == Link::downlink
             ? downlink_attenuation(pa_x, feed_x, kappa, pas_per_guide)
             : uplink_attenuation(pa_x, feed_x, kappa);
}

// Free-space line-of-sight coefficient lambda/(4 pi d) * exp(-j k0 d).
// Throws degenerate_channel_error on coincident points.
cx los_coefficient(const arma::vec3& user, const arma::vec3& pa,
                   const Wavenumbers& wn);

// Per-PA contribution to an effective channel entry: the LoS coefficient
// scaled by sqrt(att) with the in-guide phase k_g (p - feed) appended.
cx pa_coefficient(const arma::vec3& user, const arma::vec3& pa, double feed_x,
                  const Wavenumbers& wn, double attenuation);

// Convenience overload selecting the attenuation from the link direction.
cx pa_coefficient(const arma::vec3& user, const arma::vec3& pa, double feed_x,
                  const Wavenumbers& wn, double kappa,
                  arma::uword pas_per_guide, Link link);

// ---------------------------------------------------------------------------
// Assembled effective channel

struct EffectiveChannel {
  Link direction = Link::downlink;
  // K x M; entry (k, m) sums the per-PA coefficients of guide m. Column m is
  // the per-guide gain vector the element-wise objectives scan.
  arma::cx_mat gains;
  // K x M on the downlink (equal to `gains`), M x K on the uplink.
  arma::cx_mat H;
  // Per-guide squared in-guide gain norm (sum of attenuations).
  arma::vec guide_norm2;
};

EffectiveChannel effective_channel(const UserSet& users,
                                   const PinchingLayout& layout,
                                   const Scenario& sc, Link link);

// Uplink noise covariance diagonal sigma2 * ||g(p_m)||^2.
arma::vec noise_cov_diag(const EffectiveChannel& ch, double noise_w);

// ---------------------------------------------------------------------------
// Cached per-guide geometry for candidate scans: evaluates the K-vector of
// per-PA coefficients at arbitrary positions on one waveguide without
// rebuilding the layout.

class GuideEvaluator {
 public:
  GuideEvaluator(const UserSet& users, const Scenario& sc, arma::uword m,
                 Link link);

  // Attenuation (eta or zeta per the link) at position p.
  double attenuation(double p) const;

  // Fills out (length K) with the per-user PA coefficients at position p.
  void coefficients(double p, arma::cx_vec& out) const;

 private:
  arma::vec user_x_;   // K
  arma::vec planar2_;  // K: (y_m - y_k)^2 + a^2
  double feed_ = 0;
  double k0_ = 0;
  double kg_ = 0;
  double amp_ = 0;  // lambda / (4 pi)
  double kappa_ = 0;
  double split_ = 1.0;  // 1/N on the downlink, 1 on the uplink
};

}  // namespace passim
