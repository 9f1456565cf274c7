// SPDX-License-Identifier: Apache-2.0
//
// passim: simulation and position optimization for pinching-antenna systems
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "passim/channel.hpp"

namespace passim {

double downlink_attenuation(double pa_x, double feed_x, double kappa,
                            arma::uword pas_per_guide) {
  return uplink_attenuation(pa_x, feed_x, kappa) /
         static_cast<double>(pas_per_guide);
}

double uplink_attenuation(double pa_x, double feed_x, double kappa) {
  return std::pow(10.0, -kappa * std::abs(pa_x - feed_x) / 10.0);
}

cx los_coefficient(const arma::vec3& user, const arma::vec3& pa,
                   const Wavenumbers& wn) {
  const double d = arma::norm(pa - user);
  if (!(d > 0))
    throw degenerate_channel_error("coincident user and PA positions");
  const double amp = wn.wavelength / (4.0 * arma::datum::pi * d);
  return amp * unit_phasor(-wn.wavenumber * d);
}

cx pa_coefficient(const arma::vec3& user, const arma::vec3& pa, double feed_x,
                  const Wavenumbers& wn, double attenuation) {
  const double d = arma::norm(pa - user);
  if (!(d > 0))
    throw degenerate_channel_error("coincident user and PA positions");
  const double amp =
      wn.wavelength * std::sqrt(attenuation) / (4.0 * arma::datum::pi * d);
  // The free-space and in-guide phases are reduced separately; summing them
  // first would round at the scale of the combined kilo-radian argument.
  return amp * unit_phasor(-wn.wavenumber * d) *
         unit_phasor(-wn.guide_wavenumber * (pa(0) - feed_x));
}

cx pa_coefficient(const arma::vec3& user, const arma::vec3& pa, double feed_x,
                  const Wavenumbers& wn, double kappa,
                  arma::uword pas_per_guide, Link link) {
  return pa_coefficient(
      user, pa, feed_x, wn,
      link_attenuation(pa(0), feed_x, kappa, pas_per_guide, link));
}

// ---------------------------------------------------------------------------

EffectiveChannel effective_channel(const UserSet& users,
                                   const PinchingLayout& layout,
                                   const Scenario& sc, Link link) {
  require_feasible(layout, sc.cfg.min_spacing, sc.cfg.usable_len);

  const arma::uword num_users = users.count();
  const arma::uword guides = layout.guides();
  const arma::uword pas = layout.pas_per_guide();

  EffectiveChannel ch;
  ch.direction = link;
  ch.gains.zeros(num_users, guides);
  ch.guide_norm2.zeros(guides);

  for (arma::uword m = 0; m < guides; ++m) {
    const double feed = layout.feed_x(m);
    for (arma::uword n = 0; n < pas; ++n) {
      const arma::vec3 pa{layout.x(m, n), layout.guide_y(m), layout.height};
      const double att =
          link_attenuation(pa(0), feed, sc.cfg.kappa, pas, link);
      ch.guide_norm2(m) += att;
      for (arma::uword k = 0; k < num_users; ++k) {
        ch.gains(k, m) +=
            pa_coefficient(users.pos.col(k), pa, feed, sc.wn, att);
      }
    }
  }

  ch.H = link == Link::downlink ? ch.gains : arma::cx_mat(ch.gains.st());
  return ch;
}

arma::vec noise_cov_diag(const EffectiveChannel& ch, double noise_w) {
  return noise_w * ch.guide_norm2;
}

// ---------------------------------------------------------------------------

GuideEvaluator::GuideEvaluator(const UserSet& users, const Scenario& sc,
                               arma::uword m, Link link) {
  const arma::uword num_users = users.count();
  user_x_.set_size(num_users);
  planar2_.set_size(num_users);
  for (arma::uword k = 0; k < num_users; ++k) {
    user_x_(k) = users.pos(0, k);
    const double dy = sc.guide_y(m) - users.pos(1, k);
    const double dz = sc.cfg.height - users.pos(2, k);
    planar2_(k) = dy * dy + dz * dz;
  }
  feed_ = sc.feed_x(m);
  k0_ = sc.wn.wavenumber;
  kg_ = sc.wn.guide_wavenumber;
  amp_ = sc.wn.wavelength / (4.0 * arma::datum::pi);
  kappa_ = sc.cfg.kappa;
  split_ = link == Link::downlink
               ? 1.0 / static_cast<double>(sc.cfg.pas_per_guide)
               : 1.0;
}

double GuideEvaluator::attenuation(double p) const {
  return split_ * std::pow(10.0, -kappa_ * std::abs(p - feed_) / 10.0);
}

void GuideEvaluator::coefficients(double p, arma::cx_vec& out) const {
  const cx guide_term =
      std::sqrt(attenuation(p)) * unit_phasor(-kg_ * (p - feed_));
  const cx scale = amp_ * guide_term;
  const arma::uword num_users = user_x_.n_elem;
  out.set_size(num_users);
  for (arma::uword k = 0; k < num_users; ++k) {
    const double dx = p - user_x_(k);
    const double d = std::sqrt(dx * dx + planar2_(k));
    out(k) = (scale / d) * unit_phasor(-k0_ * d);
  }
}

}  // namespace passim
