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
#include <memory>

#include "passim/channel.hpp"
#include "passim/downlink.hpp"
#include "passim/optimizer.hpp"
#include "passim/scenario.hpp"
#include "passim/uplink.hpp"

namespace passim::test {

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline double rel_err(const arma::cx_mat& got, const arma::cx_mat& want) {
  return arma::norm(got - want, "fro") /
         std::max(arma::norm(want, "fro"), 1e-300);
}

inline arma::cx_mat random_cx(arma::uword rows, arma::uword cols, Rng& rng) {
  arma::cx_mat out(rows, cols);
  for (auto& v : out) v = cx{rng.uniform(-1, 1), rng.uniform(-1, 1)};
  return out;
}

inline arma::cx_vec random_cx_vec(arma::uword n, Rng& rng) {
  arma::cx_vec out(n);
  for (auto& v : out) v = cx{rng.uniform(-1, 1), rng.uniform(-1, 1)};
  return out;
}

// Hermitian positive definite test matrix.
inline arma::cx_mat random_hpd(arma::uword n, Rng& rng) {
  const arma::cx_mat b = random_cx(n, n, rng);
  return arma::cx_mat(b * b.t()) + arma::eye<arma::cx_mat>(n, n);
}

struct Instance {
  Scenario sc;
  UserSet users;
  PinchingLayout layout;
};

inline Instance make_instance(std::uint64_t seed,
                              const ConfigOverrides& ov = {}) {
  const ScenarioConfig cfg = resolve_config(ov);
  Instance inst{make_scenario(cfg), {}, {}};
  Rng rng(seed);
  inst.users = draw_users(cfg, rng);
  inst.layout = init_layout(inst.sc, rng);
  return inst;
}

// Full-pipeline sum-rate at a layout: rebuild the channel, construct the
// baseband stage, evaluate the general SINR formula.
inline double pipeline_sum_rate(const Instance& inst,
                                const PinchingLayout& layout, Link link,
                                Scheme scheme) {
  const ScenarioConfig& cfg = inst.sc.cfg;
  const EffectiveChannel ch =
      effective_channel(inst.users, layout, inst.sc, link);
  if (link == Link::downlink)
    return dl_sum_rate_direct(ch.H, scheme, cfg.power_dl_w, cfg.noise_w);
  const arma::vec powers(cfg.num_users, arma::fill::value(cfg.power_ul_w));
  return ul_sum_rate_direct(ch.H, scheme, powers,
                            noise_cov_diag(ch, cfg.noise_w));
}

// Random candidate position for PA (m, n): uniform over the guide, redrawn
// until the spacing constraint against the other PAs holds.
inline double random_candidate(const Instance& inst, arma::uword m,
                               arma::uword n, Rng& rng) {
  const double origin = inst.sc.feed_x(m);
  while (true) {
    const double x = origin + rng.uniform() * inst.sc.cfg.usable_len;
    bool ok = true;
    for (arma::uword n2 = 0; n2 < inst.layout.pas_per_guide(); ++n2) {
      if (n2 != n &&
          std::abs(x - inst.layout.x(m, n2)) < inst.sc.cfg.min_spacing) {
        ok = false;
        break;
      }
    }
    if (ok) return x;
  }
}

// Scan state for comparing an element-wise objective against the full
// pipeline: PA (m, n) of the instance layout moves, everything else is fixed.
struct ObjectiveProbe {
  ObjectiveProbe(const Instance& inst_, Link link_, Scheme scheme_,
                 arma::uword m_, arma::uword n_)
      : inst(inst_),
        link(link_),
        scheme(scheme_),
        m(m_),
        n(n_),
        objective(make_objective(link_, scheme_, inst_.sc.cfg)),
        guide(inst_.users, inst_.sc, m_, link_),
        zeta_guide(inst_.users, inst_.sc, m_, Link::uplink) {
    const ScenarioConfig& cfg = inst.sc.cfg;
    const EffectiveChannel ch =
        effective_channel(inst.users, inst.layout, inst.sc, link);
    const arma::vec att_sums =
        link == Link::uplink
            ? ch.guide_norm2
            : arma::vec(ch.guide_norm2 *
                        static_cast<double>(cfg.pas_per_guide));
    objective->set_waveguide(ch.gains, att_sums, m);

    base.zeros(cfg.num_users);
    arma::cx_vec coef;
    for (arma::uword n2 = 0; n2 < cfg.pas_per_guide; ++n2) {
      if (n2 == n) continue;
      guide.coefficients(inst.layout.x(m, n2), coef);
      base += coef;
      base_att += zeta_guide.attenuation(inst.layout.x(m, n2));
    }
  }

  // Element-wise objective value with PA n at x.
  double fast_rate(double x) const {
    arma::cx_vec coef;
    guide.coefficients(x, coef);
    return objective->rate(arma::cx_vec(base + coef),
                           base_att + zeta_guide.attenuation(x));
  }

  // Rebuilt-channel value with PA n at x.
  double direct_rate(double x) const {
    PinchingLayout moved = inst.layout;
    moved.x(m, n) = x;
    return pipeline_sum_rate(inst, moved, link, scheme);
  }

  const Instance& inst;
  Link link;
  Scheme scheme;
  arma::uword m, n;
  std::unique_ptr<ElementwiseObjective> objective;
  GuideEvaluator guide;
  GuideEvaluator zeta_guide;
  arma::cx_vec base;
  double base_att = 0;
};

// Brute-force effective channel assembly through the full per-PA vectors and
// block-diagonal in-guide gain matrix; the independent oracle for the
// entry-wise channel builder.
inline arma::cx_mat brute_force_gains(const UserSet& users,
                                      const PinchingLayout& layout,
                                      const Scenario& sc, Link link) {
  const arma::uword num_users = users.count();
  const arma::uword guides = layout.guides();
  const arma::uword pas = layout.pas_per_guide();

  // Raw per-PA LoS coefficients, MN stacked (guide-major).
  arma::cx_mat raw(guides * pas, num_users);
  for (arma::uword m = 0; m < guides; ++m)
    for (arma::uword n = 0; n < pas; ++n)
      for (arma::uword k = 0; k < num_users; ++k) {
        const arma::vec3 pa{layout.x(m, n), layout.guide_y(m), layout.height};
        raw(m * pas + n, k) = los_coefficient(users.pos.col(k), pa, sc.wn);
      }

  // Block-diagonal in-guide matrix.
  arma::cx_mat inguide(guides * pas, guides, arma::fill::zeros);
  for (arma::uword m = 0; m < guides; ++m)
    for (arma::uword n = 0; n < pas; ++n) {
      const double att = link_attenuation(layout.x(m, n), layout.feed_x(m),
                                          sc.cfg.kappa, pas, link);
      inguide(m * pas + n, m) =
          std::sqrt(att) *
          unit_phasor(-sc.wn.guide_wavenumber *
                      (layout.x(m, n) - layout.feed_x(m)));
    }

  // Row k of the result is the per-user channel row times the gain matrix.
  arma::cx_mat gains(num_users, guides);
  for (arma::uword k = 0; k < num_users; ++k)
    gains.row(k) = raw.col(k).st() * inguide;
  return gains;
}

}  // namespace passim::test
