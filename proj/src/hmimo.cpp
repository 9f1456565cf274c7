// SPDX-License-Identifier: Apache-2.0
//
// passim: simulation and position optimization for pinching-antenna systems
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "passim/hmimo.hpp"

#include "passim/channel.hpp"
#include "passim/downlink.hpp"
#include "passim/uplink.hpp"

namespace passim {

FixedArray make_fixed_array(const Scenario& sc, const UserSet& users) {
  const arma::uword chains = sc.cfg.num_guides;
  const arma::uword per_chain = sc.cfg.pas_per_guide;
  const double pitch = 0.5 * sc.wn.wavelength;

  FixedArray array;
  array.chain_y = sc.guide_y;
  array.height = sc.cfg.height;
  array.antenna_x.set_size(chains, per_chain);
  for (arma::uword j = 0; j < per_chain; ++j) {
    const double x =
        (static_cast<double>(j) - 0.5 * static_cast<double>(per_chain - 1)) *
        pitch;
    array.antenna_x.col(j).fill(x);
  }

  // Chain m phase-matches user (m mod K).
  array.analog.set_size(per_chain, chains);
  for (arma::uword m = 0; m < chains; ++m) {
    const arma::uword k = m % users.count();
    for (arma::uword j = 0; j < per_chain; ++j) {
      const arma::vec3 pa{array.antenna_x(m, j), array.chain_y(m),
                          array.height};
      const cx h = los_coefficient(users.pos.col(k), pa, sc.wn);
      array.analog(j, m) = std::conj(h) / std::abs(h);
    }
  }
  return array;
}

arma::cx_mat analog_matrix(const FixedArray& array) {
  const arma::uword chains = array.analog.n_cols;
  const arma::uword per_chain = array.analog.n_rows;
  arma::cx_mat full(chains * per_chain, chains, arma::fill::zeros);
  for (arma::uword m = 0; m < chains; ++m)
    full.submat(m * per_chain, m, (m + 1) * per_chain - 1, m) =
        array.analog.col(m);
  return full;
}

arma::cx_mat hmimo_effective_gains(const Scenario& sc, const UserSet& users,
                                   const FixedArray& array) {
  const arma::uword chains = array.analog.n_cols;
  const arma::uword per_chain = array.analog.n_rows;
  const double split = 1.0 / std::sqrt(static_cast<double>(per_chain));

  arma::cx_mat gains(users.count(), chains, arma::fill::zeros);
  for (arma::uword m = 0; m < chains; ++m) {
    for (arma::uword k = 0; k < users.count(); ++k) {
      cx acc{0.0, 0.0};
      for (arma::uword j = 0; j < per_chain; ++j) {
        const arma::vec3 pa{array.antenna_x(m, j), array.chain_y(m),
                            array.height};
        acc += los_coefficient(users.pos.col(k), pa, sc.wn) *
               array.analog(j, m);
      }
      gains(k, m) = split * acc;
    }
  }
  return gains;
}

double baseline_sum_rate(const Scenario& sc, const UserSet& users, Link link,
                         Scheme scheme) {
  const FixedArray array = make_fixed_array(sc, users);
  const arma::cx_mat gains = hmimo_effective_gains(sc, users, array);
  const ScenarioConfig& cfg = sc.cfg;

  if (link == Link::downlink)
    return dl_sum_rate_direct(gains, scheme, cfg.power_dl_w, cfg.noise_w);

  // Splitter-combined noise is white across chains.
  const arma::cx_mat H = gains.st();
  const arma::vec powers(users.count(), arma::fill::value(cfg.power_ul_w));
  const arma::vec noise_diag(cfg.num_guides, arma::fill::value(cfg.noise_w));
  return ul_sum_rate_direct(H, scheme, powers, noise_diag);
}

}  // namespace passim
