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
#include <vector>

#include "passim/common.hpp"
#include "passim/objective.hpp"
#include "passim/rank_one.hpp"

namespace passim {

// ---------------------------------------------------------------------------
// Linear receive combiners on the effective M x K channel

struct UlCombiner {
  arma::cx_mat V;  // M x K
  Scheme scheme = Scheme::matched;
};

UlCombiner mrc_combiner(const arma::cx_mat& H);

// Requires K <= M and full column rank.
UlCombiner zf_combiner(const arma::cx_mat& H);

UlCombiner mmse_combiner(const arma::cx_mat& H, const arma::vec& powers,
                         const arma::vec& noise_diag);

UlCombiner make_ul_combiner(const arma::cx_mat& H, Scheme scheme,
                            const arma::vec& powers,
                            const arma::vec& noise_diag);

// ---------------------------------------------------------------------------
// SINR / rate evaluation

// General per-user SINR for combiner columns v_k with diagonal noise
// covariance.
arma::vec sinr_ul_direct(const arma::cx_mat& H, const arma::cx_mat& V,
                         const arma::vec& powers, const arma::vec& noise_diag);

// Closed forms.
arma::vec sinr_ul_mrc(const arma::cx_mat& H, const arma::vec& powers,
                      const arma::vec& noise_diag);
arma::vec sinr_ul_zf(const arma::cx_mat& H, const arma::vec& powers,
                     const arma::vec& noise_diag);

// Per-user MMSE rates via the M x M determinant form.
arma::vec ul_rate_mmse_det(const arma::cx_mat& H, const arma::vec& powers,
                           const arma::vec& noise_diag);

// Same rates via the noise-whitened K x K / (K-1) x (K-1) reduction; must
// agree with the determinant form.
arma::vec ul_rate_mmse_reduced(const arma::cx_mat& H, const arma::vec& powers,
                               const arma::vec& noise_diag);

// Full-pipeline uplink sum-rate: combiner construction plus direct SINR.
double ul_sum_rate_direct(const arma::cx_mat& H, Scheme scheme,
                          const arma::vec& powers,
                          const arma::vec& noise_diag);

// ---------------------------------------------------------------------------
// Element-wise objectives. All take the K x M gain matrix whose entries use
// the uplink attenuation; the conjugation into combiner space happens
// internally.

class UlMrcObjective final : public ElementwiseObjective {
 public:
  UlMrcObjective(double power_per_user, double noise_w);

  Link direction() const override { return Link::uplink; }
  Scheme scheme() const override { return Scheme::matched; }
  void set_waveguide(const arma::cx_mat& gains, const arma::vec& guide_norm2,
                     arma::uword m) override;
  double rate(const arma::cx_vec& u, double g2) const override;
  arma::uword clamp_events() const override { return clamp_events_; }

 private:
  double power_, noise_w_;
  arma::cx_mat cross_;     // K x K constants over the other guides
  arma::vec noise_const_;  // per-user noise quadratic over the other guides
  mutable arma::uword clamp_events_ = 0;
};

class UlZfObjective final : public ElementwiseObjective {
 public:
  UlZfObjective(double power_per_user, double noise_w);

  Link direction() const override { return Link::uplink; }
  Scheme scheme() const override { return Scheme::zero_forcing; }
  void set_waveguide(const arma::cx_mat& gains, const arma::vec& guide_norm2,
                     arma::uword m) override;
  double rate(const arma::cx_vec& u, double g2) const override;
  bool used_direct_fallback() const override { return fallback_; }

 private:
  double power_, noise_w_;
  arma::uword scan_guide_ = 0;
  CachedInverse cache_;
  arma::cx_mat gram_;          // excluded-guide Gram for the direct fallback
  arma::cx_mat noise_cols_;    // K x M columns sigma ||g_m'|| conj(gain col)
  bool fallback_ = false;
  mutable arma::cx_vec hvec_;
  mutable arma::cx_mat inv_, mmat_, ncols_;
};

class UlMmseObjective final : public ElementwiseObjective {
 public:
  UlMmseObjective(double power_per_user, double noise_w);

  Link direction() const override { return Link::uplink; }
  Scheme scheme() const override { return Scheme::mmse; }
  void set_waveguide(const arma::cx_mat& gains, const arma::vec& guide_norm2,
                     arma::uword m) override;
  double rate(const arma::cx_vec& u, double g2) const override;

  // Candidate-independent offset between the scan criterion and the true
  // sum-rate for the current waveguide.
  double rate_offset() const { return rate_offset_; }

 private:
  double power_, noise_w_;
  arma::cx_mat full_inv_;                // inverse of the K x K cache
  std::vector<arma::cx_mat> drop_inv_;   // per-user (K-1) x (K-1) inverses
  double rate_offset_ = 0;
  mutable arma::cx_vec hvec_, zvec_, hsub_, zsub_;
};

}  // namespace passim
