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
#include "passim/objective.hpp"
#include "passim/rank_one.hpp"

namespace passim {

// ---------------------------------------------------------------------------
// Baseband transmit beamformers on the effective K x M channel. Every
// returned beamformer meets the power budget with equality,
// tr(W W^H) = power.

struct DlBeamformer {
  arma::cx_mat W;          // M x K
  Scheme scheme = Scheme::matched;
  double norm_factor = 0;  // the sqrt(power / tr(...)) or sqrt(beta) scalar
};

DlBeamformer mrt_beamformer(const arma::cx_mat& H, double power);

// Requires K <= M and full row rank; throws scheme_infeasible_error /
// degenerate_channel_error otherwise.
DlBeamformer zf_beamformer(const arma::cx_mat& H, double power);

// Defined for any K vs M relationship.
DlBeamformer mmse_beamformer(const arma::cx_mat& H, double power,
                             double noise_w);

DlBeamformer make_dl_beamformer(const arma::cx_mat& H, Scheme scheme,
                                double power, double noise_w);

// ---------------------------------------------------------------------------
// SINR evaluation

// General per-user SINR |[HW]_kk|^2 / (sum_{k' != k} |[HW]_kk'|^2 + sigma_k^2)
arma::vec sinr_dl_direct(const arma::cx_mat& H, const arma::cx_mat& W,
                         const arma::vec& noise_w);

// Scheme-specific closed forms.
arma::vec sinr_dl_mrt(const arma::cx_mat& H, double power,
                      const arma::vec& noise_w);
arma::vec sinr_dl_zf(const arma::cx_mat& H, double power,
                     const arma::vec& noise_w);
arma::vec sinr_dl_mmse(const arma::cx_mat& H, double power, double noise_w);

// Full-pipeline downlink sum-rate: beamformer construction plus direct SINR.
double dl_sum_rate_direct(const arma::cx_mat& H, Scheme scheme, double power,
                          double noise_w);

// ---------------------------------------------------------------------------
// Element-wise objectives (one candidate column varies, the rest cached)

class DlMrtObjective final : public ElementwiseObjective {
 public:
  DlMrtObjective(double power, double noise_w);

  Link direction() const override { return Link::downlink; }
  Scheme scheme() const override { return Scheme::matched; }
  void set_waveguide(const arma::cx_mat& gains, const arma::vec& guide_norm2,
                     arma::uword m) override;
  double rate(const arma::cx_vec& u, double g2) const override;
  arma::uword clamp_events() const override { return clamp_events_; }

 private:
  double power_, noise_w_;
  arma::cx_mat cross_;   // K x K constants over the other guides
  double cross_trace_ = 0;
  mutable arma::uword clamp_events_ = 0;
};

class DlZfObjective final : public ElementwiseObjective {
 public:
  DlZfObjective(double power, double noise_w);

  Link direction() const override { return Link::downlink; }
  Scheme scheme() const override { return Scheme::zero_forcing; }
  void set_waveguide(const arma::cx_mat& gains, const arma::vec& guide_norm2,
                     arma::uword m) override;
  double rate(const arma::cx_vec& u, double g2) const override;
  bool used_direct_fallback() const override { return fallback_; }

  // Search criterion underlying rate(): the rank-1 trace-reduction ratio.
  double criterion_ratio(const arma::cx_vec& u) const;

 private:
  double rate_from_trace(double trace) const;

  double power_, noise_w_;
  arma::uword users_ = 0;
  CachedInverse cache_;
  arma::cx_mat gram_;  // excluded-guide Gram, kept for the direct fallback
  bool fallback_ = false;
  mutable arma::cx_vec scratch_;
};

class DlMmseObjective final : public ElementwiseObjective {
 public:
  DlMmseObjective(double power, double noise_w, arma::uword num_users);

  Link direction() const override { return Link::downlink; }
  Scheme scheme() const override { return Scheme::mmse; }
  void set_waveguide(const arma::cx_mat& gains, const arma::vec& guide_norm2,
                     arma::uword m) override;
  double rate(const arma::cx_vec& u, double g2) const override;

 private:
  double power_, noise_w_, rho_;
  arma::cx_mat reg_inv_;  // inverse of the regularized excluded-guide Gram
  mutable arma::cx_vec v_;
  mutable arma::cx_mat inv_, rmat_;
};

}  // namespace passim
