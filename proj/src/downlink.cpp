// SPDX-License-Identifier: Apache-2.0
//
// passim: simulation and position optimization for pinching-antenna systems
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "passim/downlink.hpp"

namespace passim {

namespace {

constexpr double kDenomFloor = 1e-15;

double real_trace(const arma::cx_mat& a) { return arma::trace(a).real(); }

}  // namespace

// ---------------------------------------------------------------------------
// Beamformers

DlBeamformer mrt_beamformer(const arma::cx_mat& H, double power) {
  const double gram_trace = std::pow(arma::norm(H, "fro"), 2);
  if (!(gram_trace > 0)) throw degenerate_channel_error("zero channel");
  DlBeamformer bf;
  bf.scheme = Scheme::matched;
  bf.norm_factor = std::sqrt(power / gram_trace);
  bf.W = bf.norm_factor * H.t();
  return bf;
}

DlBeamformer zf_beamformer(const arma::cx_mat& H, double power) {
  const arma::uword num_users = H.n_rows;
  if (num_users > H.n_cols)
    throw scheme_infeasible_error(
        "zero-forcing needs at least as many RF chains as users");
  const arma::cx_mat gram = H * H.t();
  arma::cx_mat gram_inv;
  if (!arma::inv(gram_inv, gram))
    throw degenerate_channel_error("rank-deficient channel Gram matrix");
  DlBeamformer bf;
  bf.scheme = Scheme::zero_forcing;
  bf.norm_factor = std::sqrt(power / real_trace(gram_inv));
  bf.W = bf.norm_factor * H.t() * gram_inv;
  return bf;
}

DlBeamformer mmse_beamformer(const arma::cx_mat& H, double power,
                             double noise_w) {
  const arma::uword num_users = H.n_rows;
  const double rho = power / (static_cast<double>(num_users) * noise_w);
  const arma::cx_mat reg =
      rho * H * H.t() + arma::eye<arma::cx_mat>(num_users, num_users);
  const arma::cx_mat reg_inv = arma::inv(reg);
  const double beta =
      power / real_trace(reg_inv * reg_inv * (H * H.t()));
  DlBeamformer bf;
  bf.scheme = Scheme::mmse;
  bf.norm_factor = std::sqrt(beta);
  bf.W = bf.norm_factor * H.t() * reg_inv;
  return bf;
}

DlBeamformer make_dl_beamformer(const arma::cx_mat& H, Scheme scheme,
                                double power, double noise_w) {
  switch (scheme) {
    case Scheme::matched:
      return mrt_beamformer(H, power);
    case Scheme::zero_forcing:
      return zf_beamformer(H, power);
    case Scheme::mmse:
      return mmse_beamformer(H, power, noise_w);
  }
  throw std::logic_error("unknown scheme");
}

// ---------------------------------------------------------------------------
// SINRs

arma::vec sinr_dl_direct(const arma::cx_mat& H, const arma::cx_mat& W,
                         const arma::vec& noise_w) {
  const arma::uword num_users = H.n_rows;
  const arma::cx_mat prod = H * W;  // K x K
  arma::vec sinr(num_users);
  for (arma::uword k = 0; k < num_users; ++k) {
    const double sig = std::norm(prod(k, k));
    double interference = 0;
    for (arma::uword j = 0; j < num_users; ++j)
      if (j != k) interference += std::norm(prod(k, j));
    sinr(k) = sig / (interference + noise_w(k));
  }
  return sinr;
}

arma::vec sinr_dl_mrt(const arma::cx_mat& H, double power,
                      const arma::vec& noise_w) {
  const arma::uword num_users = H.n_rows;
  const arma::cx_mat gram = H * H.t();
  const double gram_trace = real_trace(gram);
  arma::vec sinr(num_users);
  for (arma::uword k = 0; k < num_users; ++k) {
    const double sig = std::norm(gram(k, k));
    double interference = 0;
    for (arma::uword j = 0; j < num_users; ++j)
      if (j != k) interference += std::norm(gram(k, j));
    sinr(k) = sig / (interference + gram_trace * noise_w(k) / power);
  }
  return sinr;
}

arma::vec sinr_dl_zf(const arma::cx_mat& H, double power,
                     const arma::vec& noise_w) {
  if (H.n_rows > H.n_cols)
    throw scheme_infeasible_error(
        "zero-forcing needs at least as many RF chains as users");
  arma::cx_mat gram_inv;
  if (!arma::inv(gram_inv, arma::cx_mat(H * H.t())))
    throw degenerate_channel_error("rank-deficient channel Gram matrix");
  const double tr = real_trace(gram_inv);
  return power / (tr * noise_w);
}

arma::vec sinr_dl_mmse(const arma::cx_mat& H, double power, double noise_w) {
  const arma::uword num_users = H.n_rows;
  const double rho = power / (static_cast<double>(num_users) * noise_w);
  const arma::cx_mat reg =
      rho * H * H.t() + arma::eye<arma::cx_mat>(num_users, num_users);
  const arma::cx_mat reg_inv = arma::inv(reg);
  const double beta = power / real_trace(reg_inv * reg_inv * (H * H.t()));
  // H M(P) H^H  ==  (I - reg_inv) / rho  for the dual M x M form.
  const arma::cx_mat quad =
      (arma::eye<arma::cx_mat>(num_users, num_users) - reg_inv) / rho;
  arma::vec sinr(num_users);
  for (arma::uword k = 0; k < num_users; ++k) {
    const double sig = std::norm(quad(k, k));
    double interference = 0;
    for (arma::uword j = 0; j < num_users; ++j)
      if (j != k) interference += std::norm(quad(k, j));
    sinr(k) = sig / (interference + noise_w / beta);
  }
  return sinr;
}

double dl_sum_rate_direct(const arma::cx_mat& H, Scheme scheme, double power,
                          double noise_w) {
  const DlBeamformer bf = make_dl_beamformer(H, scheme, power, noise_w);
  const arma::vec noise(H.n_rows, arma::fill::value(noise_w));
  return sum_rate(sinr_dl_direct(H, bf.W, noise));
}

// ---------------------------------------------------------------------------
// MRT element-wise objective

DlMrtObjective::DlMrtObjective(double power, double noise_w)
    : power_(power), noise_w_(noise_w) {}

void DlMrtObjective::set_waveguide(const arma::cx_mat& gains,
                                   const arma::vec& /*guide_norm2*/,
                                   arma::uword m) {
  const arma::uword num_users = gains.n_rows;
  cross_.zeros(num_users, num_users);
  for (arma::uword g = 0; g < gains.n_cols; ++g) {
    if (g == m) continue;
    cross_ += gains.col(g) * gains.col(g).t();
  }
  cross_trace_ = real_trace(cross_);
}

double DlMrtObjective::rate(const arma::cx_vec& u, double /*g2*/) const {
  const arma::uword num_users = u.n_elem;
  double norm2 = 0;
  for (arma::uword k = 0; k < num_users; ++k) norm2 += std::norm(u(k));
  const double noise_scale = (norm2 + cross_trace_) * noise_w_ / power_;

  double total = 0;
  for (arma::uword k = 0; k < num_users; ++k) {
    const double sig_gain = std::norm(u(k)) + cross_(k, k).real();
    const double signal = sig_gain * sig_gain;
    double interference = 0;
    for (arma::uword j = 0; j < num_users; ++j) {
      if (j == k) continue;
      interference += std::norm(u(k) * std::conj(u(j)) + cross_(k, j));
    }
    double denom = interference + noise_scale;
    if (!(denom > 0)) {
      denom = kDenomFloor;
      ++clamp_events_;
    }
    total += std::log2(1.0 + signal / denom);
  }
  return total;
}

// ---------------------------------------------------------------------------
// ZF element-wise objective

DlZfObjective::DlZfObjective(double power, double noise_w)
    : power_(power), noise_w_(noise_w) {}

void DlZfObjective::set_waveguide(const arma::cx_mat& gains,
                                  const arma::vec& /*guide_norm2*/,
                                  arma::uword m) {
  users_ = gains.n_rows;
  gram_.zeros(users_, users_);
  for (arma::uword g = 0; g < gains.n_cols; ++g) {
    if (g == m) continue;
    gram_ += gains.col(g) * gains.col(g).t();
  }
  fallback_ = false;
  try {
    cache_ = make_cached_inverse(gram_);
  } catch (const singular_update_error&) {
    // Fewer excluded-guide columns than users (or a degenerate draw): score
    // candidates by direct trace evaluation instead.
    fallback_ = true;
  }
}

double DlZfObjective::criterion_ratio(const arma::cx_vec& u) const {
  scratch_ = cache_.inv * u;
  const double num = std::pow(arma::norm(scratch_), 2);
  const double den = 1.0 + arma::cdot(u, scratch_).real();
  return num / den;
}

double DlZfObjective::rate_from_trace(double trace) const {
  const double floor_trace = std::max(trace, kDenomFloor);
  const double sinr = power_ / (floor_trace * noise_w_);
  return static_cast<double>(users_) * std::log2(1.0 + sinr);
}

double DlZfObjective::rate(const arma::cx_vec& u, double /*g2*/) const {
  if (!fallback_) return rate_from_trace(cache_.trace - criterion_ratio(u));

  const arma::cx_mat full = gram_ + u * u.t();
  arma::cx_mat inv;
  if (!arma::inv(inv, full)) inv = arma::pinv(full);
  return rate_from_trace(arma::trace(inv).real());
}

// ---------------------------------------------------------------------------
// MMSE element-wise objective

DlMmseObjective::DlMmseObjective(double power, double noise_w,
                                 arma::uword num_users)
    : power_(power),
      noise_w_(noise_w),
      rho_(power / (static_cast<double>(num_users) * noise_w)) {}

void DlMmseObjective::set_waveguide(const arma::cx_mat& gains,
                                    const arma::vec& /*guide_norm2*/,
                                    arma::uword m) {
  const arma::uword num_users = gains.n_rows;
  arma::cx_mat reg = arma::eye<arma::cx_mat>(num_users, num_users);
  for (arma::uword g = 0; g < gains.n_cols; ++g) {
    if (g == m) continue;
    reg += rho_ * gains.col(g) * gains.col(g).t();
  }
  reg_inv_ = arma::inv_sympd(reg);
}

double DlMmseObjective::rate(const arma::cx_vec& u, double /*g2*/) const {
  const arma::uword num_users = u.n_elem;

  // Rank-1 update of the regularized inverse.
  v_ = reg_inv_ * u;
  const double quad = arma::cdot(u, v_).real();
  const double denom = 1.0 / rho_ + quad;
  inv_ = reg_inv_;
  for (arma::uword j = 0; j < num_users; ++j) {
    const cx vj = std::conj(v_(j)) / denom;
    for (arma::uword i = 0; i < num_users; ++i) inv_(i, j) -= v_(i) * vj;
  }

  // H M H^H reduces to (I - inv) / rho; beta follows from the same inverse.
  double tr1 = 0, tr2 = 0;
  for (arma::uword j = 0; j < num_users; ++j) {
    tr1 += inv_(j, j).real();
    for (arma::uword i = 0; i < num_users; ++i) tr2 += std::norm(inv_(i, j));
  }
  const double beta = power_ * rho_ / std::max(tr1 - tr2, kDenomFloor);

  rmat_ = -inv_ / rho_;
  rmat_.diag() += 1.0 / rho_;

  double total = 0;
  for (arma::uword k = 0; k < num_users; ++k) {
    const double sig = std::norm(rmat_(k, k));
    double interference = 0;
    for (arma::uword j = 0; j < num_users; ++j)
      if (j != k) interference += std::norm(rmat_(k, j));
    total += std::log2(1.0 + sig / (interference + noise_w_ / beta));
  }
  return total;
}

}  // namespace passim
