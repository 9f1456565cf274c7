// SPDX-License-Identifier: Apache-2.0
//
// passim: simulation and position optimization for pinching-antenna systems
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "passim/uplink.hpp"

namespace passim {

namespace {

constexpr double kDenomFloor = 1e-15;

double log2_det_real(const arma::cx_mat& a) {
  if (a.is_empty()) return 0.0;
  const cx ld = arma::log_det(a);
  return ld.real() / std::numbers::ln2;
}

arma::cx_mat scale_cols(const arma::cx_mat& a, const arma::vec& s) {
  arma::cx_mat out = a;
  for (arma::uword j = 0; j < out.n_cols; ++j) out.col(j) *= s(j);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Combiners

UlCombiner mrc_combiner(const arma::cx_mat& H) {
  return UlCombiner{H, Scheme::matched};
}

UlCombiner zf_combiner(const arma::cx_mat& H) {
  if (H.n_cols > H.n_rows)
    throw scheme_infeasible_error(
        "zero-forcing needs at least as many RF chains as users");
  arma::cx_mat gram_inv;
  if (!arma::inv(gram_inv, arma::cx_mat(H.t() * H)))
    throw degenerate_channel_error("rank-deficient channel Gram matrix");
  return UlCombiner{H * gram_inv, Scheme::zero_forcing};
}

UlCombiner mmse_combiner(const arma::cx_mat& H, const arma::vec& powers,
                         const arma::vec& noise_diag) {
  arma::cx_mat cov = scale_cols(H, powers) * H.t();
  cov.diag() += arma::conv_to<arma::cx_vec>::from(noise_diag);
  return UlCombiner{arma::solve(cov, H), Scheme::mmse};
}

UlCombiner make_ul_combiner(const arma::cx_mat& H, Scheme scheme,
                            const arma::vec& powers,
                            const arma::vec& noise_diag) {
  switch (scheme) {
    case Scheme::matched:
      return mrc_combiner(H);
    case Scheme::zero_forcing:
      return zf_combiner(H);
    case Scheme::mmse:
      return mmse_combiner(H, powers, noise_diag);
  }
  throw std::logic_error("unknown scheme");
}

// ---------------------------------------------------------------------------
// SINRs and rates

arma::vec sinr_ul_direct(const arma::cx_mat& H, const arma::cx_mat& V,
                         const arma::vec& powers,
                         const arma::vec& noise_diag) {
  const arma::uword num_users = H.n_cols;
  const arma::cx_mat prod = V.t() * H;  // K x K
  arma::vec sinr(num_users);
  for (arma::uword k = 0; k < num_users; ++k) {
    const double sig = powers(k) * std::norm(prod(k, k));
    double interference = 0;
    for (arma::uword j = 0; j < num_users; ++j)
      if (j != k) interference += powers(j) * std::norm(prod(k, j));
    double noise = 0;
    for (arma::uword m = 0; m < H.n_rows; ++m)
      noise += noise_diag(m) * std::norm(V(m, k));
    sinr(k) = sig / (interference + noise);
  }
  return sinr;
}

arma::vec sinr_ul_mrc(const arma::cx_mat& H, const arma::vec& powers,
                      const arma::vec& noise_diag) {
  const arma::uword num_users = H.n_cols;
  arma::vec sinr(num_users);
  for (arma::uword k = 0; k < num_users; ++k) {
    const arma::cx_vec hk = H.col(k);
    const double gain = std::pow(arma::norm(hk), 2);
    double denom = 0;
    for (arma::uword j = 0; j < num_users; ++j) {
      if (j == k) continue;
      denom += powers(j) * std::norm(arma::cdot(hk, H.col(j)));
    }
    for (arma::uword m = 0; m < H.n_rows; ++m)
      denom += noise_diag(m) * std::norm(hk(m));
    sinr(k) = powers(k) * gain * gain / denom;
  }
  return sinr;
}

arma::vec sinr_ul_zf(const arma::cx_mat& H, const arma::vec& powers,
                     const arma::vec& noise_diag) {
  if (H.n_cols > H.n_rows)
    throw scheme_infeasible_error(
        "zero-forcing needs at least as many RF chains as users");
  arma::cx_mat gram_inv;
  if (!arma::inv(gram_inv, arma::cx_mat(H.t() * H)))
    throw degenerate_channel_error("rank-deficient channel Gram matrix");
  const arma::cx_mat mmat =
      gram_inv * H.t() * arma::diagmat(arma::sqrt(noise_diag));
  const arma::uword num_users = H.n_cols;
  arma::vec sinr(num_users);
  for (arma::uword k = 0; k < num_users; ++k) {
    double q = 0;
    for (arma::uword m = 0; m < mmat.n_cols; ++m) q += std::norm(mmat(k, m));
    sinr(k) = powers(k) / q;
  }
  return sinr;
}

arma::vec ul_rate_mmse_det(const arma::cx_mat& H, const arma::vec& powers,
                           const arma::vec& noise_diag) {
  const arma::uword num_users = H.n_cols;
  const arma::uword chains = H.n_rows;
  arma::cx_mat full = scale_cols(H, powers) * H.t();
  full.diag() += arma::conv_to<arma::cx_vec>::from(noise_diag);
  const double log_full = log2_det_real(full);
  arma::vec rates(num_users);
  for (arma::uword k = 0; k < num_users; ++k) {
    arma::cx_mat rest(chains, chains, arma::fill::zeros);
    for (arma::uword j = 0; j < num_users; ++j) {
      if (j == k) continue;
      rest += powers(j) * H.col(j) * H.col(j).t();
    }
    rest.diag() += arma::conv_to<arma::cx_vec>::from(noise_diag);
    rates(k) = log_full - log2_det_real(rest);
  }
  return rates;
}

arma::vec ul_rate_mmse_reduced(const arma::cx_mat& H, const arma::vec& powers,
                               const arma::vec& noise_diag) {
  const arma::uword num_users = H.n_cols;
  arma::cx_mat white = H;
  white.each_col() /= arma::conv_to<arma::cx_vec>::from(arma::sqrt(noise_diag));
  const arma::cx_mat gram = white.t() * white;  // H^H R^{-1} H
  arma::cx_mat full = scale_cols(gram, powers);
  full.diag() += 1.0;
  const double log_full = log2_det_real(full);

  arma::vec rates(num_users);
  for (arma::uword k = 0; k < num_users; ++k) {
    const arma::uvec keep =
        arma::find(arma::regspace<arma::uvec>(0, num_users - 1) != k);
    arma::cx_mat sub = gram.submat(keep, keep);
    for (arma::uword j = 0; j < keep.n_elem; ++j) sub.col(j) *= powers(keep(j));
    sub.diag() += 1.0;
    rates(k) = log_full - log2_det_real(sub);
  }
  return rates;
}

double ul_sum_rate_direct(const arma::cx_mat& H, Scheme scheme,
                          const arma::vec& powers,
                          const arma::vec& noise_diag) {
  const UlCombiner comb = make_ul_combiner(H, scheme, powers, noise_diag);
  return sum_rate(sinr_ul_direct(H, comb.V, powers, noise_diag));
}

// ---------------------------------------------------------------------------
// MRC element-wise objective

UlMrcObjective::UlMrcObjective(double power_per_user, double noise_w)
    : power_(power_per_user), noise_w_(noise_w) {}

void UlMrcObjective::set_waveguide(const arma::cx_mat& gains,
                                   const arma::vec& guide_norm2,
                                   arma::uword m) {
  const arma::uword num_users = gains.n_rows;
  cross_.zeros(num_users, num_users);
  noise_const_.zeros(num_users);
  for (arma::uword g = 0; g < gains.n_cols; ++g) {
    if (g == m) continue;
    cross_ += gains.col(g) * gains.col(g).t();
    for (arma::uword k = 0; k < num_users; ++k)
      noise_const_(k) += std::norm(gains(k, g)) * noise_w_ * guide_norm2(g);
  }
}

double UlMrcObjective::rate(const arma::cx_vec& u, double g2) const {
  const arma::uword num_users = u.n_elem;
  double total = 0;
  for (arma::uword k = 0; k < num_users; ++k) {
    const double own = std::norm(u(k));
    const double gain = own + cross_(k, k).real();
    const double signal = power_ * gain * gain;
    double interference = 0;
    for (arma::uword j = 0; j < num_users; ++j) {
      if (j == k) continue;
      interference +=
          power_ * std::norm(u(k) * std::conj(u(j)) + cross_(k, j));
    }
    double denom = interference + own * noise_w_ * g2 + noise_const_(k);
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

UlZfObjective::UlZfObjective(double power_per_user, double noise_w)
    : power_(power_per_user), noise_w_(noise_w) {}

void UlZfObjective::set_waveguide(const arma::cx_mat& gains,
                                  const arma::vec& guide_norm2,
                                  arma::uword m) {
  const arma::uword num_users = gains.n_rows;
  scan_guide_ = m;
  gram_.zeros(num_users, num_users);
  noise_cols_.set_size(num_users, gains.n_cols);
  const double sigma = std::sqrt(noise_w_);
  for (arma::uword g = 0; g < gains.n_cols; ++g) {
    const arma::cx_vec col = arma::conj(gains.col(g));
    noise_cols_.col(g) = sigma * std::sqrt(guide_norm2(g)) * col;
    if (g == m) continue;
    gram_ += col * col.t();
  }
  fallback_ = false;
  try {
    cache_ = make_cached_inverse(gram_);
  } catch (const singular_update_error&) {
    fallback_ = true;
  }
}

double UlZfObjective::rate(const arma::cx_vec& u, double g2) const {
  const arma::uword num_users = u.n_elem;
  hvec_ = arma::conj(u);

  if (!fallback_) {
    sherman_morrison_apply(cache_, hvec_, 1.0, inv_);
  } else {
    const arma::cx_mat full = gram_ + hvec_ * hvec_.t();
    if (!arma::inv(inv_, full)) inv_ = arma::pinv(full);
  }

  ncols_ = noise_cols_;
  ncols_.col(scan_guide_) = std::sqrt(noise_w_ * g2) * hvec_;
  mmat_ = inv_ * ncols_;

  double total = 0;
  for (arma::uword k = 0; k < num_users; ++k) {
    double q = 0;
    for (arma::uword m = 0; m < mmat_.n_cols; ++m) q += std::norm(mmat_(k, m));
    total += std::log2(1.0 + power_ / std::max(q, kDenomFloor));
  }
  return total;
}

// ---------------------------------------------------------------------------
// MMSE element-wise objective

UlMmseObjective::UlMmseObjective(double power_per_user, double noise_w)
    : power_(power_per_user), noise_w_(noise_w) {}

void UlMmseObjective::set_waveguide(const arma::cx_mat& gains,
                                    const arma::vec& guide_norm2,
                                    arma::uword m) {
  const arma::uword num_users = gains.n_rows;
  arma::cx_mat weighted(num_users, num_users, arma::fill::zeros);
  for (arma::uword g = 0; g < gains.n_cols; ++g) {
    if (g == m) continue;
    const arma::cx_vec col = arma::conj(gains.col(g));
    weighted += (1.0 / (noise_w_ * guide_norm2(g))) * col * col.t();
  }

  // Full K x K cache: sum-of-quadratics times the power diagonal plus I.
  arma::cx_mat full = power_ * weighted;
  full.diag() += 1.0;
  full_inv_ = arma::inv(full);
  double offset = static_cast<double>(num_users) * log2_det_real(full);

  drop_inv_.clear();
  drop_inv_.reserve(num_users);
  for (arma::uword k = 0; k < num_users; ++k) {
    if (num_users == 1) {
      drop_inv_.emplace_back();
      continue;
    }
    const arma::uvec keep =
        arma::find(arma::regspace<arma::uvec>(0, num_users - 1) != k);
    arma::cx_mat sub = power_ * weighted.submat(keep, keep);
    sub.diag() += 1.0;
    offset -= log2_det_real(sub);
    drop_inv_.push_back(arma::inv(sub));
  }
  rate_offset_ = offset;
}

double UlMmseObjective::rate(const arma::cx_vec& u, double g2) const {
  const arma::uword num_users = u.n_elem;
  const double weight = 1.0 / (noise_w_ * g2);
  hvec_ = arma::conj(u);

  // First criterion term is shared by all users.
  zvec_ = full_inv_ * hvec_;
  const double shared =
      std::log2(std::max(1.0 + weight * power_ * arma::cdot(hvec_, zvec_).real(),
                         kDenomFloor));

  double total = static_cast<double>(num_users) * shared;
  for (arma::uword k = 0; k < num_users; ++k) {
    if (num_users == 1) break;
    hsub_.set_size(num_users - 1);
    arma::uword idx = 0;
    for (arma::uword j = 0; j < num_users; ++j)
      if (j != k) hsub_(idx++) = hvec_(j);
    zsub_ = drop_inv_[k] * hsub_;
    total -= std::log2(
        std::max(1.0 + weight * power_ * arma::cdot(hsub_, zsub_).real(),
                 kDenomFloor));
  }
  return total + rate_offset_;
}

}  // namespace passim
