// SPDX-License-Identifier: Apache-2.0
//
// passim: simulation and position optimization for pinching-antenna systems
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "passim/rank_one.hpp"

namespace passim {

CachedInverse make_cached_inverse(const arma::cx_mat& base, bool with_square) {
  CachedInverse cache;
  if (!arma::inv(cache.inv, base))
    throw singular_update_error("base matrix is singular");
  // Rank-deficient bases can slip through LU without an exact zero pivot;
  // the cache contract requires inv * base = I to a tight residual.
  const arma::uword n = base.n_rows;
  const double residual = arma::norm(
      arma::cx_mat(cache.inv * base) - arma::eye<arma::cx_mat>(n, n), "fro");
  if (!(residual <= 1e-8 * std::sqrt(static_cast<double>(n))))
    throw singular_update_error("base matrix is numerically singular");
  if (with_square) cache.inv_sq = cache.inv * cache.inv;
  cache.trace = arma::trace(cache.inv).real();
  return cache;
}

void sherman_morrison_apply(const CachedInverse& cache, const arma::cx_vec& u,
                            double scale, arma::cx_mat& out) {
  const arma::uword n = cache.inv.n_rows;
  out = cache.inv;
  if (scale == 0.0 || arma::norm(u) == 0.0) return;

  const arma::cx_vec v = cache.inv * u;
  const cx denom = 1.0 + scale * arma::cdot(u, v);
  if (std::abs(denom) < 1e-12 * arma::norm(v) * arma::norm(u))
    throw singular_update_error("rank-1 update denominator is numerically zero");

  const cx factor = scale / denom;
  // out -= factor * v v^H, written out to avoid a temporary
  for (arma::uword j = 0; j < n; ++j) {
    const cx vj = factor * std::conj(v(j));
    for (arma::uword i = 0; i < n; ++i) out(i, j) -= v(i) * vj;
  }
}

arma::cx_mat sherman_morrison_apply(const CachedInverse& cache,
                                    const arma::cx_vec& u, double scale) {
  arma::cx_mat out;
  sherman_morrison_apply(cache, u, scale, out);
  return out;
}

double trace_inverse_rank1(const CachedInverse& cache, const arma::cx_vec& u) {
  if (arma::norm(u) == 0.0) return cache.trace;
  const arma::cx_vec v = cache.inv * u;
  // u^H A^{-2} u for Hermitian A equals ||A^{-1} u||^2; fall back to the
  // cached square otherwise.
  const double nv = arma::norm(v);
  const double quad_sq =
      cache.inv_sq.is_empty()
          ? nv * nv
          : arma::cdot(u, arma::cx_vec(cache.inv_sq * u)).real();
  const cx denom = 1.0 + arma::cdot(u, v);
  if (std::abs(denom) < 1e-12 * arma::norm(v) * arma::norm(u))
    throw singular_update_error("rank-1 update denominator is numerically zero");
  return cache.trace - (quad_sq / denom).real();
}

arma::cx_mat woodbury_m(const arma::cx_mat& H, double rho) {
  const arma::uword num_users = H.n_rows;
  const arma::cx_mat inner =
      arma::eye<arma::cx_mat>(num_users, num_users) + rho * H * H.t();
  return woodbury_m(H, rho, arma::cx_mat(arma::inv(inner)));
}

arma::cx_mat woodbury_m(const arma::cx_mat& H, double rho,
                        const arma::cx_mat& inner_inv) {
  const arma::uword chains = H.n_cols;
  return arma::eye<arma::cx_mat>(chains, chains) -
         rho * H.t() * inner_inv * H;
}

}  // namespace passim
