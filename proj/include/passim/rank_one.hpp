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

namespace passim {

// Inverse of a base matrix with one guide's rank-1 contribution excluded.
// Rebuilt by full inversion once per waveguide scan; every candidate then
// reuses it through O(K^2) rank-1 updates.
struct CachedInverse {
  arma::cx_mat inv;     // A^{-1}
  arma::cx_mat inv_sq;  // A^{-2}; empty unless requested
  double trace = 0.0;   // Re tr(A^{-1})
};

CachedInverse make_cached_inverse(const arma::cx_mat& base,
                                  bool with_square = false);

// (A + scale u u^H)^{-1} without forming the updated base. Throws
// singular_update_error when the update denominator is numerically zero.
void sherman_morrison_apply(const CachedInverse& cache, const arma::cx_vec& u,
                            double scale, arma::cx_mat& out);
arma::cx_mat sherman_morrison_apply(const CachedInverse& cache,
                                    const arma::cx_vec& u, double scale = 1.0);

// Re tr((A + u u^H)^{-1}) in O(K^2).
double trace_inverse_rank1(const CachedInverse& cache, const arma::cx_vec& u);

// (rho H^H H + I_M)^{-1} evaluated through the K x K dual inverse
// I_M - rho H^H (I_K + rho H H^H)^{-1} H.
arma::cx_mat woodbury_m(const arma::cx_mat& H, double rho);

// Same, with the inner K x K inverse supplied by the caller (e.g. maintained
// through rank-1 updates while one column of H varies).
arma::cx_mat woodbury_m(const arma::cx_mat& H, double rho,
                        const arma::cx_mat& inner_inv);

}  // namespace passim
