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

// Fixed-antenna hybrid benchmark: M RF chains, each feeding N fixed
// lambda/2-spaced antennas (centred on the region) through unit-modulus
// phase shifters. Chain m phase-matches user (m mod K).

struct FixedArray {
  arma::mat antenna_x;   // M x N positions along x
  arma::vec chain_y;     // M
  double height = 0;
  arma::cx_mat analog;   // N x M unit-modulus per-chain phase vectors
};

FixedArray make_fixed_array(const Scenario& sc, const UserSet& users);

// Full MN x M block-diagonal analog matrix (one chain per block).
arma::cx_mat analog_matrix(const FixedArray& array);

// K x M effective channel seen by the digital stage. The passive splitter
// behind each chain divides the signal across its N branches, so the entry
// is (1/sqrt(N)) h_k^T f_m; per-chain radiated (and combined-noise) power
// then matches the budget the digital stage normalizes to.
arma::cx_mat hmimo_effective_gains(const Scenario& sc, const UserSet& users,
                                   const FixedArray& array);

// Digital MRT/ZF/MMSE (or MRC/ZF/MMSE) stage on the effective channel with
// the scenario's power and noise parameters; no position optimization.
double baseline_sum_rate(const Scenario& sc, const UserSet& users, Link link,
                         Scheme scheme);

}  // namespace passim
