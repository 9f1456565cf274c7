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

#include "passim/common.hpp"
#include "passim/scenario.hpp"

namespace passim {

inline double sum_rate(const arma::vec& sinr) {
  return arma::accu(arma::log2(1.0 + sinr));
}

// One scheme's element-wise objective. set_waveguide() rebuilds the
// candidate-independent caches for the guide being scanned; rate() then
// scores one candidate column of the gain matrix in O(K^2)-ish time.
//
// rate() returns the sum-rate in bit/s/Hz (for schemes whose natural search
// criterion is not the rate itself, the value is the rate implied by that
// criterion), so scores are comparable across waveguide scans and sweeps.
//
// Instances keep scratch buffers: a cache is immutable during a scan, but an
// instance must not be shared across threads.
class ElementwiseObjective {
 public:
  virtual ~ElementwiseObjective() = default;

  virtual Link direction() const = 0;
  virtual Scheme scheme() const = 0;

  // gains: K x M per-guide effective entries for this direction;
  // guide_norm2: per-guide squared in-guide gain norms (uplink noise weights)
  virtual void set_waveguide(const arma::cx_mat& gains,
                             const arma::vec& guide_norm2, arma::uword m) = 0;

  // Sum-rate when the scanned guide's column is u with in-guide norm^2 g2.
  virtual double rate(const arma::cx_vec& u, double g2) const = 0;

  // Diagnostics surfaced in the sweep trace.
  virtual arma::uword clamp_events() const { return 0; }
  virtual bool used_direct_fallback() const { return false; }
};

std::unique_ptr<ElementwiseObjective> make_objective(Link link, Scheme scheme,
                                                     const ScenarioConfig& cfg);

}  // namespace passim
