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
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "passim/channel.hpp"
#include "passim/objective.hpp"
#include "passim/scenario.hpp"

namespace passim {

// ---------------------------------------------------------------------------
// Candidate grid: N_s uniform samples per guide spanning the usable length.

struct CandidateGrid {
  arma::vec origin;        // per-guide feed position
  double step = 0;         // sample pitch L / (N_s - 1)
  arma::uword count = 0;   // N_s

  double position(arma::uword m, arma::uword i) const {
    return origin(m) + step * static_cast<double>(i);
  }
};

CandidateGrid build_grid(const Scenario& sc);

// Inclusive, merged index ranges blocked by the minimum-spacing constraint
// against every other PA on the guide.
struct ExclusionSet {
  std::vector<std::pair<std::int64_t, std::int64_t>> blocked;

  bool excluded(std::int64_t i) const;
  std::size_t blocked_count(std::int64_t grid_count) const;
};

ExclusionSet exclusion_indices(const CandidateGrid& grid,
                               const PinchingLayout& layout, arma::uword m,
                               arma::uword n, double min_spacing);

// ---------------------------------------------------------------------------
// Single-PA update: argmax of the objective over the feasible candidates plus
// the incumbent. Moves only on strict improvement over the incumbent value;
// ties between candidates resolve toward the smallest index.

struct UpdateOutcome {
  double position = 0;
  double objective = 0;
  bool moved = false;
  arma::uword skipped = 0;  // candidates whose evaluation failed
};

UpdateOutcome update_position(const std::function<double(double)>& objective,
                              const CandidateGrid& grid, arma::uword m,
                              const ExclusionSet& excl, double incumbent_pos,
                              double incumbent_obj);

// ---------------------------------------------------------------------------

struct SweepTrace {
  // Objective value (bit/s/Hz) after every single-PA update; entry 0 is the
  // initial layout's value. Non-decreasing by construction.
  std::vector<double> objective;
  arma::uword sweeps = 0;
  bool converged = false;
  arma::uword clamp_events = 0;
  bool zf_fallback = false;
  arma::uword skipped_candidates = 0;
  double wall_time_s = 0;

  double initial() const { return objective.empty() ? 0.0 : objective.front(); }
  double final_objective() const {
    return objective.empty() ? 0.0 : objective.back();
  }
};

struct SweepResult {
  PinchingLayout layout;
  SweepTrace trace;
  arma::cx_mat weights;  // final baseband beamformer / combiner, M x K
  arma::vec sinr;        // K, from the direct evaluation
  double sum_rate = 0;   // direct full-pipeline value at the final layout
};

// Element-wise sequential optimization: sweeps over guides (rebuilding the
// per-guide caches) and PAs (1-D search) until the per-sweep fractional gain
// drops below rel_tol or max_sweeps is hit. The final baseband stage is
// computed once at the end.
SweepResult run_sweep(const Scenario& sc, const UserSet& users, Link link,
                      Scheme scheme, const PinchingLayout& init);

// Random feasible layout: sequential uniform draws with Delta rejection and
// an equispaced fallback after 100 N rejected draws per guide.
PinchingLayout init_layout(const Scenario& sc, Rng& rng);

}  // namespace passim
