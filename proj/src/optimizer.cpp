// SPDX-License-Identifier: Apache-2.0
//
// passim: simulation and position optimization for pinching-antenna systems
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "passim/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <limits>

#include "passim/downlink.hpp"
#include "passim/uplink.hpp"

namespace passim {

// ---------------------------------------------------------------------------
// Grid and exclusion

CandidateGrid build_grid(const Scenario& sc) {
  if (sc.cfg.search_points < 2)
    throw invalid_config_error("N_s: must be at least 2");
  CandidateGrid grid;
  grid.origin = sc.feed_x;
  grid.count = sc.cfg.search_points;
  grid.step =
      sc.cfg.usable_len / static_cast<double>(sc.cfg.search_points - 1);
  return grid;
}

bool ExclusionSet::excluded(std::int64_t i) const {
  for (const auto& [lo, hi] : blocked)
    if (i >= lo && i <= hi) return true;
  return false;
}

std::size_t ExclusionSet::blocked_count(std::int64_t grid_count) const {
  std::size_t total = 0;
  for (const auto& [lo, hi] : blocked) {
    const std::int64_t a = std::max<std::int64_t>(lo, 0);
    const std::int64_t b = std::min<std::int64_t>(hi, grid_count - 1);
    if (b >= a) total += static_cast<std::size_t>(b - a + 1);
  }
  return total;
}

ExclusionSet exclusion_indices(const CandidateGrid& grid,
                               const PinchingLayout& layout, arma::uword m,
                               arma::uword n, double min_spacing) {
  ExclusionSet excl;
  const double origin = grid.origin(m);
  for (arma::uword n2 = 0; n2 < layout.pas_per_guide(); ++n2) {
    if (n2 == n) continue;
    const double off = layout.x(m, n2) - origin;
    const auto lo = static_cast<std::int64_t>(
        std::floor((off - min_spacing) / grid.step));
    const auto hi =
        static_cast<std::int64_t>(std::ceil((off + min_spacing) / grid.step));
    excl.blocked.emplace_back(lo, hi);
  }
  std::sort(excl.blocked.begin(), excl.blocked.end());
  // merge overlapping ranges
  std::vector<std::pair<std::int64_t, std::int64_t>> merged;
  for (const auto& range : excl.blocked) {
    if (!merged.empty() && range.first <= merged.back().second + 1)
      merged.back().second = std::max(merged.back().second, range.second);
    else
      merged.push_back(range);
  }
  excl.blocked = std::move(merged);
  return excl;
}

// ---------------------------------------------------------------------------
// Single-PA update

UpdateOutcome update_position(const std::function<double(double)>& objective,
                              const CandidateGrid& grid, arma::uword m,
                              const ExclusionSet& excl, double incumbent_pos,
                              double incumbent_obj) {
  UpdateOutcome out;
  out.position = incumbent_pos;
  out.objective = incumbent_obj;

  const auto count = static_cast<std::int64_t>(grid.count);
  std::size_t next_range = 0;
  for (std::int64_t i = 0; i < count; ++i) {
    while (next_range < excl.blocked.size() &&
           excl.blocked[next_range].second < i)
      ++next_range;
    if (next_range < excl.blocked.size() &&
        i >= excl.blocked[next_range].first &&
        i <= excl.blocked[next_range].second) {
      i = excl.blocked[next_range].second;  // skip the whole range
      continue;
    }
    const double x = grid.position(m, static_cast<arma::uword>(i));
    const double value = objective(x);
    if (std::isnan(value)) {
      ++out.skipped;
      continue;
    }
    if (value > out.objective) {
      out.objective = value;
      out.position = x;
      out.moved = true;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Layout initialization

PinchingLayout init_layout(const Scenario& sc, Rng& rng) {
  const arma::uword guides = sc.cfg.num_guides;
  const arma::uword pas = sc.cfg.pas_per_guide;
  const double len = sc.cfg.usable_len;

  PinchingLayout layout;
  layout.x.set_size(guides, pas);
  layout.feed_x = sc.feed_x;
  layout.guide_y = sc.guide_y;
  layout.height = sc.cfg.height;

  for (arma::uword m = 0; m < guides; ++m) {
    const double origin = sc.feed_x(m);
    arma::uword placed = 0;
    arma::uword rejections = 0;
    const arma::uword budget = 100 * pas;
    while (placed < pas && rejections <= budget) {
      const double candidate = origin + rng.uniform() * len;
      bool ok = true;
      for (arma::uword j = 0; j < placed; ++j) {
        if (std::abs(candidate - layout.x(m, j)) < sc.cfg.min_spacing) {
          ok = false;
          break;
        }
      }
      if (ok)
        layout.x(m, placed++) = candidate;
      else
        ++rejections;
    }
    if (placed < pas) {
      // equispaced fallback, always feasible given Delta (N-1) <= L
      if (pas == 1) {
        layout.x(m, 0) = origin + 0.5 * len;
      } else {
        const double step = len / static_cast<double>(pas - 1);
        for (arma::uword j = 0; j < pas; ++j)
          layout.x(m, j) = origin + step * static_cast<double>(j);
      }
    }
  }
  return layout;
}

// ---------------------------------------------------------------------------
// Element-wise sequential optimization

SweepResult run_sweep(const Scenario& sc, const UserSet& users, Link link,
                      Scheme scheme, const PinchingLayout& init) {
  const auto t_start = std::chrono::steady_clock::now();
  const ScenarioConfig& cfg = sc.cfg;
  require_feasible(init, cfg.min_spacing, cfg.usable_len);
  if (scheme == Scheme::zero_forcing && cfg.num_users > cfg.num_guides)
    throw scheme_infeasible_error(
        "zero-forcing needs at least as many RF chains as users");

  SweepResult result;
  result.layout = init;
  PinchingLayout& layout = result.layout;
  SweepTrace& trace = result.trace;

  auto objective = make_objective(link, scheme, cfg);
  const CandidateGrid grid = build_grid(sc);

  // Current per-guide effective columns and in-guide attenuation sums.
  EffectiveChannel ch = effective_channel(users, layout, sc, link);
  arma::cx_mat gains = std::move(ch.gains);
  // Uplink noise weights always use the uplink attenuation sums.
  arma::vec att_sums =
      link == Link::uplink
          ? ch.guide_norm2
          : arma::vec(ch.guide_norm2 * static_cast<double>(cfg.pas_per_guide));

  trace.objective.reserve(1 + cfg.max_sweeps * cfg.num_guides *
                                  cfg.pas_per_guide);
  objective->set_waveguide(gains, att_sums, 0);
  double last = objective->rate(gains.col(0), att_sums(0));
  trace.objective.push_back(last);

  arma::cx_vec base(cfg.num_users), pa_coef(cfg.num_users),
      candidate_col(cfg.num_users);

  for (arma::uword sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    const double sweep_start = last;
    for (arma::uword m = 0; m < cfg.num_guides; ++m) {
      objective->set_waveguide(gains, att_sums, m);
      const GuideEvaluator guide(users, sc, m, link);
      const GuideEvaluator zeta_guide(users, sc, m, Link::uplink);

      for (arma::uword n = 0; n < cfg.pas_per_guide; ++n) {
        // Candidate-independent remainder of the scanned guide's column.
        base.zeros();
        double base_att = 0;
        for (arma::uword n2 = 0; n2 < cfg.pas_per_guide; ++n2) {
          if (n2 == n) continue;
          guide.coefficients(layout.x(m, n2), pa_coef);
          base += pa_coef;
          base_att += zeta_guide.attenuation(layout.x(m, n2));
        }

        const ExclusionSet excl =
            exclusion_indices(grid, layout, m, n, cfg.min_spacing);

        bool retried = false;
        auto candidate_rate = [&](double x) -> double {
          guide.coefficients(x, candidate_col);
          candidate_col += base;
          const double att = base_att + zeta_guide.attenuation(x);
          try {
            return objective->rate(candidate_col, att);
          } catch (const singular_update_error&) {
            if (retried) return std::numeric_limits<double>::quiet_NaN();
            retried = true;
            objective->set_waveguide(gains, att_sums, m);
            try {
              return objective->rate(candidate_col, att);
            } catch (const singular_update_error&) {
              return std::numeric_limits<double>::quiet_NaN();
            }
          }
        };

        const UpdateOutcome outcome = update_position(
            candidate_rate, grid, m, excl, layout.x(m, n), last);
        trace.skipped_candidates += outcome.skipped;
        if (outcome.moved) {
          layout.x(m, n) = outcome.position;
          guide.coefficients(outcome.position, pa_coef);
          gains.col(m) = base + pa_coef;
          att_sums(m) = base_att + zeta_guide.attenuation(outcome.position);
          last = outcome.objective;
        }
        trace.objective.push_back(last);
      }
    }
    ++trace.sweeps;

    const double gain = last - sweep_start;
    if (gain / std::max(std::abs(sweep_start),
                        std::numeric_limits<double>::min()) <
        cfg.rel_tol) {
      trace.converged = true;
      break;
    }
  }

  trace.clamp_events = objective->clamp_events();
  trace.zf_fallback = objective->used_direct_fallback();

  // Final baseband stage and direct evaluation at the optimized layout.
  const EffectiveChannel final_ch = effective_channel(users, layout, sc, link);
  if (link == Link::downlink) {
    const DlBeamformer bf =
        make_dl_beamformer(final_ch.H, scheme, cfg.power_dl_w, cfg.noise_w);
    const arma::vec noise(cfg.num_users, arma::fill::value(cfg.noise_w));
    result.weights = bf.W;
    result.sinr = sinr_dl_direct(final_ch.H, bf.W, noise);
  } else {
    const arma::vec powers(cfg.num_users, arma::fill::value(cfg.power_ul_w));
    const arma::vec noise_diag = noise_cov_diag(final_ch, cfg.noise_w);
    const UlCombiner comb =
        make_ul_combiner(final_ch.H, scheme, powers, noise_diag);
    result.weights = comb.V;
    result.sinr = sinr_ul_direct(final_ch.H, comb.V, powers, noise_diag);
  }
  result.sum_rate = sum_rate(result.sinr);

  trace.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return result;
}

}  // namespace passim
