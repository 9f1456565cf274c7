// SPDX-License-Identifier: Apache-2.0
//
// passim: simulation and position optimization for pinching-antenna systems
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Acceptance suite: one criterion per block, one pass/fail line each. Every
// tolerance is pinned here in code; the process exits non-zero when any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "passim/experiment.hpp"
#include "passim/hmimo.hpp"
#include "passim/rank_one.hpp"

using namespace passim;
using test::rel_err;

namespace {

int g_failures = 0;

void report(int idx, const std::string& name, bool ok,
            const std::string& detail) {
  std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", idx,
              name.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6g", v);
  return buffer;
}

// Mean PASS sum-rate over seeded trials through the experiment harness.
std::vector<ResultRow> harness_rows(Link direction,
                                    const std::vector<Scheme>& schemes,
                                    const std::vector<SystemKind>& systems,
                                    arma::uword trials, arma::uword n_s,
                                    double power_dbm) {
  ExperimentPlan plan;
  plan.var = SweepVar::power;
  plan.values = {power_dbm};
  plan.direction = direction;
  plan.schemes = schemes;
  plan.systems = systems;
  plan.trials = trials;
  plan.base_seed = 1;
  plan.base.search_points = n_s;
  return run_plan(plan);
}

double row_mean(const std::vector<ResultRow>& rows, const std::string& scheme,
                const std::string& system) {
  for (const ResultRow& row : rows)
    if (row.scheme == scheme && row.system == system) return row.mean_sumrate;
  throw std::logic_error("row not found");
}

// ---------------------------------------------------------------------------

// 1. Element-wise objectives vs full-pipeline rebuilds: 100 random instances
//    per objective at M=5, N=6, K=4, rel err <= 1e-8 (argmax equivalence is
//    additionally checked for the uplink MMSE criterion).
void criterion_oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  double worst = 0;
  for (const Link link : {Link::downlink, Link::uplink}) {
    for (const Scheme scheme :
         {Scheme::matched, Scheme::zero_forcing, Scheme::mmse}) {
      Rng rng(1000 + static_cast<std::uint64_t>(scheme) +
              (link == Link::uplink ? 10 : 0));
      for (int instance = 0; instance < 100; ++instance) {
        const test::Instance inst =
            test::make_instance(500 + static_cast<std::uint64_t>(instance));
        const arma::uword m = instance % 5;
        const arma::uword n = instance % 6;
        const test::ObjectiveProbe probe(inst, link, scheme, m, n);
        double fast_best = -1e300, direct_best = -1e300;
        int fast_at = -1, direct_at = -1;
        for (int c = 0; c < 6; ++c) {
          const double x = test::random_candidate(inst, m, n, rng);
          const double fast = probe.fast_rate(x);
          const double direct = probe.direct_rate(x);
          worst = std::max(worst, rel_err(fast, direct));
          if (rel_err(fast, direct) > 1e-8) ok = false;
          if (fast > fast_best) {
            fast_best = fast;
            fast_at = c;
          }
          if (direct > direct_best) {
            direct_best = direct;
            direct_at = c;
          }
        }
        if (link == Link::uplink && scheme == Scheme::mmse &&
            fast_at != direct_at)
          ok = false;
      }
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  report(1, "objective/full-pipeline agreement (rel err <= 1e-8)",
         ok && secs < 60.0,
         "worst rel err " + fmt(worst) + ", " + fmt(secs) + " s");
}

// 2. Rank-1 kernels vs direct inversion: 1000 instances up to K=8,
//    rel err <= 1e-9.
void criterion_rank_one() {
  Rng rng(2024);
  bool ok = true;
  double worst = 0;
  for (int it = 0; it < 1000; ++it) {
    const arma::uword k = 2 + static_cast<arma::uword>(rng.uniform() * 7);
    const arma::cx_mat base = test::random_hpd(k, rng);
    const arma::cx_vec u = test::random_cx_vec(k, rng);
    const double scale = rng.uniform(0.05, 2.0);

    const CachedInverse cache = make_cached_inverse(base, it % 3 == 0);
    const arma::cx_mat sm = sherman_morrison_apply(cache, u, scale);
    const arma::cx_mat sm_want =
        arma::inv(arma::cx_mat(base + scale * u * u.t()));
    worst = std::max(worst, rel_err(sm, sm_want));

    const double tr = trace_inverse_rank1(cache, u);
    const double tr_want =
        arma::trace(arma::inv(arma::cx_mat(base + u * u.t()))).real();
    worst = std::max(worst, rel_err(tr, tr_want));

    const arma::uword chains = k + 1 + static_cast<arma::uword>(rng.uniform() * 3);
    const arma::cx_mat h = test::random_cx(k, chains, rng);
    const double rho = rng.uniform(0.05, 2.0);
    const arma::cx_mat wm = woodbury_m(h, rho);
    const arma::cx_mat wm_want = arma::inv(arma::cx_mat(
        rho * h.t() * h + arma::eye<arma::cx_mat>(chains, chains)));
    worst = std::max(worst, rel_err(wm, wm_want));

    if (worst > 1e-9) {
      ok = false;
      break;
    }
  }
  report(2, "rank-1 kernel suite vs direct inversion (rel err <= 1e-9)", ok,
         "worst rel err " + fmt(worst));
}

// 3. Closed-form SINRs vs general substitution (rel err <= 1e-10);
//    Sylvester determinant self-consistency (rel err <= 1e-8).
void criterion_closed_forms() {
  bool ok = true;
  double worst_sinr = 0, worst_det = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const test::Instance inst = test::make_instance(seed);
    const ScenarioConfig& cfg = inst.sc.cfg;

    const EffectiveChannel dl =
        effective_channel(inst.users, inst.layout, inst.sc, Link::downlink);
    const arma::vec noise(cfg.num_users, arma::fill::value(cfg.noise_w));
    for (const Scheme scheme :
         {Scheme::matched, Scheme::zero_forcing, Scheme::mmse}) {
      const DlBeamformer bf =
          make_dl_beamformer(dl.H, scheme, cfg.power_dl_w, cfg.noise_w);
      const arma::vec general = sinr_dl_direct(dl.H, bf.W, noise);
      arma::vec closed;
      if (scheme == Scheme::matched)
        closed = sinr_dl_mrt(dl.H, cfg.power_dl_w, noise);
      else if (scheme == Scheme::zero_forcing)
        closed = sinr_dl_zf(dl.H, cfg.power_dl_w, noise);
      else
        closed = sinr_dl_mmse(dl.H, cfg.power_dl_w, cfg.noise_w);
      for (arma::uword k = 0; k < cfg.num_users; ++k)
        worst_sinr = std::max(worst_sinr, rel_err(closed(k), general(k)));
    }

    const EffectiveChannel ul =
        effective_channel(inst.users, inst.layout, inst.sc, Link::uplink);
    const arma::vec powers(cfg.num_users, arma::fill::value(cfg.power_ul_w));
    const arma::vec noise_diag = noise_cov_diag(ul, cfg.noise_w);
    {
      const arma::vec closed = sinr_ul_mrc(ul.H, powers, noise_diag);
      const arma::vec general =
          sinr_ul_direct(ul.H, mrc_combiner(ul.H).V, powers, noise_diag);
      for (arma::uword k = 0; k < cfg.num_users; ++k)
        worst_sinr = std::max(worst_sinr, rel_err(closed(k), general(k)));
    }
    {
      const arma::vec closed = sinr_ul_zf(ul.H, powers, noise_diag);
      const arma::vec general =
          sinr_ul_direct(ul.H, zf_combiner(ul.H).V, powers, noise_diag);
      for (arma::uword k = 0; k < cfg.num_users; ++k)
        worst_sinr = std::max(worst_sinr, rel_err(closed(k), general(k)));
    }
    {
      const arma::vec det_rates = ul_rate_mmse_det(ul.H, powers, noise_diag);
      const arma::vec red_rates =
          ul_rate_mmse_reduced(ul.H, powers, noise_diag);
      const arma::vec sinr = sinr_ul_direct(
          ul.H, mmse_combiner(ul.H, powers, noise_diag).V, powers, noise_diag);
      for (arma::uword k = 0; k < cfg.num_users; ++k) {
        worst_det = std::max(worst_det, rel_err(det_rates(k), red_rates(k)));
        worst_det = std::max(
            worst_det, rel_err(det_rates(k), std::log2(1.0 + sinr(k))));
      }
    }
  }
  ok = worst_sinr <= 1e-10 && worst_det <= 1e-8;
  report(3, "closed-form SINR/determinant suite", ok,
         "worst SINR rel err " + fmt(worst_sinr) + ", worst det rel err " +
             fmt(worst_det));
}

// 4. Constraints: power equality <= 1e-10, ZF nulling <= 1e-9, optimizer
//    output layouts feasible.
void criterion_constraints() {
  bool ok = true;
  double worst_power = 0, worst_null = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const test::Instance inst = test::make_instance(seed);
    const ScenarioConfig& cfg = inst.sc.cfg;
    const EffectiveChannel ch =
        effective_channel(inst.users, inst.layout, inst.sc, Link::downlink);
    for (const Scheme scheme :
         {Scheme::matched, Scheme::zero_forcing, Scheme::mmse}) {
      const DlBeamformer bf =
          make_dl_beamformer(ch.H, scheme, cfg.power_dl_w, cfg.noise_w);
      worst_power = std::max(
          worst_power, rel_err(std::pow(arma::norm(bf.W, "fro"), 2),
                               cfg.power_dl_w));
    }
    const DlBeamformer zf = zf_beamformer(ch.H, cfg.power_dl_w);
    const arma::cx_mat prod = ch.H * zf.W;
    double max_diag = 0, max_off = 0;
    for (arma::uword i = 0; i < prod.n_rows; ++i)
      for (arma::uword j = 0; j < prod.n_cols; ++j) {
        if (i == j)
          max_diag = std::max(max_diag, std::abs(prod(i, j)));
        else
          max_off = std::max(max_off, std::abs(prod(i, j)));
      }
    worst_null = std::max(worst_null, max_off / max_diag);
  }
  if (worst_power > 1e-10 || worst_null > 1e-9) ok = false;

  // optimizer outputs stay feasible
  ConfigOverrides fast;
  fast.search_points = 400;
  for (std::uint64_t seed = 1; seed <= 6 && ok; ++seed) {
    const test::Instance inst = test::make_instance(seed, fast);
    for (const Link link : {Link::downlink, Link::uplink}) {
      const SweepResult res =
          run_sweep(inst.sc, inst.users, link, Scheme::mmse, inst.layout);
      if (!layout_feasible(res.layout, inst.sc.cfg.min_spacing,
                           inst.sc.cfg.usable_len))
        ok = false;
    }
  }
  report(4, "power equality, ZF nulling, layout feasibility", ok,
         "worst power rel err " + fmt(worst_power) + ", worst nulling ratio " +
             fmt(worst_null));
}

// 5. Monotone objective trace per update, slack 1e-12, 50 seeded runs.
void criterion_monotone_trace() {
  bool ok = true;
  double worst_drop = 0;
  ConfigOverrides fast;
  fast.search_points = 300;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const test::Instance inst = test::make_instance(seed, fast);
    const Link link = seed % 2 == 0 ? Link::downlink : Link::uplink;
    const Scheme scheme = seed % 3 == 0   ? Scheme::matched
                          : seed % 3 == 1 ? Scheme::zero_forcing
                                          : Scheme::mmse;
    const SweepResult res =
        run_sweep(inst.sc, inst.users, link, scheme, inst.layout);
    for (std::size_t i = 1; i < res.trace.objective.size(); ++i) {
      const double prev = res.trace.objective[i - 1];
      const double drop = prev - res.trace.objective[i];
      worst_drop = std::max(worst_drop, drop);
      if (drop > 1e-12 * std::max(1.0, std::abs(prev))) ok = false;
    }
  }
  report(5, "monotone sweep trace (slack 1e-12, 50 runs)", ok,
         "worst drop " + fmt(worst_drop));
}

// 6. PASS ZF within 5% of PASS MMSE, both directions (N_s = 1e3, 50 seeds,
//    0 dBm).
void criterion_zf_close_to_mmse() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (const Link link : {Link::downlink, Link::uplink}) {
    const auto rows = harness_rows(
        link, {Scheme::zero_forcing, Scheme::mmse}, {SystemKind::pass}, 50,
        1000, 0.0);
    const double zf = row_mean(rows, "zf", "pass");
    const double mmse = row_mean(rows, "mmse", "pass");
    const double gap = std::abs(zf - mmse) / mmse;
    if (gap > 0.05) ok = false;
    detail += link_label(link) + " gap " + fmt(100 * gap) + "% ";
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  report(6, "PASS ZF within 5% of PASS MMSE", ok, detail + fmt(secs) + " s");
}

// 7. PASS beats the fixed-array baseline: mean gain >= 20% and per-seed wins
//    >= 95% for all six direction/scheme pairs (N_s = 1e3, 50 seeds, 0 dBm).
void criterion_pass_beats_baseline() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  const arma::uword trials = 50;
  for (const Link link : {Link::downlink, Link::uplink}) {
    for (const Scheme scheme :
         {Scheme::matched, Scheme::zero_forcing, Scheme::mmse}) {
      // trial-paired comparison: same seed, same users for both systems
      ExperimentPlan plan;
      plan.values = {0.0};
      plan.direction = link;
      plan.schemes = {scheme};
      plan.systems = {SystemKind::pass};
      plan.trials = trials;
      plan.base.search_points = 1000;

      arma::vec pass_rates(trials), base_rates(trials);
      for (arma::uword t = 0; t < trials; ++t) {
        const ScenarioConfig cfg = config_for(plan, 0.0);
        const Scenario sc = make_scenario(cfg);
        Rng rng(plan.base_seed + t);
        const UserSet users = draw_users(cfg, rng);
        const PinchingLayout layout = init_layout(sc, rng);
        pass_rates(t) =
            run_sweep(sc, users, link, scheme, layout).sum_rate;
        base_rates(t) = baseline_sum_rate(sc, users, link, scheme);
      }
      const double gain =
          arma::mean(pass_rates) / arma::mean(base_rates) - 1.0;
      const double wins =
          static_cast<double>(arma::accu(pass_rates > base_rates)) /
          static_cast<double>(trials);
      if (gain < 0.20 || wins < 0.95) ok = false;
      detail += link_label(link) + "/" + scheme_label(scheme, link) + " +" +
                fmt(100 * gain) + "% w" + fmt(100 * wins) + "% ";
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  report(7, "PASS > hMIMO baseline (>= 20% mean, >= 95% per-seed)", ok,
         detail + fmt(secs) + " s");
}

// 8. Matched-filter high-power trends: mean PASS-MRT downlink at 30 dBm below
//    10 dBm; uplink MRC rise-then-fall over {-20, 0, 20} dBm (50 seeds).
void criterion_matched_filter_power_trend() {
  const auto t0 = std::chrono::steady_clock::now();
  const arma::uword trials = 50;

  const auto mean_rate = [&](Link link, double power_dbm) {
    const auto rows = harness_rows(link, {Scheme::matched},
                                   {SystemKind::pass}, trials, 1000,
                                   power_dbm);
    return row_mean(rows, link == Link::downlink ? "mrt" : "mrc", "pass");
  };

  const double mrt10 = mean_rate(Link::downlink, 10.0);
  const double mrt30 = mean_rate(Link::downlink, 30.0);
  const bool mrt_declines = mrt30 < mrt10;

  const double mrc_lo = mean_rate(Link::uplink, -20.0);
  const double mrc_mid = mean_rate(Link::uplink, 0.0);
  const double mrc_hi = mean_rate(Link::uplink, 20.0);
  const bool rise_then_fall = mrc_mid > mrc_lo && mrc_hi < mrc_mid;

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  report(8, "matched-filter high-power decline",
         mrt_declines && rise_then_fall,
         "MRT dl 10/30 dBm: " + fmt(mrt10) + "/" + fmt(mrt30) +
             "; MRC ul -20/0/20 dBm: " + fmt(mrc_lo) + "/" + fmt(mrc_mid) +
             "/" + fmt(mrc_hi) + "; " + fmt(secs) + " s");
}

// 9. Resolution saturation: MMSE downlink mean gain from N_s = 1e4 to 1e5 at
//    most 2% (30 seeds).
void criterion_resolution_saturation() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto mean_at = [&](arma::uword n_s) {
    const auto rows = harness_rows(Link::downlink, {Scheme::mmse},
                                   {SystemKind::pass}, 30, n_s, 0.0);
    return row_mean(rows, "mmse", "pass");
  };
  const double at_1e4 = mean_at(10000);
  const double at_1e5 = mean_at(100000);
  const double gain = at_1e5 / at_1e4 - 1.0;
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  report(9, "resolution saturation (1e4 -> 1e5 gain <= 2%)", gain <= 0.02,
         fmt(at_1e4) + " -> " + fmt(at_1e5) + " (+" + fmt(100 * gain) +
             "%), " + fmt(secs) + " s");
}

// 10. Determinism: repeated default-plan runs emit identical CSV bytes.
void criterion_determinism() {
  ExperimentPlan plan = parse_plan("N_s = 500\n");
  plan.trials = 5;
  const std::string a = to_csv(run_plan(plan, 2));
  const std::string b = to_csv(run_plan(plan, 1));
  const std::string c = to_csv(run_plan(plan, 2));
  report(10, "byte-identical CSV across repeated runs", a == b && b == c, "");
}

}  // namespace

int main() {
  criterion_oracle_equivalence();
  criterion_rank_one();
  criterion_closed_forms();
  criterion_constraints();
  criterion_monotone_trace();
  criterion_zf_close_to_mmse();
  criterion_pass_beats_baseline();
  criterion_matched_filter_power_trend();
  criterion_resolution_saturation();
  criterion_determinism();

  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  return 1;
}
