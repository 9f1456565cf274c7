// SPDX-License-Identifier: Apache-2.0
//
// passim: simulation and position optimization for pinching-antenna systems
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "passim/selftest.hpp"

#include <armadillo>
#include <functional>

#include "passim/channel.hpp"
#include "passim/downlink.hpp"
#include "passim/optimizer.hpp"
#include "passim/rank_one.hpp"
#include "passim/uplink.hpp"

namespace passim {

namespace {

struct Instance {
  Scenario sc;
  UserSet users;
  PinchingLayout layout;
};

Instance random_instance(std::uint64_t seed) {
  const ScenarioConfig cfg = resolve_config();
  Instance inst{make_scenario(cfg), {}, {}};
  Rng rng(seed);
  inst.users = draw_users(cfg, rng);
  inst.layout = init_layout(inst.sc, rng);
  return inst;
}

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

arma::cx_mat random_cx(arma::uword rows, arma::uword cols, Rng& rng) {
  arma::cx_mat out(rows, cols);
  for (auto& v : out) v = cx{rng.uniform(-1, 1), rng.uniform(-1, 1)};
  return out;
}

// Compare the element-wise objective against a rebuilt-channel evaluation at
// random candidate positions.
bool objective_matches_pipeline(Link link, Scheme scheme, std::uint64_t seed,
                                int candidates, double tol,
                                bool argmax_only = false) {
  Instance inst = random_instance(seed);
  const ScenarioConfig& cfg = inst.sc.cfg;
  Rng rng(seed ^ 0x9e3779b97f4a7c15ull);

  auto objective = make_objective(link, scheme, cfg);
  EffectiveChannel ch =
      effective_channel(inst.users, inst.layout, inst.sc, link);
  const arma::vec att_sums =
      link == Link::uplink
          ? ch.guide_norm2
          : arma::vec(ch.guide_norm2 * static_cast<double>(cfg.pas_per_guide));

  const arma::uword m = 1 % cfg.num_guides;
  const arma::uword n = 2 % cfg.pas_per_guide;
  objective->set_waveguide(ch.gains, att_sums, m);

  const GuideEvaluator guide(inst.users, inst.sc, m, link);
  const GuideEvaluator zeta_guide(inst.users, inst.sc, m, Link::uplink);
  arma::cx_vec base(cfg.num_users, arma::fill::zeros), coef;
  double base_att = 0;
  for (arma::uword n2 = 0; n2 < cfg.pas_per_guide; ++n2) {
    if (n2 == n) continue;
    guide.coefficients(inst.layout.x(m, n2), coef);
    base += coef;
    base_att += zeta_guide.attenuation(inst.layout.x(m, n2));
  }

  const auto draw_candidate = [&]() {
    while (true) {
      const double x = inst.sc.feed_x(m) + rng.uniform() * cfg.usable_len;
      bool ok = true;
      for (arma::uword n2 = 0; n2 < cfg.pas_per_guide; ++n2) {
        if (n2 != n &&
            std::abs(x - inst.layout.x(m, n2)) < cfg.min_spacing) {
          ok = false;
          break;
        }
      }
      if (ok) return x;
    }
  };

  double best_fast = -1e300, best_direct = -1e300;
  int best_fast_at = -1, best_direct_at = -1;
  for (int c = 0; c < candidates; ++c) {
    const double x = draw_candidate();
    guide.coefficients(x, coef);
    const arma::cx_vec u = base + coef;
    const double fast =
        objective->rate(u, base_att + zeta_guide.attenuation(x));

    PinchingLayout moved = inst.layout;
    moved.x(m, n) = x;
    const EffectiveChannel full =
        effective_channel(inst.users, moved, inst.sc, link);
    double direct = 0;
    if (link == Link::downlink) {
      direct = dl_sum_rate_direct(full.H, scheme, cfg.power_dl_w, cfg.noise_w);
    } else {
      const arma::vec powers(cfg.num_users,
                             arma::fill::value(cfg.power_ul_w));
      direct = ul_sum_rate_direct(full.H, scheme, powers,
                                  noise_cov_diag(full, cfg.noise_w));
    }
    if (fast > best_fast) {
      best_fast = fast;
      best_fast_at = c;
    }
    if (direct > best_direct) {
      best_direct = direct;
      best_direct_at = c;
    }
    if (!argmax_only && rel_err(fast, direct) > tol) return false;
  }
  if (argmax_only) return best_fast_at == best_direct_at;
  return true;
}

}  // namespace

int run_selftest(std::ostream& out) {
  int failures = 0;
  const auto check = [&](const std::string& name,
                         const std::function<bool()>& fn) {
    bool ok = false;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      out << "[fail] " << name << " (exception: " << e.what() << ")\n";
      ++failures;
      return;
    }
    out << (ok ? "[ ok ] " : "[fail] ") << name << '\n';
    if (!ok) ++failures;
  };

  check("sherman-morrison matches direct inversion", [] {
    Rng rng(7);
    for (int it = 0; it < 25; ++it) {
      const arma::uword k = 2 + static_cast<arma::uword>(rng.uniform() * 6);
      const arma::cx_mat b = random_cx(k, k, rng);
      const arma::cx_mat base =
          b * b.t() + arma::eye<arma::cx_mat>(k, k);
      const arma::cx_vec u = random_cx(k, 1, rng);
      const CachedInverse cache = make_cached_inverse(base);
      const arma::cx_mat got = sherman_morrison_apply(cache, u, 1.0);
      const arma::cx_mat want = arma::inv(base + u * u.t());
      if (arma::norm(got - want, "fro") / arma::norm(want, "fro") > 1e-9)
        return false;
    }
    return true;
  });

  check("rank-1 trace update matches direct trace", [] {
    Rng rng(11);
    for (int it = 0; it < 25; ++it) {
      const arma::uword k = 2 + static_cast<arma::uword>(rng.uniform() * 6);
      const arma::cx_mat b = random_cx(k, k, rng);
      const arma::cx_mat base = b * b.t() + arma::eye<arma::cx_mat>(k, k);
      const arma::cx_vec u = random_cx(k, 1, rng);
      const CachedInverse cache = make_cached_inverse(base, true);
      const double got = trace_inverse_rank1(cache, u);
      const double want =
          arma::trace(arma::inv(arma::cx_mat(base + u * u.t()))).real();
      if (rel_err(got, want) > 1e-9) return false;
    }
    return true;
  });

  check("woodbury reduction matches direct inversion", [] {
    Rng rng(13);
    for (int it = 0; it < 25; ++it) {
      const arma::cx_mat h = random_cx(3, 5, rng);
      const double rho = 0.5 + rng.uniform() * 4.0;
      const arma::cx_mat got = woodbury_m(h, rho);
      const arma::cx_mat want = arma::inv(
          arma::cx_mat(rho * h.t() * h + arma::eye<arma::cx_mat>(5, 5)));
      if (arma::norm(got - want, "fro") / arma::norm(want, "fro") > 1e-9)
        return false;
    }
    return true;
  });

  check("closed-form downlink SINRs match the general form", [] {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const Instance inst = random_instance(seed);
      const ScenarioConfig& cfg = inst.sc.cfg;
      const EffectiveChannel ch =
          effective_channel(inst.users, inst.layout, inst.sc, Link::downlink);
      const arma::vec noise(cfg.num_users, arma::fill::value(cfg.noise_w));
      for (const Scheme scheme :
           {Scheme::matched, Scheme::zero_forcing, Scheme::mmse}) {
        const DlBeamformer bf =
            make_dl_beamformer(ch.H, scheme, cfg.power_dl_w, cfg.noise_w);
        const arma::vec general = sinr_dl_direct(ch.H, bf.W, noise);
        arma::vec closed;
        if (scheme == Scheme::matched)
          closed = sinr_dl_mrt(ch.H, cfg.power_dl_w, noise);
        else if (scheme == Scheme::zero_forcing)
          closed = sinr_dl_zf(ch.H, cfg.power_dl_w, noise);
        else
          closed = sinr_dl_mmse(ch.H, cfg.power_dl_w, cfg.noise_w);
        for (arma::uword k = 0; k < cfg.num_users; ++k)
          if (rel_err(closed(k), general(k)) > 1e-10) return false;
      }
    }
    return true;
  });

  check("closed-form uplink SINRs match the general form", [] {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const Instance inst = random_instance(seed);
      const ScenarioConfig& cfg = inst.sc.cfg;
      const EffectiveChannel ch =
          effective_channel(inst.users, inst.layout, inst.sc, Link::uplink);
      const arma::vec powers(cfg.num_users, arma::fill::value(cfg.power_ul_w));
      const arma::vec noise_diag = noise_cov_diag(ch, cfg.noise_w);
      const arma::vec mrc_closed = sinr_ul_mrc(ch.H, powers, noise_diag);
      const arma::vec mrc_general =
          sinr_ul_direct(ch.H, mrc_combiner(ch.H).V, powers, noise_diag);
      const arma::vec zf_closed = sinr_ul_zf(ch.H, powers, noise_diag);
      const arma::vec zf_general =
          sinr_ul_direct(ch.H, zf_combiner(ch.H).V, powers, noise_diag);
      for (arma::uword k = 0; k < cfg.num_users; ++k) {
        if (rel_err(mrc_closed(k), mrc_general(k)) > 1e-10) return false;
        if (rel_err(zf_closed(k), zf_general(k)) > 1e-10) return false;
      }
      const arma::vec det_rates = ul_rate_mmse_det(ch.H, powers, noise_diag);
      const arma::vec red_rates =
          ul_rate_mmse_reduced(ch.H, powers, noise_diag);
      for (arma::uword k = 0; k < cfg.num_users; ++k)
        if (rel_err(det_rates(k), red_rates(k)) > 1e-8) return false;
    }
    return true;
  });

  const double tol = 1e-8;
  check("downlink MRT objective matches full pipeline", [&] {
    return objective_matches_pipeline(Link::downlink, Scheme::matched, 21, 25,
                                      tol);
  });
  check("downlink ZF objective matches full pipeline", [&] {
    return objective_matches_pipeline(Link::downlink, Scheme::zero_forcing, 22,
                                      25, tol);
  });
  check("downlink MMSE objective matches full pipeline", [&] {
    return objective_matches_pipeline(Link::downlink, Scheme::mmse, 23, 25,
                                      tol);
  });
  check("uplink MRC objective matches full pipeline", [&] {
    return objective_matches_pipeline(Link::uplink, Scheme::matched, 24, 25,
                                      tol);
  });
  check("uplink ZF objective matches full pipeline", [&] {
    return objective_matches_pipeline(Link::uplink, Scheme::zero_forcing, 25,
                                      25, tol);
  });
  check("uplink MMSE objective matches full pipeline", [&] {
    return objective_matches_pipeline(Link::uplink, Scheme::mmse, 26, 25, tol);
  });

  check("beamformer power equality and ZF nulling", [] {
    for (std::uint64_t seed = 31; seed <= 35; ++seed) {
      const Instance inst = random_instance(seed);
      const ScenarioConfig& cfg = inst.sc.cfg;
      const EffectiveChannel ch =
          effective_channel(inst.users, inst.layout, inst.sc, Link::downlink);
      for (const Scheme scheme :
           {Scheme::matched, Scheme::zero_forcing, Scheme::mmse}) {
        const DlBeamformer bf =
            make_dl_beamformer(ch.H, scheme, cfg.power_dl_w, cfg.noise_w);
        const double tx = std::pow(arma::norm(bf.W, "fro"), 2);
        if (rel_err(tx, cfg.power_dl_w) > 1e-10) return false;
      }
      const DlBeamformer zf =
          zf_beamformer(ch.H, cfg.power_dl_w);
      const arma::cx_mat prod = ch.H * zf.W;
      double max_diag = 0, max_off = 0;
      for (arma::uword i = 0; i < prod.n_rows; ++i) {
        for (arma::uword j = 0; j < prod.n_cols; ++j) {
          if (i == j)
            max_diag = std::max(max_diag, std::abs(prod(i, j)));
          else
            max_off = std::max(max_off, std::abs(prod(i, j)));
        }
      }
      if (max_off > 1e-9 * max_diag) return false;
    }
    return true;
  });

  check("sweep objective trace is monotone", [] {
    const ScenarioConfig cfg = [] {
      ConfigOverrides ov;
      ov.search_points = 200;
      return resolve_config(ov);
    }();
    const Scenario sc = make_scenario(cfg);
    Rng rng(77);
    const UserSet users = draw_users(cfg, rng);
    const PinchingLayout layout = init_layout(sc, rng);
    const SweepResult res =
        run_sweep(sc, users, Link::downlink, Scheme::mmse, layout);
    for (std::size_t i = 1; i < res.trace.objective.size(); ++i) {
      const double prev = res.trace.objective[i - 1];
      if (res.trace.objective[i] < prev - 1e-12 * std::max(1.0, prev))
        return false;
    }
    return layout_feasible(res.layout, cfg.min_spacing, cfg.usable_len);
  });

  out << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
  return failures;
}

}  // namespace passim
