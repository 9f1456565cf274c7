// SPDX-License-Identifier: Apache-2.0
//
// passim: simulation and position optimization for pinching-antenna systems
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "passim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "passim/hmimo.hpp"
#include "passim/optimizer.hpp"

namespace passim {

std::string sweep_var_label(SweepVar var) {
  switch (var) {
    case SweepVar::power:
      return "power";
    case SweepVar::side_length:
      return "side_length";
    case SweepVar::num_pas:
      return "num_pas";
    case SweepVar::num_users:
      return "num_users";
    case SweepVar::resolution:
      return "search_resolution";
  }
  return "?";
}

SweepVar parse_sweep_var(const std::string& text) {
  if (text == "power") return SweepVar::power;
  if (text == "side_length" || text == "side-length")
    return SweepVar::side_length;
  if (text == "num_pas" || text == "pas") return SweepVar::num_pas;
  if (text == "num_users" || text == "users") return SweepVar::num_users;
  if (text == "search_resolution" || text == "resolution")
    return SweepVar::resolution;
  throw invalid_config_error("sweep_var: unknown variable '" + text + "'");
}

std::string system_label(SystemKind sys) {
  return sys == SystemKind::pass ? "pass" : "hmimo";
}

SystemKind parse_system(const std::string& text) {
  if (text == "pass") return SystemKind::pass;
  if (text == "hmimo") return SystemKind::hmimo;
  throw invalid_config_error("systems: unknown system '" + text + "'");
}

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  throw invalid_config_error("format: expected csv or json, got '" + text +
                             "'");
}

// ---------------------------------------------------------------------------
// Plan parsing: '#' comments, key = value (or key: value), comma lists.

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string current;
  for (const char c : value) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!current.empty()) items.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) items.push_back(current);
  return items;
}

double parse_number(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double parsed = 0;
  try {
    parsed = std::stod(value, &used);
  } catch (const std::exception&) {
    throw invalid_config_error(key + ": not a number: '" + value + "'");
  }
  if (used != value.size())
    throw invalid_config_error(key + ": not a number: '" + value + "'");
  return parsed;
}

arma::uword parse_count(const std::string& key, const std::string& value) {
  const double parsed = parse_number(key, value);
  if (parsed < 0 || parsed != std::floor(parsed))
    throw invalid_config_error(key + ": expected a non-negative integer, got '" +
                               value + "'");
  return static_cast<arma::uword>(parsed);
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw invalid_config_error(key + ": expected a boolean, got '" + value + "'");
}

}  // namespace

ExperimentPlan parse_plan(const std::string& text) {
  ExperimentPlan plan;
  bool values_given = false;
  std::istringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    auto sep = line.find('=');
    if (sep == std::string::npos) sep = line.find(':');
    if (sep == std::string::npos)
      throw invalid_config_error("plan: expected 'key = value', got '" + line +
                                 "'");
    const std::string key = trim(line.substr(0, sep));
    const std::string value = trim(line.substr(sep + 1));
    if (key.empty() || value.empty())
      throw invalid_config_error("plan: empty key or value in '" + line + "'");

    // plan-level keys
    if (key == "sweep_var") {
      plan.var = parse_sweep_var(value);
    } else if (key == "values") {
      plan.values.clear();
      for (const auto& item : split_list(value))
        plan.values.push_back(parse_number(key, item));
      if (plan.values.empty())
        throw invalid_config_error("values: list must be non-empty");
      values_given = true;
    } else if (key == "direction") {
      plan.direction = parse_link(value);
    } else if (key == "schemes") {
      plan.schemes.clear();
      for (const auto& item : split_list(value))
        plan.schemes.push_back(parse_scheme(item));
      if (plan.schemes.empty())
        throw invalid_config_error("schemes: list must be non-empty");
    } else if (key == "systems") {
      plan.systems.clear();
      for (const auto& item : split_list(value))
        plan.systems.push_back(parse_system(item));
      if (plan.systems.empty())
        throw invalid_config_error("systems: list must be non-empty");
    } else if (key == "trials") {
      plan.trials = parse_count(key, value);
      if (plan.trials < 1)
        throw invalid_config_error("trials: must be at least 1");
    } else if (key == "timing") {
      plan.timing = parse_bool(key, value);
    } else if (key == "seed") {
      plan.base_seed = static_cast<std::uint64_t>(parse_count(key, value));
      plan.base.seed = plan.base_seed;
    }
    // scenario keys
    else if (key == "D_x") plan.base.region_x = parse_number(key, value);
    else if (key == "D_y") plan.base.region_y = parse_number(key, value);
    else if (key == "M") plan.base.num_guides = parse_count(key, value);
    else if (key == "N") plan.base.pas_per_guide = parse_count(key, value);
    else if (key == "K") plan.base.num_users = parse_count(key, value);
    else if (key == "a") plan.base.height = parse_number(key, value);
    else if (key == "d") plan.base.guide_spacing = parse_number(key, value);
    else if (key == "f") plan.base.freq = parse_number(key, value);
    else if (key == "n_eff") plan.base.n_eff = parse_number(key, value);
    else if (key == "kappa") plan.base.kappa = parse_number(key, value);
    else if (key == "sigma2") plan.base.noise_dbm = parse_number(key, value);
    else if (key == "P_d") plan.base.power_dl_dbm = parse_number(key, value);
    else if (key == "P_u") plan.base.power_ul_dbm = parse_number(key, value);
    else if (key == "Delta") plan.base.min_spacing = parse_number(key, value);
    else if (key == "L_m") plan.base.usable_len = parse_number(key, value);
    else if (key == "N_s") plan.base.search_points = parse_count(key, value);
    else if (key == "max_sweeps") plan.base.max_sweeps = parse_count(key, value);
    else if (key == "rel_tol") plan.base.rel_tol = parse_number(key, value);
    else
      throw invalid_config_error("plan: unknown key '" + key + "'");
  }

  // A sweep without explicit values degenerates to one point at the base
  // scenario's own setting.
  if (!values_given) {
    const ScenarioConfig base = resolve_config(plan.base);
    switch (plan.var) {
      case SweepVar::power:
        plan.values = {plan.direction == Link::downlink
                           ? plan.base.power_dl_dbm.value_or(0.0)
                           : plan.base.power_ul_dbm.value_or(0.0)};
        break;
      case SweepVar::side_length:
        plan.values = {base.region_x};
        break;
      case SweepVar::num_pas:
        plan.values = {static_cast<double>(base.pas_per_guide)};
        break;
      case SweepVar::num_users:
        plan.values = {static_cast<double>(base.num_users)};
        break;
      case SweepVar::resolution:
        plan.values = {static_cast<double>(base.search_points)};
        break;
    }
  }

  // Validate every sweep point eagerly so errors carry the field name.
  for (const double value : plan.values) (void)config_for(plan, value);
  return plan;
}

ExperimentPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_config_error("plan: cannot open file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_plan(buffer.str());
}

ScenarioConfig config_for(const ExperimentPlan& plan, double value) {
  ConfigOverrides ov = plan.base;
  switch (plan.var) {
    case SweepVar::power:
      if (plan.direction == Link::downlink)
        ov.power_dl_dbm = value;
      else
        ov.power_ul_dbm = value;
      break;
    case SweepVar::side_length:
      ov.region_x = value;
      break;
    case SweepVar::num_pas:
      if (value < 1 || value != std::floor(value))
        throw invalid_config_error("values: N must be a positive integer");
      ov.pas_per_guide = static_cast<arma::uword>(value);
      break;
    case SweepVar::num_users:
      if (value < 1 || value != std::floor(value))
        throw invalid_config_error("values: K must be a positive integer");
      ov.num_users = static_cast<arma::uword>(value);
      break;
    case SweepVar::resolution:
      if (value < 2 || value != std::floor(value))
        throw invalid_config_error("values: N_s must be an integer >= 2");
      ov.search_points = static_cast<arma::uword>(value);
      break;
  }
  return resolve_config(ov);
}

// ---------------------------------------------------------------------------
// Plan execution

namespace {

struct TrialResult {
  double rate = 0;
  double sweeps = 0;
  double wall_s = 0;
  bool failed = false;
};

TrialResult run_trial(const ScenarioConfig& cfg, Link link, Scheme scheme,
                      SystemKind system, std::uint64_t seed, bool timing) {
  TrialResult tr;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Scenario sc = make_scenario(cfg);
    Rng rng(seed);
    const UserSet users = draw_users(cfg, rng);
    if (system == SystemKind::pass) {
      const PinchingLayout layout = init_layout(sc, rng);
      const SweepResult res = run_sweep(sc, users, link, scheme, layout);
      tr.rate = res.sum_rate;
      tr.sweeps = static_cast<double>(res.trace.sweeps);
    } else {
      tr.rate = baseline_sum_rate(sc, users, link, scheme);
    }
  } catch (const std::exception&) {
    tr.failed = true;
  }
  if (timing)
    tr.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0)
                    .count();
  return tr;
}

void for_each_trial(arma::uword trials, unsigned threads,
                    const std::function<void(arma::uword)>& body) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::min<unsigned>(
      threads == 0 ? hw : threads, static_cast<unsigned>(trials));
  if (workers <= 1) {
    for (arma::uword t = 0; t < trials; ++t) body(t);
    return;
  }
  std::atomic<arma::uword> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const arma::uword t = next.fetch_add(1);
        if (t >= trials) return;
        body(t);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

std::vector<ResultRow> run_plan(const ExperimentPlan& plan, unsigned threads) {
  std::vector<ResultRow> rows;
  arma::uword failed_total = 0;
  arma::uword attempted_total = 0;

  for (const double value : plan.values) {
    const ScenarioConfig cfg = config_for(plan, value);
    for (const Scheme scheme : plan.schemes) {
      for (const SystemKind system : plan.systems) {
        ResultRow row;
        row.sweep_var = sweep_var_label(plan.var);
        row.sweep_value = value;
        row.direction = link_label(plan.direction);
        row.scheme = scheme_label(scheme, plan.direction);
        row.system = system_label(system);

        if (scheme == Scheme::zero_forcing &&
            cfg.num_users > cfg.num_guides) {
          row.feasible = false;
          rows.push_back(row);
          continue;
        }

        std::vector<TrialResult> results(plan.trials);
        for_each_trial(plan.trials, threads, [&](arma::uword t) {
          results[t] = run_trial(cfg, plan.direction, scheme, system,
                                 plan.base_seed + t, plan.timing);
        });

        // Sequential fold in trial order for bit-exact aggregation.
        arma::uword ok = 0;
        double sum = 0, sweeps = 0, wall = 0;
        for (const TrialResult& tr : results) {
          ++attempted_total;
          if (tr.failed) {
            ++failed_total;
            continue;
          }
          ++ok;
          sum += tr.rate;
          sweeps += tr.sweeps;
          wall += tr.wall_s;
        }
        row.trials = ok;
        if (ok > 0) {
          row.mean_sumrate = sum / static_cast<double>(ok);
          row.mean_sweeps = sweeps / static_cast<double>(ok);
          row.mean_walltime_s = wall / static_cast<double>(ok);
        }
        if (ok > 1) {
          double ss = 0;
          for (const TrialResult& tr : results) {
            if (tr.failed) continue;
            const double dev = tr.rate - row.mean_sumrate;
            ss += dev * dev;
          }
          row.stderr_mean = std::sqrt(
              ss / (static_cast<double>(ok - 1) * static_cast<double>(ok)));
        }
        rows.push_back(row);
      }
    }
  }

  if (attempted_total > 0 &&
      100 * failed_total > attempted_total) {
    std::ostringstream msg;
    msg << "plan: " << failed_total << " of " << attempted_total
        << " trials failed (more than 1%)";
    throw std::runtime_error(msg.str());
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Emission. Numbers carry 12 significant digits.

namespace {

std::string fmt_num(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", v);
  return buffer;
}

std::string fmt_count(arma::uword v) { return std::to_string(v); }

void append_json_row(std::ostringstream& out, const ResultRow& row,
                     const std::string& indent) {
  out << indent << "{\"sweep_var\": \"" << row.sweep_var << "\", "
      << "\"sweep_value\": " << fmt_num(row.sweep_value) << ", "
      << "\"direction\": \"" << row.direction << "\", "
      << "\"scheme\": \"" << row.scheme << "\", "
      << "\"system\": \"" << row.system << "\", "
      << "\"status\": \"" << (row.feasible ? "ok" : "infeasible") << "\", "
      << "\"mean_sumrate_bps_hz\": " << fmt_num(row.mean_sumrate) << ", "
      << "\"stderr\": " << fmt_num(row.stderr_mean) << ", "
      << "\"trials\": " << fmt_count(row.trials) << ", "
      << "\"mean_sweeps\": " << fmt_num(row.mean_sweeps) << ", "
      << "\"mean_walltime_s\": " << fmt_num(row.mean_walltime_s) << "}";
}

}  // namespace

std::string to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << "sweep_var,sweep_value,direction,scheme,system,"
         "mean_sumrate_bps_hz,stderr,trials,mean_sweeps,mean_walltime_s\n";
  for (const ResultRow& row : rows) {
    out << row.sweep_var << ',' << fmt_num(row.sweep_value) << ','
        << row.direction << ',' << row.scheme << ',' << row.system << ',';
    if (row.feasible)
      out << fmt_num(row.mean_sumrate) << ',' << fmt_num(row.stderr_mean);
    else
      out << "infeasible,infeasible";
    out << ',' << fmt_count(row.trials) << ',' << fmt_num(row.mean_sweeps)
        << ',' << fmt_num(row.mean_walltime_s) << '\n';
  }
  return out.str();
}

std::string to_json(const ExperimentPlan& plan,
                    const std::vector<ResultRow>& rows) {
  // Resolved base scenario for provenance (defaults expanded; powers in dBm
  // to mirror the input format).
  const ScenarioConfig cfg = resolve_config(plan.base);
  std::ostringstream out;
  out << "{\n  \"config\": {";
  out << "\"D_x\": " << fmt_num(cfg.region_x)
      << ", \"D_y\": " << fmt_num(cfg.region_y)
      << ", \"M\": " << fmt_count(cfg.num_guides)
      << ", \"N\": " << fmt_count(cfg.pas_per_guide)
      << ", \"K\": " << fmt_count(cfg.num_users)
      << ", \"a\": " << fmt_num(cfg.height)
      << ", \"d\": " << fmt_num(cfg.guide_spacing)
      << ", \"f\": " << fmt_num(cfg.freq)
      << ", \"n_eff\": " << fmt_num(cfg.n_eff)
      << ", \"kappa\": " << fmt_num(cfg.kappa)
      << ", \"sigma2_dbm\": " << fmt_num(watts_to_dbm(cfg.noise_w))
      << ", \"P_d_dbm\": " << fmt_num(watts_to_dbm(cfg.power_dl_w))
      << ", \"P_u_dbm\": " << fmt_num(watts_to_dbm(cfg.power_ul_w))
      << ", \"Delta\": " << fmt_num(cfg.min_spacing)
      << ", \"L_m\": " << fmt_num(cfg.usable_len)
      << ", \"N_s\": " << fmt_count(cfg.search_points)
      << ", \"seed\": " << std::to_string(plan.base_seed)
      << ", \"max_sweeps\": " << fmt_count(cfg.max_sweeps)
      << ", \"rel_tol\": " << fmt_num(cfg.rel_tol) << "},\n";
  out << "  \"plan\": {\"sweep_var\": \"" << sweep_var_label(plan.var)
      << "\", \"direction\": \"" << link_label(plan.direction)
      << "\", \"trials\": " << fmt_count(plan.trials)
      << ", \"timing\": " << (plan.timing ? "true" : "false") << "},\n";
  out << "  \"rows\": [\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    append_json_row(out, rows[i], "    ");
    if (i + 1 < rows.size()) out << ',';
    out << '\n';
  }
  out << "  ]\n}\n";
  return out.str();
}

void emit_results(const ExperimentPlan& plan,
                  const std::vector<ResultRow>& rows, OutputFormat format,
                  const std::string& path) {
  const std::string payload =
      format == OutputFormat::csv ? to_csv(rows) : to_json(plan, rows);
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open output file '" + path + "'");
  out << payload;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace passim
