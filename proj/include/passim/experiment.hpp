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
#include <string>
#include <vector>

#include "passim/common.hpp"
#include "passim/scenario.hpp"

namespace passim {

enum class SweepVar { power, side_length, num_pas, num_users, resolution };
enum class SystemKind { pass, hmimo };

std::string sweep_var_label(SweepVar var);
SweepVar parse_sweep_var(const std::string& text);
std::string system_label(SystemKind sys);
SystemKind parse_system(const std::string& text);

// ---------------------------------------------------------------------------

struct ExperimentPlan {
  SweepVar var = SweepVar::power;
  std::vector<double> values{0.0};  // dBm for power, meters/counts otherwise
  Link direction = Link::downlink;
  std::vector<Scheme> schemes{Scheme::matched, Scheme::zero_forcing,
                              Scheme::mmse};
  std::vector<SystemKind> systems{SystemKind::pass, SystemKind::hmimo};
  arma::uword trials = 400;
  std::uint64_t base_seed = 1;
  // Wall-clock measurement is off by default so repeated runs emit identical
  // bytes; enable with `timing = true` in the plan file.
  bool timing = false;
  ConfigOverrides base;
};

// Parse the key-value plan/scenario text format ('#' comments, `key = value`
// lines, comma-separated lists). Unknown keys and malformed values raise
// invalid_config_error naming the field. An empty file yields the default
// plan over the default scenario.
ExperimentPlan parse_plan(const std::string& text);
ExperimentPlan load_plan(const std::string& path);

// Scenario for one sweep point (applies the swept variable, re-derives
// dependent defaults, validates).
ScenarioConfig config_for(const ExperimentPlan& plan, double value);

// ---------------------------------------------------------------------------

struct ResultRow {
  std::string sweep_var;
  double sweep_value = 0;
  std::string direction;
  std::string scheme;
  std::string system;
  bool feasible = true;  // false: ZF with K > M, emitted as a marker row
  double mean_sumrate = 0;
  double stderr_mean = 0;
  arma::uword trials = 0;
  double mean_sweeps = 0;
  double mean_walltime_s = 0;
};

// Runs every (value, scheme, system) cell over trials seeded
// base_seed .. base_seed + trials - 1 (fresh users and, for PASS, a fresh
// initial layout per trial). Trials may execute on several threads; the
// aggregation is a sequential fold over the trial index, so the output is
// independent of the thread count. Throws if more than 1% of trials fail.
std::vector<ResultRow> run_plan(const ExperimentPlan& plan,
                                unsigned threads = 0);

// ---------------------------------------------------------------------------

std::string to_csv(const std::vector<ResultRow>& rows);
std::string to_json(const ExperimentPlan& plan,
                    const std::vector<ResultRow>& rows);

enum class OutputFormat { csv, json };
OutputFormat parse_format(const std::string& text);

void emit_results(const ExperimentPlan& plan,
                  const std::vector<ResultRow>& rows, OutputFormat format,
                  const std::string& path);

}  // namespace passim
