// SPDX-License-Identifier: Apache-2.0
//
// passim: simulation and position optimization for pinching-antenna systems
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "passim/experiment.hpp"
#include "passim/selftest.hpp"

namespace {

struct CommonOpts {
  std::string out;
  std::string format = "csv";
  unsigned threads = 0;
  int trials = -1;
  long long seed = -1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--out", opts.out,
                  "Output file path (stdout when omitted)");
  cmd->add_option("--format", opts.format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--threads", opts.threads,
                  "Worker threads for trials (0 = hardware default)");
  cmd->add_option("--trials", opts.trials, "Override the trial count");
  cmd->add_option("--seed", opts.seed, "Override the base seed");
}

int execute(passim::ExperimentPlan plan, const CommonOpts& opts) {
  if (opts.trials > 0) plan.trials = static_cast<arma::uword>(opts.trials);
  if (opts.seed >= 0) {
    plan.base_seed = static_cast<std::uint64_t>(opts.seed);
    plan.base.seed = plan.base_seed;
  }
  const auto rows = passim::run_plan(plan, opts.threads);
  const auto format = passim::parse_format(opts.format);
  if (opts.out.empty()) {
    std::cout << (format == passim::OutputFormat::csv
                      ? passim::to_csv(rows)
                      : passim::to_json(plan, rows));
  } else {
    passim::emit_results(plan, rows, format, opts.out);
    std::cerr << "wrote " << rows.size() << " rows to " << opts.out << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "passim: sum-rate simulation and pinching-antenna position "
      "optimization for waveguide-fed antenna systems"};
  app.require_subcommand(1);

  // run: execute a plan file
  std::string plan_path;
  CommonOpts run_opts;
  CLI::App* run = app.add_subcommand("run", "Run an experiment plan file");
  run->add_option("plan", plan_path, "Plan/config file (key = value lines)")
      ->required();
  add_common(run, run_opts);

  // sweep: build a plan from flags
  CommonOpts sweep_opts;
  std::string var = "power";
  std::vector<double> values;
  std::string direction = "dl";
  std::vector<std::string> schemes{"mrt", "zf", "mmse"};
  std::vector<std::string> systems{"pass", "hmimo"};
  std::string base_config;
  CLI::App* sweep =
      app.add_subcommand("sweep", "Sweep one variable over a value list");
  sweep->add_option("--var", var,
                    "Variable: power|side-length|pas|users|resolution")
      ->check(CLI::IsMember(
          {"power", "side-length", "pas", "users", "resolution"}));
  sweep->add_option("--values", values, "Sweep values (dBm for power)")
      ->required()
      ->delimiter(',');
  sweep->add_option("--direction", direction, "dl or ul")
      ->check(CLI::IsMember({"dl", "ul"}));
  sweep->add_option("--schemes", schemes, "mrt|mrc, zf, mmse")->delimiter(',');
  sweep->add_option("--systems", systems, "pass, hmimo")->delimiter(',');
  sweep->add_option("--config", base_config,
                    "Base scenario file merged under the sweep");
  add_common(sweep, sweep_opts);

  // selftest
  CLI::App* selftest =
      app.add_subcommand("selftest", "Run the oracle-equivalence suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return execute(passim::load_plan(plan_path), run_opts);

    if (sweep->parsed()) {
      passim::ExperimentPlan plan = base_config.empty()
                                        ? passim::ExperimentPlan{}
                                        : passim::load_plan(base_config);
      plan.var = passim::parse_sweep_var(var);
      plan.values = values;
      plan.direction = passim::parse_link(direction);
      plan.schemes.clear();
      for (const auto& s : schemes)
        plan.schemes.push_back(passim::parse_scheme(s));
      plan.systems.clear();
      for (const auto& s : systems)
        plan.systems.push_back(passim::parse_system(s));
      for (const double v : plan.values) (void)passim::config_for(plan, v);
      return execute(std::move(plan), sweep_opts);
    }

    if (selftest->parsed()) {
      const int failures = passim::run_selftest(std::cout);
      return failures == 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
