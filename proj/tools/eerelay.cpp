// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The eerelay Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// eerelay: experiment driver.
//
//   eerelay solve        [--config F] [--seed S] [--out F] [--workers W]
//   eerelay solve        --instance F [--config F] [--mode EEM|SEM] [--out F] [--report F]
//   eerelay sweep        [--config F] [--seed S] [--out F] [--workers W]
//   eerelay trace        [--config F] [--seed S] [--out F] [--workers W]
//   eerelay oracle-check [--config F] [--seed S] [--out F] [--workers W]
//   eerelay oracle-check --instance F [--config F] [--out F]
//   eerelay gen          [--config F] [--seed S] [--sample I] [--point P] [--out F]
//
// Exit status: 0 on success, 1xx on usage errors, 2 on library errors
// (printed as "error: <class>: <message>"), 3 on anything else.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "eerelay.hpp"

namespace {

using namespace eerelay;

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> workers;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "Experiment config file (key = value)");
  cmd->add_option("--seed", o.seed, "Override master_seed");
  cmd->add_option("--out", o.out, "Output path (default: config 'output' or stdout)");
  cmd->add_option("--workers", o.workers, "Override worker thread count")
      ->check(CLI::PositiveNumber);
}

ExperimentConfig resolve(const CommonOptions& o) {
  ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
  if (o.seed) cfg.master_seed = *o.seed;
  if (o.workers) cfg.workers = *o.workers;
  if (!o.out.empty()) cfg.output = o.out;
  cfg.validate();
  return cfg;
}

template <typename Writer>
void emit(const std::string& path, Writer&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("IoError", "cannot open output file '" + path + "'");
  write(out);
  if (!out) throw Error("IoError", "failed writing '" + path + "'");
}

// Params of a standalone instance: config values with the dimensions
// taken from the file.
std::pair<Instance, SystemParams> load_instance(const std::string& path,
                                                const ExperimentConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw Error("IoError", "cannot open instance file '" + path + "'");
  Instance inst = read_instance(in);
  SystemParams params = cfg.params;
  params.n_users = inst.channel.users();
  params.n_subcarriers = inst.channel.subcarriers();
  params.n_relays = inst.channel.relays();
  params.validate();
  return {std::move(inst), params};
}

int run(int argc, char** argv) {
  CLI::App app{"Energy-efficient resource allocation for AF relay OFDMA downlinks"};
  app.require_subcommand(1);

  CommonOptions solve_opts, sweep_opts, trace_opts, oracle_opts, gen_opts;
  std::string solve_instance, solve_report, solve_mode = "EEM", oracle_instance;
  int gen_sample = 0;
  std::size_t gen_point = 0;

  auto* solve = app.add_subcommand("solve", "Per-sample solve records as CSV");
  add_common(solve, solve_opts);
  solve->add_option("--instance", solve_instance, "Solve one instance file instead");
  solve->add_option("--mode", solve_mode, "Objective for --instance")
      ->check(CLI::IsMember({"EEM", "SEM"}));
  solve->add_option("--report", solve_report, "Report file for --instance");

  auto* sweep = app.add_subcommand("sweep", "Mean and standard error per sweep value");
  add_common(sweep, sweep_opts);

  auto* trace = app.add_subcommand("trace", "EE versus cumulative inner iterations");
  add_common(trace, trace_opts);

  auto* oracle = app.add_subcommand("oracle-check", "Compare Dinkelbach with exhaustive search");
  add_common(oracle, oracle_opts);
  oracle->add_option("--instance", oracle_instance, "Check one instance file instead");

  auto* gen = app.add_subcommand("gen", "Write the topology and channel of one sample");
  add_common(gen, gen_opts);
  gen->add_option("--sample", gen_sample, "Sample index")->check(CLI::NonNegativeNumber);
  gen->add_option("--point", gen_point, "Sweep point index");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (*solve) {
    const ExperimentConfig cfg = resolve(solve_opts);
    if (!solve_instance.empty()) {
      const auto [inst, params] = load_instance(solve_instance, cfg);
      auto [alloc, report] = solve_mode == "SEM" ? sem_solve(inst.channel, params)
                                                 : dinkelbach_solve(inst.channel, params);
      emit(cfg.output, [&](std::ostream& os) { write_allocation(os, alloc); });
      if (!solve_report.empty())
        emit(solve_report, [&](std::ostream& os) { write_report(os, report); });
      return 0;
    }
    const auto records = run_solve(cfg);
    emit(cfg.output, [&](std::ostream& os) { write_records_csv(os, cfg, records); });
  } else if (*sweep) {
    const ExperimentConfig cfg = resolve(sweep_opts);
    const auto rows = run_sweep(cfg);
    emit(cfg.output, [&](std::ostream& os) { write_sweep_csv(os, cfg, rows); });
  } else if (*trace) {
    ExperimentConfig cfg = resolve(trace_opts);
    const auto rows = emit_convergence_trace(cfg);
    emit(cfg.output, [&](std::ostream& os) { write_trace_csv(os, cfg, rows); });
  } else if (*oracle) {
    ExperimentConfig cfg = resolve(oracle_opts);
    cfg.mode = Mode::ORACLE_CHECK;
    if (!oracle_instance.empty()) {
      const auto [inst, params] = load_instance(oracle_instance, cfg);
      const auto [alloc, report] = dinkelbach_solve(inst.channel, params);
      const OracleResult best = oracle_best_ee(inst.channel, params, cfg.grid);
      const double ee = energy_efficiency(alloc, inst.channel, params);
      const double oracle_ee = energy_efficiency(best.allocation, inst.channel, params);
      emit(cfg.output, [&](std::ostream& os) {
        os << "dinkelbach_ee,oracle_ee,oracle_slack,gap,evaluations\n"
           << fmt::format("{:.9g},{:.9g},{:.9g},{:.9g},{}\n", ee, oracle_ee, best.grid_slack,
                          ee - oracle_ee, best.evaluations);
      });
      return 0;
    }
    cfg.validate();
    const auto records = run_solve(cfg);
    emit(cfg.output, [&](std::ostream& os) { write_records_csv(os, cfg, records); });
  } else if (*gen) {
    const ExperimentConfig cfg = resolve(gen_opts);
    if (gen_point >= cfg.sweep_points()) throw ConfigError("--point: out of range");
    const SystemParams params = cfg.params_at(gen_point);
    const SampleInstance inst = make_instance(params, sample_seed(cfg.master_seed, gen_sample));
    emit(cfg.output,
         [&](std::ostream& os) { write_instance(os, inst.channel, &inst.topology); });
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const eerelay::Error& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: InternalError: " << e.what() << '\n';
    return 3;
  }
}
