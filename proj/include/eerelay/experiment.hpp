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

// Seeded Monte-Carlo harness: configuration, per-sample solves, sweep
// aggregation and CSV emission.
//
// Sample s of a run uses seed_s = derive_seed(master_seed, s); its topology
// is drawn from splitmix64(seed_s ^ 1) and its fading from
// splitmix64(seed_s ^ 2). Every sweep point reuses the same per-sample
// seeds. Jobs run on `workers` threads and are written back by job index,
// so output does not depend on scheduling.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "eerelay/model.hpp"
#include "eerelay/objective.hpp"
#include "eerelay/oracle.hpp"
#include "eerelay/params.hpp"
#include "eerelay/random.hpp"
#include "eerelay/solver.hpp"

namespace eerelay {

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("ConfigError", what) {}
};

enum class Mode { EEM, SEM, BOTH, ORACLE_CHECK };
enum class SweepAxis { None, PMaxDbm, NUsers };

inline const char* to_string(Mode m) {
  switch (m) {
    case Mode::SEM: return "SEM";
    case Mode::BOTH: return "BOTH";
    case Mode::ORACLE_CHECK: return "ORACLE_CHECK";
    case Mode::EEM: break;
  }
  return "EEM";
}

inline const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::PMaxDbm: return "p_max_dbm";
    case SweepAxis::NUsers: return "n_users";
    case SweepAxis::None: break;
  }
  return "none";
}

struct ExperimentConfig {
  SystemParams params;
  SweepAxis sweep_axis = SweepAxis::None;
  std::vector<double> sweep_values;
  int n_channel_samples = 100;
  std::uint64_t master_seed = 1;
  Mode mode = Mode::EEM;
  std::string output;  // empty: standard output
  int workers = 1;
  GridSpec grid;

  /// Parameters of one sweep point.
  SystemParams params_at(std::size_t point) const {
    SystemParams p = params;
    if (sweep_axis == SweepAxis::PMaxDbm) p.p_max_dbm = sweep_values.at(point);
    if (sweep_axis == SweepAxis::NUsers) p.n_users = static_cast<int>(sweep_values.at(point));
    return p;
  }

  std::size_t sweep_points() const {
    return sweep_axis == SweepAxis::None ? 1 : sweep_values.size();
  }

  void validate() const {
    if (n_channel_samples < 1) throw ConfigError("n_channel_samples: must be >= 1");
    if (workers < 1) throw ConfigError("workers: must be >= 1");
    if (sweep_axis != SweepAxis::None) {
      if (sweep_values.empty()) throw ConfigError("sweep_values: must be nonempty");
      if (!std::is_sorted(sweep_values.begin(), sweep_values.end()))
        throw ConfigError("sweep_values: must be sorted ascending");
      if (sweep_axis == SweepAxis::NUsers)
        for (double v : sweep_values)
          if (!(v >= 1) || v != std::floor(v))
            throw ConfigError("sweep_values: n_users entries must be positive integers");
    }
    try {
      grid.validate();
      for (std::size_t i = 0; i < sweep_points(); ++i) params_at(i).validate();
    } catch (const ParamError& e) {
      throw ConfigError(e.what());
    }
    if (mode == Mode::ORACLE_CHECK) {
      for (std::size_t i = 0; i < sweep_points(); ++i) {
        const SystemParams p = params_at(i);
        const auto need = detail::oracle_enumeration_count(p.n_users, p.n_subcarriers,
                                                           p.n_relays > 0, grid);
        if (need > grid.budget) throw OracleBudgetError(need, grid.budget);
      }
    }
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size() || !std::isfinite(out))
    throw ConfigError(key + ": expected a finite number, got '" + v + "'");
  return out;
}

inline long long parse_integer(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return out;
}

inline int parse_int(const std::string& key, const std::string& v) {
  const long long x = parse_integer(key, v);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
    throw ConfigError(key + ": out of range");
  return static_cast<int>(x);
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long out = 0;
  try {
    if (!v.empty() && v[0] != '-') out = std::stoull(v, &used, 0);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size())
    throw ConfigError(key + ": expected an unsigned integer, got '" + v + "'");
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key, const std::string&)>;

inline const std::map<std::string, Setter>& config_keys() {
  static const std::map<std::string, Setter> keys = [] {
    std::map<std::string, Setter> m;
    auto real = [&m](const char* name, double SystemParams::*field) {
      m[name] = [field](ExperimentConfig& c, const std::string& k, const std::string& v) {
        c.params.*field = parse_double(k, v);
      };
    };
    auto integer = [&m](const char* name, int SystemParams::*field) {
      m[name] = [field](ExperimentConfig& c, const std::string& k, const std::string& v) {
        c.params.*field = parse_int(k, v);
      };
    };
    integer("n_subcarriers", &SystemParams::n_subcarriers);
    integer("n_users", &SystemParams::n_users);
    integer("n_relays", &SystemParams::n_relays);
    integer("max_outer_iters", &SystemParams::max_outer_iters);
    integer("max_inner_iters", &SystemParams::max_inner_iters);
    real("subcarrier_bandwidth_hz", &SystemParams::subcarrier_bandwidth_hz);
    real("noise_psd_dbm_hz", &SystemParams::noise_psd_dbm_hz);
    real("snr_gap_db", &SystemParams::snr_gap_db);
    real("p_max_dbm", &SystemParams::p_max_dbm);
    real("p_fixed_bs_w", &SystemParams::p_fixed_bs_w);
    real("p_fixed_rn_w", &SystemParams::p_fixed_rn_w);
    real("inv_drain_eff_bs", &SystemParams::inv_drain_eff_bs);
    real("inv_drain_eff_rn", &SystemParams::inv_drain_eff_rn);
    real("cell_radius_m", &SystemParams::cell_radius_m);
    real("min_distance_m", &SystemParams::min_distance_m);
    real("convergence_tol", &SystemParams::convergence_tol);
    real("dual_tol", &SystemParams::dual_tol);
    real("dual_step", &SystemParams::dual_step);
    real("pl_los_a_db", &SystemParams::pl_los_a_db);
    real("pl_los_b_db", &SystemParams::pl_los_b_db);
    real("pl_nlos_a_db", &SystemParams::pl_nlos_a_db);
    real("pl_nlos_b_db", &SystemParams::pl_nlos_b_db);

    m["sweep_axis"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      if (v == "none") c.sweep_axis = SweepAxis::None;
      else if (v == "p_max_dbm") c.sweep_axis = SweepAxis::PMaxDbm;
      else if (v == "n_users") c.sweep_axis = SweepAxis::NUsers;
      else throw ConfigError(k + ": expected none, p_max_dbm or n_users, got '" + v + "'");
    };
    m["sweep_values"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.sweep_values.clear();
      std::string item;
      std::istringstream in(v);
      while (std::getline(in, item, ',')) c.sweep_values.push_back(parse_double(k, trim(item)));
    };
    m["n_channel_samples"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.n_channel_samples = parse_int(k, v);
    };
    m["master_seed"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.master_seed = parse_u64(k, v);
    };
    m["mode"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      if (v == "EEM") c.mode = Mode::EEM;
      else if (v == "SEM") c.mode = Mode::SEM;
      else if (v == "BOTH") c.mode = Mode::BOTH;
      else if (v == "ORACLE_CHECK") c.mode = Mode::ORACLE_CHECK;
      else throw ConfigError(k + ": expected EEM, SEM, BOTH or ORACLE_CHECK, got '" + v + "'");
    };
    m["output"] = [](ExperimentConfig& c, const std::string&, const std::string& v) {
      c.output = v;
    };
    m["workers"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.workers = parse_int(k, v);
    };
    m["grid_power_levels"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.grid.levels_per_power = parse_int(k, v);
    };
    m["grid_beta_levels"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.grid.beta_levels = parse_int(k, v);
    };
    m["oracle_budget"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.grid.budget = parse_u64(k, v);
    };
    return m;
  }();
  return keys;
}

}  // namespace detail

/// Parses `key = value` lines. Blank lines and lines starting with `#` are
/// skipped. Unknown and repeated keys are errors. The result is validated.
inline ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::map<std::string, int> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = detail::trim(line);
    if (body.empty() || body[0] == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = detail::trim(body.substr(0, eq));
    const std::string value = detail::trim(body.substr(eq + 1));
    const auto& keys = detail::config_keys();
    const auto it = keys.find(key);
    if (it == keys.end())
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (seen.count(key))
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key +
                        "' (first on line " + std::to_string(seen[key]) + ")");
    seen[key] = line_no;
    it->second(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

inline ExperimentConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

inline std::uint64_t sample_seed(std::uint64_t master, int sample) {
  return derive_seed(master, static_cast<std::uint64_t>(sample));
}

struct SampleInstance {
  Topology topology;
  ChannelRealization channel;
};

inline SampleInstance make_instance(const SystemParams& params, std::uint64_t seed) {
  SampleInstance s;
  s.topology = generate_topology(params, splitmix64(seed ^ 1));
  s.channel = generate_channel(s.topology, params, splitmix64(seed ^ 2));
  return s;
}

/// One solve of one sample. `status` is "ok" or the error class of a
/// per-sample failure, in which case the metrics are NaN.
struct SampleRecord {
  int sample = 0;
  std::size_t point = 0;
  std::optional<double> sweep_value;
  Mode mode = Mode::EEM;
  std::string status = "ok";
  double se = std::numeric_limits<double>::quiet_NaN();
  double ee = std::numeric_limits<double>::quiet_NaN();
  double power_w = std::numeric_limits<double>::quiet_NaN();
  double rho = std::numeric_limits<double>::quiet_NaN();
  int outer_iters = 0;
  int inner_iters = 0;
  bool converged = false;
  // ORACLE_CHECK only.
  double oracle_ee = std::numeric_limits<double>::quiet_NaN();
  double oracle_slack = std::numeric_limits<double>::quiet_NaN();
  double gap = std::numeric_limits<double>::quiet_NaN();

  bool ok() const { return status == "ok"; }
};

namespace detail {

/// Runs `job(i)` for i in [0, count) on up to `workers` threads.
template <typename Job>
void parallel_for(std::size_t count, int workers, Job&& job) {
  const std::size_t threads = std::min<std::size_t>(std::max(1, workers), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) job(i);
    });
  for (auto& th : pool) th.join();
}

inline void fill_record(SampleRecord& r, const SolveReport& report) {
  r.se = report.final_se;
  r.ee = report.final_ee;
  r.power_w = report.final_power_w;
  r.rho = report.final_rho;
  r.outer_iters = report.outer_iters();
  r.inner_iters = report.total_inner_iters;
  r.converged = report.converged;
}

inline std::vector<Mode> modes_of(Mode m) {
  if (m == Mode::BOTH) return {Mode::EEM, Mode::SEM};
  return {m};
}

// Reported metrics are recomputed from the allocation.
inline void measure(SampleRecord& r, const Allocation& alloc, const ChannelRealization& chan,
                    const SystemParams& params) {
  r.se = system_se(alloc, chan, params);
  r.power_w = system_power(alloc, params);
  r.ee = r.se / r.power_w;
  r.rho = af_fraction(alloc);
}

inline void mark_failed(std::vector<SampleRecord>& records, const std::string& kind) {
  for (auto& r : records) {
    SampleRecord failed;
    failed.sample = r.sample;
    failed.point = r.point;
    failed.sweep_value = r.sweep_value;
    failed.mode = r.mode;
    failed.status = kind;
    r = failed;
  }
}

inline std::vector<SampleRecord> solve_sample(const ExperimentConfig& cfg, std::size_t point,
                                              int sample) {
  const SystemParams params = cfg.params_at(point);
  std::vector<SampleRecord> out;
  for (Mode m : modes_of(cfg.mode)) {
    SampleRecord r;
    r.sample = sample;
    r.point = point;
    r.mode = m;
    if (cfg.sweep_axis != SweepAxis::None) r.sweep_value = cfg.sweep_values[point];
    out.push_back(r);
  }
  try {
    const SampleInstance inst = make_instance(params, sample_seed(cfg.master_seed, sample));
    for (auto& r : out) {
      auto [alloc, report] = r.mode == Mode::SEM ? sem_solve(inst.channel, params)
                                                 : dinkelbach_solve(inst.channel, params);
      fill_record(r, report);
      measure(r, alloc, inst.channel, params);
      if (!std::isfinite(r.ee) || !std::isfinite(r.se))
        throw SolverError("non-finite objective on sample " + std::to_string(sample));
      if (r.mode == Mode::ORACLE_CHECK) {
        const OracleResult oracle = oracle_best_ee(inst.channel, params, cfg.grid);
        r.oracle_ee = energy_efficiency(oracle.allocation, inst.channel, params);
        r.oracle_slack = oracle.grid_slack;
        r.gap = r.ee - r.oracle_ee;
      }
    }
  } catch (const Error& e) {
    mark_failed(out, e.kind());
  } catch (const std::exception&) {
    mark_failed(out, "SolverError");
  }
  return out;
}

inline std::string num(double v) { return fmt::format("{:.9g}", v); }

inline const char* sweep_column(const ExperimentConfig& cfg) {
  return cfg.sweep_axis == SweepAxis::None ? "sweep_value" : to_string(cfg.sweep_axis);
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("IoError", "cannot open output file '" + path + "'");
  return out;
}

}  // namespace detail

/// Records ordered by sweep point, then sample, then mode (EEM before SEM).
inline std::vector<SampleRecord> run_solve(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t points = cfg.sweep_points();
  const std::size_t samples = static_cast<std::size_t>(cfg.n_channel_samples);
  std::vector<std::vector<SampleRecord>> jobs(points * samples);
  detail::parallel_for(jobs.size(), cfg.workers, [&](std::size_t j) {
    jobs[j] = detail::solve_sample(cfg, j / samples, static_cast<int>(j % samples));
  });
  std::vector<SampleRecord> out;
  for (auto& j : jobs)
    for (auto& r : j) out.push_back(std::move(r));
  return out;
}

inline void write_records_csv(std::ostream& out, const ExperimentConfig& cfg,
                              const std::vector<SampleRecord>& records) {
  const bool oracle = cfg.mode == Mode::ORACLE_CHECK;
  out << "sample," << detail::sweep_column(cfg)
      << ",mode,status,se,ee,power_w,rho,outer_iters,inner_iters,converged";
  if (oracle) out << ",dinkelbach_ee,oracle_ee,oracle_slack,gap";
  out << '\n';
  for (const auto& r : records) {
    out << r.sample << ',' << (r.sweep_value ? detail::num(*r.sweep_value) : "") << ','
        << to_string(r.mode) << ',' << r.status << ',' << detail::num(r.se) << ','
        << detail::num(r.ee) << ',' << detail::num(r.power_w) << ',' << detail::num(r.rho)
        << ',' << r.outer_iters << ',' << r.inner_iters << ',' << (r.converged ? 1 : 0);
    if (oracle)
      out << ',' << detail::num(r.ee) << ',' << detail::num(r.oracle_ee) << ','
          << detail::num(r.oracle_slack) << ',' << detail::num(r.gap);
    out << '\n';
  }
}

/// Sample mean and standard error of the mean.
struct MeanStderr {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double stderr_ = std::numeric_limits<double>::quiet_NaN();
};

inline MeanStderr mean_stderr(const std::vector<double>& xs) {
  MeanStderr m;
  if (xs.empty()) return m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) {
    m.stderr_ = 0.0;
    return m;
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - m.mean) * (x - m.mean);
  m.stderr_ = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  return m;
}

struct SweepRow {
  double sweep_value = 0.0;
  Mode mode = Mode::EEM;
  int samples = 0;
  int failures = 0;
  MeanStderr se, ee, rho, power_w;
};

/// Aggregates per sweep value and mode over the successful samples.
inline std::vector<SweepRow> aggregate(const ExperimentConfig& cfg,
                                       const std::vector<SampleRecord>& records) {
  std::vector<SweepRow> rows;
  for (std::size_t p = 0; p < cfg.sweep_points(); ++p) {
    for (Mode m : detail::modes_of(cfg.mode)) {
      SweepRow row;
      row.sweep_value = cfg.sweep_values.empty() ? 0.0 : cfg.sweep_values[p];
      row.mode = m;
      std::vector<double> se, ee, rho, pw;
      for (const auto& r : records) {
        if (r.point != p || r.mode != m) continue;
        if (!r.ok()) {
          ++row.failures;
          continue;
        }
        ++row.samples;
        se.push_back(r.se);
        ee.push_back(r.ee);
        rho.push_back(r.rho);
        pw.push_back(r.power_w);
      }
      row.se = mean_stderr(se);
      row.ee = mean_stderr(ee);
      row.rho = mean_stderr(rho);
      row.power_w = mean_stderr(pw);
      rows.push_back(row);
    }
  }
  return rows;
}

/// Requires a sweep axis and mode EEM, SEM or BOTH.
inline std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg) {
  if (cfg.sweep_axis == SweepAxis::None) throw ConfigError("sweep_axis: sweep needs an axis");
  if (cfg.mode == Mode::ORACLE_CHECK)
    throw ConfigError("mode: sweep supports EEM, SEM or BOTH");
  return aggregate(cfg, run_solve(cfg));
}

inline void write_sweep_csv(std::ostream& out, const ExperimentConfig& cfg,
                            const std::vector<SweepRow>& rows) {
  out << to_string(cfg.sweep_axis)
      << ",mode,samples,failures,se_mean,se_stderr,ee_mean,ee_stderr,rho_mean,rho_stderr,"
         "power_w_mean,power_w_stderr\n";
  for (const auto& r : rows) {
    out << detail::num(r.sweep_value) << ',' << to_string(r.mode) << ',' << r.samples << ','
        << r.failures;
    for (const MeanStderr* s : {&r.se, &r.ee, &r.rho, &r.power_w})
      out << ',' << detail::num(s->mean) << ',' << detail::num(s->stderr_);
    out << '\n';
  }
}

/// EE of the incumbent after each outer iteration, indexed by the
/// cumulative inner-iteration count.
struct TraceRow {
  int sample = 0;
  std::optional<double> sweep_value;
  int outer_iter = 0;
  int inner_iter = 0;
  double ee = 0.0;
};

inline std::vector<TraceRow> trace_rows(const SolveReport& report, int sample,
                                        std::optional<double> sweep_value) {
  std::vector<TraceRow> rows;
  int cumulative = 0;
  for (int i = 0; i < report.outer_iters(); ++i) {
    cumulative += report.inner_iters_trace[i];
    rows.push_back({sample, sweep_value, i, cumulative, report.ee_trace[i]});
  }
  return rows;
}

/// Requires mode EEM. Failed samples contribute no rows.
inline std::vector<TraceRow> emit_convergence_trace(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.mode != Mode::EEM) throw ConfigError("mode: trace requires EEM");
  const std::size_t points = cfg.sweep_points();
  const std::size_t samples = static_cast<std::size_t>(cfg.n_channel_samples);
  std::vector<std::vector<TraceRow>> jobs(points * samples);
  detail::parallel_for(jobs.size(), cfg.workers, [&](std::size_t j) {
    const std::size_t point = j / samples;
    const int sample = static_cast<int>(j % samples);
    const SystemParams params = cfg.params_at(point);
    std::optional<double> value;
    if (cfg.sweep_axis != SweepAxis::None) value = cfg.sweep_values[point];
    try {
      const SampleInstance inst = make_instance(params, sample_seed(cfg.master_seed, sample));
      jobs[j] = trace_rows(dinkelbach_solve(inst.channel, params).second, sample, value);
    } catch (const std::exception&) {
      jobs[j].clear();
    }
  });
  std::vector<TraceRow> out;
  for (auto& j : jobs) out.insert(out.end(), j.begin(), j.end());
  return out;
}

inline void write_trace_csv(std::ostream& out, const ExperimentConfig& cfg,
                            const std::vector<TraceRow>& rows) {
  out << "sample," << detail::sweep_column(cfg) << ",outer_iter,inner_iter,ee\n";
  for (const auto& r : rows)
    out << r.sample << ',' << (r.sweep_value ? detail::num(*r.sweep_value) : "") << ','
        << r.outer_iter << ',' << r.inner_iter << ',' << detail::num(r.ee) << '\n';
}

}  // namespace eerelay
