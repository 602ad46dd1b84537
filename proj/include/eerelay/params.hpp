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

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace eerelay {

/// Base class of every error raised by the library. `kind()` is a stable
/// class name used by the CLI when reporting failures.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class ParamError : public Error {
 public:
  explicit ParamError(const std::string& what) : Error("ParamError", what) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what)
      : Error("DimensionError", what) {}
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

/// Scalar constants of one cell plus solver tolerances.
///
/// Defaults: 12 kHz subcarriers, 60 W / 20 W fixed BS/RN consumption,
/// amplifier factors 2.6 / 5, -174 dBm/Hz noise, 1e-8 Dinkelbach
/// tolerance, 3 relays, 1.5 km cell.
///
/// `dual_tol` and `dual_step` are expressed in units normalized by the
/// power budget: the inner loop stops once |1 - sum(P)/P_max| <= dual_tol.
struct SystemParams {
  int n_subcarriers = 128;
  double subcarrier_bandwidth_hz = 12e3;
  double noise_psd_dbm_hz = -174.0;
  double snr_gap_db = 0.0;
  double p_max_dbm = 0.0;
  double p_fixed_bs_w = 60.0;
  double p_fixed_rn_w = 20.0;
  double inv_drain_eff_bs = 2.6;
  double inv_drain_eff_rn = 5.0;
  int n_relays = 3;
  int n_users = 30;
  double cell_radius_m = 1500.0;
  double min_distance_m = 10.0;

  double convergence_tol = 1e-8;
  double dual_tol = 1e-9;
  double dual_step = 1e-2;
  int max_outer_iters = 50;
  int max_inner_iters = 5000;

  double pl_los_a_db = 100.7;
  double pl_los_b_db = 23.5;
  double pl_nlos_a_db = 131.1;
  double pl_nlos_b_db = 42.8;

  double snr_gap_linear() const { return db_to_linear(snr_gap_db); }
  double p_max_w() const { return dbm_to_watts(p_max_dbm); }

  /// Delta-gamma * N0 * W in Watts.
  double noise_power_w() const {
    return snr_gap_linear() * dbm_to_watts(noise_psd_dbm_hz) * subcarrier_bandwidth_hz;
  }

  double fixed_power_w() const { return p_fixed_bs_w + n_relays * p_fixed_rn_w; }

  /// Throws ParamError naming the first offending field.
  void validate() const {
    auto require = [](bool ok, const char* field, const char* rule) {
      if (!ok) throw ParamError(std::string(field) + ": " + rule);
    };
    require(n_subcarriers > 0, "n_subcarriers", "must be positive");
    require(n_users > 0, "n_users", "must be positive");
    require(n_relays >= 0, "n_relays", "must be nonnegative");
    require(subcarrier_bandwidth_hz > 0 && std::isfinite(subcarrier_bandwidth_hz),
            "subcarrier_bandwidth_hz", "must be positive");
    require(std::isfinite(noise_psd_dbm_hz), "noise_psd_dbm_hz", "must be finite");
    require(snr_gap_db >= 0 && std::isfinite(snr_gap_db), "snr_gap_db", "must be >= 0");
    require(std::isfinite(p_max_dbm), "p_max_dbm", "must be finite");
    require(p_fixed_bs_w >= 0, "p_fixed_bs_w", "must be nonnegative");
    require(p_fixed_rn_w >= 0, "p_fixed_rn_w", "must be nonnegative");
    require(inv_drain_eff_bs > 1, "inv_drain_eff_bs", "must exceed 1");
    require(inv_drain_eff_rn > 1, "inv_drain_eff_rn", "must exceed 1");
    require(cell_radius_m > 0, "cell_radius_m", "must be positive");
    require(min_distance_m > 0 && min_distance_m < cell_radius_m, "min_distance_m",
            "must lie in (0, cell_radius_m)");
    require(convergence_tol > 0, "convergence_tol", "must be positive");
    require(dual_tol > 0, "dual_tol", "must be positive");
    require(dual_step > 0, "dual_step", "must be positive");
    require(max_outer_iters > 0, "max_outer_iters", "must be positive");
    require(max_inner_iters > 0, "max_inner_iters", "must be positive");
    require(std::isfinite(pl_los_a_db) && std::isfinite(pl_los_b_db), "pl_los", "must be finite");
    require(std::isfinite(pl_nlos_a_db) && std::isfinite(pl_nlos_b_db), "pl_nlos",
            "must be finite");
    require(pl_los_b_db > 0 && pl_nlos_b_db > 0, "pl_*_b_db", "slope must be positive");
    const double noise = noise_power_w();
    require(noise > 0 && std::isfinite(noise), "noise_psd_dbm_hz",
            "derived noise power must be finite and positive");
    const double pmax = p_max_w();
    require(pmax > 0 && std::isfinite(pmax), "p_max_dbm",
            "derived budget must be finite and positive");
  }
};

}  // namespace eerelay
