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
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "eerelay/model.hpp"
#include "eerelay/objective.hpp"
#include "eerelay/params.hpp"

namespace eerelay {

class OracleBudgetError : public Error {
 public:
  OracleBudgetError(std::uint64_t required, std::uint64_t budget)
      : Error("OracleBudgetError", "exhaustive search needs " + std::to_string(required) +
                                       " evaluations, budget is " + std::to_string(budget)),
        required_(required) {}
  std::uint64_t required() const noexcept { return required_; }

 private:
  std::uint64_t required_;
};

/// Resolution of the exhaustive search.
///
/// Active subcarriers receive j / levels_per_power of the budget, j >= 0,
/// with the shares summing to at most one. AF pairs split their power at
/// beta = i / beta_levels, 0 < i < beta_levels.
struct GridSpec {
  int levels_per_power = 32;
  int beta_levels = 16;
  bool includes_zero = true;
  std::uint64_t budget = 500'000'000;

  void validate() const {
    if (levels_per_power < 2) throw ParamError("levels_per_power: must be >= 2");
    if (beta_levels < 2) throw ParamError("beta_levels: must be >= 2");
    if (!includes_zero) throw ParamError("includes_zero: the zero power level is mandatory");
  }
};

enum class OracleObjective { EnergyEfficiency, SpectralEfficiency };

struct OracleResult {
  double value = 0.0;
  Allocation allocation;
  /// Largest change of the objective between the optimum and any adjacent
  /// grid point.
  double grid_slack = 0.0;
  std::uint64_t evaluations = 0;
};

namespace detail {

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

inline std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return b > std::numeric_limits<std::uint64_t>::max() - a
             ? std::numeric_limits<std::uint64_t>::max()
             : a + b;
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // r * (n - k + i) / i stays integral at every step.
    const std::uint64_t m = saturating_mul(r, n - k + i);
    if (m == std::numeric_limits<std::uint64_t>::max()) return m;
    r = m / i;
  }
  return r;
}

inline std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r = saturating_mul(r, b);
  return r;
}

/// Number of objective evaluations a full enumeration performs.
inline std::uint64_t oracle_enumeration_count(int users, int subcarriers, bool relays,
                                              const GridSpec& grid) {
  std::uint64_t total = 0;
  const std::uint64_t k = users;
  const std::uint64_t betas = grid.beta_levels - 1;
  for (int a = 0; a <= subcarriers; ++a) {
    const std::uint64_t powers = binomial(grid.levels_per_power + a, a);
    const std::uint64_t owners = saturating_mul(binomial(subcarriers, a), ipow(k, a));
    for (int f = 0; f <= (relays ? a : 0); ++f) {
      std::uint64_t c = saturating_mul(owners, binomial(a, f));
      c = saturating_mul(c, saturating_mul(powers, ipow(betas, f)));
      total = saturating_add(total, c);
    }
  }
  return total;
}

class GridSearch {
 public:
  GridSearch(const ChannelRealization& chan, const SystemParams& params, const GridSpec& grid,
             OracleObjective objective)
      : chan_(chan), params_(params), grid_(grid), objective_(objective),
        users_(chan.users()), subcarriers_(chan.subcarriers()), relays_(chan.has_relays()),
        levels_(grid.levels_per_power), betas_(grid.beta_levels - 1) {
    options_ = 1 + users_ * (relays_ ? 2 : 1);
    build_tables();
  }

  std::uint64_t enumeration_count() const {
    return oracle_enumeration_count(users_, subcarriers_, relays_, grid_);
  }

  OracleResult run() {
    pattern_.assign(subcarriers_, 0);
    best_value_ = -std::numeric_limits<double>::infinity();
    evaluations_ = 0;
    for (;;) {
      active_.clear();
      for (int n = 0; n < subcarriers_; ++n)
        if (pattern_[n] != 0) active_.push_back(n);
      units_.assign(active_.size(), 0);
      beta_idx_.assign(active_.size(), 0);
      descend(0, levels_, 0.0, 0.0);
      if (!advance_pattern()) break;
    }
    OracleResult out;
    out.value = best_value_;
    out.evaluations = evaluations_;
    out.allocation = build_allocation();
    out.grid_slack = neighbour_slack();
    return out;
  }

 private:
  // Option 0 is unused, 1..K direct to user o-1, K+1..2K AF to user o-K-1.
  bool is_af(int option) const { return option > users_; }
  int user_of(int option) const { return is_af(option) ? option - users_ - 1 : option - 1; }
  int beta_count(int option) const { return is_af(option) ? betas_ : 1; }
  double beta_value(int b) const { return static_cast<double>(b + 1) / grid_.beta_levels; }

  std::size_t slot(int n, int option, int units, int b) const {
    return ((static_cast<std::size_t>(n) * options_ + option) * (levels_ + 1) + units) * betas_ +
           b;
  }

  void build_tables() {
    const std::size_t size =
        static_cast<std::size_t>(subcarriers_) * options_ * (levels_ + 1) * betas_;
    rate_.assign(size, 0.0);
    cost_.assign(size, 0.0);
    const double p_max = params_.p_max_w();
    for (int n = 0; n < subcarriers_; ++n) {
      for (int o = 1; o < options_; ++o) {
        const int k = user_of(o);
        for (int u = 0; u <= levels_; ++u) {
          const double p = p_max * u / levels_;
          for (int b = 0; b < beta_count(o); ++b) {
            const std::size_t s = slot(n, o, u, b);
            if (!is_af(o)) {
              rate_[s] = direct_rate(p, chan_.bs_ue(k, n), params_);
              cost_[s] = params_.inv_drain_eff_bs * p;
            } else {
              const double pb = beta_value(b) * p;
              const double pr = p - pb;
              rate_[s] = af_rate(pb, chan_.first_hop(k, n), pr, chan_.second_hop(k, n), params_);
              cost_[s] = 0.5 * (params_.inv_drain_eff_bs * pb + params_.inv_drain_eff_rn * pr);
            }
          }
        }
      }
    }
  }

  double score(double rate_sum, double cost_sum) const {
    const double se = rate_sum / subcarriers_;
    return objective_ == OracleObjective::SpectralEfficiency
               ? se
               : se / (params_.fixed_power_w() + cost_sum);
  }

  void descend(std::size_t depth, int remaining, double rate_sum, double cost_sum) {
    if (depth == active_.size()) {
      ++evaluations_;
      const double v = score(rate_sum, cost_sum);
      if (v > best_value_) {
        best_value_ = v;
        best_pattern_ = pattern_;
        best_active_ = active_;
        best_units_ = units_;
        best_beta_ = beta_idx_;
      }
      return;
    }
    const int n = active_[depth];
    const int o = pattern_[n];
    for (int u = 0; u <= remaining; ++u) {
      units_[depth] = u;
      for (int b = 0; b < beta_count(o); ++b) {
        beta_idx_[depth] = b;
        const std::size_t s = slot(n, o, u, b);
        descend(depth + 1, remaining - u, rate_sum + rate_[s], cost_sum + cost_[s]);
      }
    }
  }

  bool advance_pattern() {
    for (int n = 0; n < subcarriers_; ++n) {
      if (++pattern_[n] < options_) return true;
      pattern_[n] = 0;
    }
    return false;
  }

  double evaluate_point(const std::vector<int>& units, const std::vector<int>& betas) const {
    double rate = 0.0, cost = 0.0;
    for (std::size_t i = 0; i < best_active_.size(); ++i) {
      const std::size_t s = slot(best_active_[i], best_pattern_[best_active_[i]], units[i], betas[i]);
      rate += rate_[s];
      cost += cost_[s];
    }
    return score(rate, cost);
  }

  double neighbour_slack() const {
    const std::size_t a = best_active_.size();
    int used = 0;
    for (int u : best_units_) used += u;
    double slack = 0.0;
    auto consider = [&](const std::vector<int>& units, const std::vector<int>& betas) {
      slack = std::max(slack, std::abs(evaluate_point(units, betas) - best_value_));
    };
    for (std::size_t i = 0; i < a; ++i) {
      auto units = best_units_;
      if (used < levels_) {
        ++units[i];
        consider(units, best_beta_);
        --units[i];
      }
      if (units[i] > 0) {
        --units[i];
        consider(units, best_beta_);
        for (std::size_t j = 0; j < a; ++j) {
          if (j == i) continue;
          ++units[j];
          consider(units, best_beta_);
          --units[j];
        }
        ++units[i];
      }
      if (is_af(best_pattern_[best_active_[i]])) {
        auto betas = best_beta_;
        if (betas[i] > 0) {
          --betas[i];
          consider(best_units_, betas);
          ++betas[i];
        }
        if (betas[i] + 1 < betas_) {
          ++betas[i];
          consider(best_units_, betas);
        }
      }
    }
    return slack;
  }

  Allocation build_allocation() const {
    Allocation alloc = Allocation::zeros(users_, subcarriers_);
    const double p_max = params_.p_max_w();
    for (std::size_t i = 0; i < best_active_.size(); ++i) {
      const int n = best_active_[i];
      const int o = best_pattern_[n];
      const int k = user_of(o);
      const double p = p_max * best_units_[i] / levels_;
      if (!is_af(o)) {
        alloc.assignment[n] = SubcarrierAssignment::direct(k);
        alloc.p_direct(k, n) = p;
      } else {
        alloc.assignment[n] = SubcarrierAssignment::af(k);
        alloc.p_af_bs(k, n) = beta_value(best_beta_[i]) * p;
        alloc.p_af_rn(k, n) = p - alloc.p_af_bs(k, n);
      }
    }
    return alloc;
  }

  const ChannelRealization& chan_;
  const SystemParams& params_;
  GridSpec grid_;
  OracleObjective objective_;
  int users_, subcarriers_;
  bool relays_;
  int levels_, betas_;
  int options_ = 1;

  std::vector<double> rate_, cost_;
  std::vector<int> pattern_, active_, units_, beta_idx_;
  std::vector<int> best_pattern_, best_active_, best_units_, best_beta_;
  double best_value_ = 0.0;
  std::uint64_t evaluations_ = 0;
};

}  // namespace detail

/// Exhaustive search over every owner/protocol pattern and every grid
/// point of the power simplex. Refuses with OracleBudgetError when the
/// enumeration would exceed `grid.budget` evaluations.
inline OracleResult oracle_search(const ChannelRealization& chan, const SystemParams& params,
                                  const GridSpec& grid, OracleObjective objective) {
  params.validate();
  grid.validate();
  check_dimensions(chan, params);
  detail::GridSearch search(chan, params, grid, objective);
  const std::uint64_t required = search.enumeration_count();
  if (required > grid.budget) throw OracleBudgetError(required, grid.budget);
  return search.run();
}

inline OracleResult oracle_best_ee(const ChannelRealization& chan, const SystemParams& params,
                                   const GridSpec& grid = {}) {
  return oracle_search(chan, params, grid, OracleObjective::EnergyEfficiency);
}

inline OracleResult oracle_best_se(const ChannelRealization& chan, const SystemParams& params,
                                   const GridSpec& grid = {}) {
  return oracle_search(chan, params, grid, OracleObjective::SpectralEfficiency);
}

}  // namespace eerelay
