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


#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "eerelay/model.hpp"
#include "eerelay/objective.hpp"
#include "eerelay/oracle.hpp"
#include "eerelay/solver.hpp"

namespace {

using namespace eerelay;

SystemParams dims(int k, int n, int m, double p_max_dbm = 0.0) {
  SystemParams p;
  p.n_users = k;
  p.n_subcarriers = n;
  p.n_relays = m;
  p.p_max_dbm = p_max_dbm;
  return p;
}

ChannelRealization random_channel(const SystemParams& p, std::uint64_t seed) {
  return generate_channel(generate_topology(p, seed), p, seed * 7 + 3);
}

GridSpec grid(int levels, int betas) {
  GridSpec g;
  g.levels_per_power = levels;
  g.beta_levels = betas;
  return g;
}

// Independent brute force: rate and EE on every power level of one link.
TEST(Oracle, SingleLinkLineSearch) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SystemParams p = dims(1, 1, 0, 40.0);
    p.cell_radius_m = 400.0;
    const ChannelRealization c = random_channel(p, seed);
    const int levels = 64;
    double best = 0.0;
    for (int j = 0; j <= levels; ++j) {
      const double w = p.p_max_w() * j / levels;
      const double se = std::log2(1.0 + w * c.bs_ue(0, 0) / p.noise_power_w());
      best = std::max(best, se / (p.fixed_power_w() + p.inv_drain_eff_bs * w));
    }
    const OracleResult r = oracle_best_ee(c, p, grid(levels, 4));
    EXPECT_NEAR(r.value, best, 1e-15);
    EXPECT_EQ(r.evaluations, static_cast<std::uint64_t>(levels + 2));
  }
}

TEST(Oracle, SingleLinkSeSpendsEverything) {
  const SystemParams p = dims(1, 1, 0, 0.0);
  const ChannelRealization c = random_channel(p, 2);
  const OracleResult r = oracle_best_se(c, p, grid(32, 4));
  EXPECT_DOUBLE_EQ(r.allocation.p_direct(0, 0), p.p_max_w());
  EXPECT_DOUBLE_EQ(r.value, direct_rate(p.p_max_w(), c.bs_ue(0, 0), p));
}

TEST(Oracle, TinyGainsPreferZeroPower) {
  const SystemParams p = dims(2, 2, 1, 0.0);
  ChannelRealization c = random_channel(p, 1);
  c.bs_ue.setConstant(1e-30);
  c.bs_rn.setConstant(1e-30);
  c.rn_ue.setConstant(1e-30);
  const OracleResult r = oracle_best_ee(c, p, grid(8, 4));
  EXPECT_NEAR(r.value, 0.0, 1e-12);
  EXPECT_EQ(r.allocation.total_transmit_power(), 0.0);
}

TEST(Oracle, SeAllocationSpendsBudget) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SystemParams p = dims(2, 2, 1, 0.0);
    const ChannelRealization c = random_channel(p, seed);
    const OracleResult r = oracle_best_se(c, p, grid(16, 8));
    EXPECT_NEAR(r.allocation.total_transmit_power(), p.p_max_w(), 1e-12 * p.p_max_w());
  }
}

TEST(Oracle, SeOptimumDominatesEeOptimumSe) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SystemParams p = dims(2, 2, 1, 10.0);
    const ChannelRealization c = random_channel(p, seed);
    const OracleResult se = oracle_best_se(c, p, grid(16, 8));
    const OracleResult ee = oracle_best_ee(c, p, grid(16, 8));
    EXPECT_GE(se.value, system_se(ee.allocation, c, p));
    EXPECT_GE(ee.value, energy_efficiency(se.allocation, c, p));
  }
}

TEST(Oracle, ValueMatchesObjectiveOfAllocation) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SystemParams p = dims(2, 2, 1, 0.0);
    const ChannelRealization c = random_channel(p, seed);
    const OracleResult r = oracle_best_ee(c, p, grid(12, 6));
    EXPECT_NEAR(energy_efficiency(r.allocation, c, p), r.value, 1e-15 * r.value);
    EXPECT_TRUE(check_feasible(r.allocation, p).empty());
  }
}

TEST(Oracle, EvaluationCountMatchesClosedForm) {
  const SystemParams p = dims(2, 2, 1, 0.0);
  const ChannelRealization c = random_channel(p, 1);
  const GridSpec g = grid(6, 4);
  const OracleResult r = oracle_best_ee(c, p, g);
  EXPECT_EQ(r.evaluations, detail::oracle_enumeration_count(2, 2, true, g));
}

TEST(Oracle, RefinedGridNeverWorse) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const SystemParams p = dims(2, 2, 1, 0.0);
    const ChannelRealization c = random_channel(p, seed);
    const double coarse = oracle_best_ee(c, p, grid(8, 4)).value;
    const double fine = oracle_best_ee(c, p, grid(16, 8)).value;
    EXPECT_GE(fine, coarse);
  }
}

TEST(Oracle, DinkelbachWithinSlack) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SystemParams p = dims(2, 2, 1, 0.0);
    p.cell_radius_m = 1000.0;
    const ChannelRealization c = random_channel(p, seed);
    const OracleResult r = oracle_best_ee(c, p, grid(32, 16));
    const double ee = dinkelbach_solve(c, p).second.final_ee;
    EXPECT_GE(ee, r.value - r.grid_slack);
    EXPECT_LE(ee, (r.value + r.grid_slack) * (1 + 1e-3));
  }
}

TEST(Oracle, BudgetRefusal) {
  const SystemParams p = dims(3, 6, 1, 0.0);
  const ChannelRealization c = random_channel(p, 1);
  GridSpec g = grid(32, 16);
  g.budget = 1000;
  try {
    oracle_best_ee(c, p, g);
    FAIL();
  } catch (const OracleBudgetError& e) {
    EXPECT_GT(e.required(), 1000u);
    EXPECT_EQ(e.kind(), "OracleBudgetError");
  }
}

TEST(Oracle, RejectsCoarseGrid) {
  const SystemParams p = dims(1, 1, 0);
  EXPECT_THROW(oracle_best_ee(random_channel(p, 1), p, grid(1, 4)), ParamError);
  EXPECT_THROW(oracle_best_ee(random_channel(p, 1), p, grid(4, 1)), ParamError);
}

TEST(Oracle, BetaGridExcludesEndpoints) {
  const SystemParams p = dims(1, 1, 1, 0.0);
  ChannelRealization c = random_channel(p, 3);
  c.bs_ue.setConstant(1e-30);  // forces AF
  const OracleResult r = oracle_best_se(c, p, grid(8, 4));
  ASSERT_EQ(r.allocation.assignment[0].protocol, Protocol::AmplifyForward);
  EXPECT_GT(r.allocation.p_af_bs(0, 0), 0.0);
  EXPECT_GT(r.allocation.p_af_rn(0, 0), 0.0);
}

}  // namespace
