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


#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "eerelay/model.hpp"
#include "eerelay/objective.hpp"
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
  return generate_channel(generate_topology(p, seed), p, seed ^ 0x5bd1e995);
}

// Unit noise power: W = 1 Hz at 30 dBm/Hz.
SystemParams unit_noise() {
  SystemParams p;
  p.subcarrier_bandwidth_hz = 1.0;
  p.noise_psd_dbm_hz = 30.0;
  return p;
}

TEST(DirectPower, WaterLevelMinusInverseGain) {
  const SystemParams p;
  EXPECT_NEAR(direct_power(2.0, DualState{1.0 / kLn2, 0.0}, p), 0.5, 1e-15);
}

TEST(DirectPower, BoundaryIsZero) {
  const SystemParams p;
  EXPECT_NEAR(direct_power(1.0, DualState{1.0 / kLn2, 0.0}, p), 0.0, 1e-15);
  EXPECT_GE(direct_power(1.0, DualState{1.0 / kLn2, 0.0}, p), 0.0);
}

TEST(DirectPower, ClippedBelowWaterLevel) {
  const SystemParams p;
  EXPECT_EQ(direct_power(0.5, DualState{1.0 / kLn2, 0.0}, p), 0.0);
  EXPECT_EQ(direct_power(1e-3, DualState{0.0, 1.0}, p), 0.0);
}

TEST(DirectPower, UsesDinkelbachPrice) {
  const SystemParams p;
  const DualState s{0.3, 0.2};
  EXPECT_NEAR(direct_power(10.0, s, p), 1.0 / (kLn2 * (0.2 * 2.6 + 0.3)) - 0.1, 1e-15);
}

TEST(DirectPower, RejectsDegenerateState) {
  const SystemParams p;
  EXPECT_THROW(direct_power(0.0, DualState{1.0, 0.0}, p), ParamError);
  EXPECT_THROW(direct_power(1.0, DualState{0.0, 0.0}, p), SolverError);
}

// Split of the AF pair as printed, valid away from g_br X = g_ru Y.
double raw_split(double g_br, double g_ru, double x, double y) {
  return (-g_ru * y + std::sqrt(g_br * g_ru * x * y)) / (g_br * x - g_ru * y);
}

TEST(AfSplit, SymmetricProductsGiveHalf) {
  const SystemParams p;
  const DualState s{0.7, 0.3};
  const double x = 0.3 * 2.6 + 1.4, y = 0.3 * 5.0 + 1.4;
  EXPECT_DOUBLE_EQ(af_split(y, x, s, p), 0.5);
  EXPECT_DOUBLE_EQ(af_split(1.0, 1.0, DualState{1.0, 0.0}, p), 0.5);
}

TEST(AfSplit, FourToOneGivesOneThird) {
  const SystemParams p;
  const DualState s{0.5, 0.0};  // X = Y = 1
  EXPECT_NEAR(af_split(4.0, 1.0, s, p), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(raw_split(4.0, 1.0, 1.0, 1.0), 1.0 / 3.0, 1e-15);
}

TEST(AfSplit, MatchesRawFormula) {
  const SystemParams p;
  Engine rng(17);
  for (int i = 0; i < 200; ++i) {
    const double g_br = std::exp(8 * uniform_open(rng) - 4);
    const double g_ru = std::exp(8 * uniform_open(rng) - 4);
    const DualState s{uniform_open(rng), uniform_open(rng)};
    const double x = s.q * p.inv_drain_eff_bs + 2 * s.lambda;
    const double y = s.q * p.inv_drain_eff_rn + 2 * s.lambda;
    if (std::abs(g_br * x - g_ru * y) < 1e-3 * g_br * x) continue;
    const double beta = af_split(g_br, g_ru, s, p);
    EXPECT_NEAR(beta, raw_split(g_br, g_ru, x, y), 1e-9 * beta);
    EXPECT_GT(beta, 0.0);
    EXPECT_LT(beta, 1.0);
  }
}

TEST(AfSplit, StrongFirstHopTakesVanishingShare) {
  const SystemParams p;
  const DualState s{1.0, 0.1};
  double prev = 1.0;
  for (double g = 1.0; g < 1e13; g *= 100) {
    const double beta = af_split(g, 1.0, s, p);
    EXPECT_LT(beta, prev);
    prev = beta;
  }
  EXPECT_LT(prev, 1e-5);
}

TEST(AfSplit, RejectsInvalidState) {
  const SystemParams p;
  EXPECT_THROW(af_split(1.0, 1.0, DualState{0.0, 0.0}, p), SolverError);
}

TEST(AfEffectiveGain, SymmetricHalfSplit) {
  const SystemParams p = unit_noise();
  EXPECT_NEAR(p.noise_power_w(), 1.0, 1e-15);
  EXPECT_NEAR(af_effective_gain(4.0, 4.0, 0.5, p), 1.0, 1e-15);
}

TEST(AfEffectiveGain, MatchesPrintedForm) {
  const SystemParams p;
  const double nz = p.noise_power_w();
  for (double beta : {0.1, 0.37, 0.5, 0.81}) {
    const double g1 = 3e-11, g2 = 7e-13;
    const double printed = beta * (1 - beta) * g1 * g2 / ((beta * g1 + (1 - beta) * g2) * nz);
    EXPECT_NEAR(af_effective_gain(g1, g2, beta, p), printed, 1e-12 * printed);
  }
}

TEST(AfEffectiveGain, VanishesAtBoundary) {
  EXPECT_LT(af_effective_snr_gain(1.0, 1.0, 1e-12), 1e-11);
  EXPECT_LT(af_effective_snr_gain(1.0, 1.0, 1.0 - 1e-12), 1e-11);
  EXPECT_THROW(af_effective_snr_gain(1.0, 1.0, 0.0), ParamError);
  EXPECT_THROW(af_effective_snr_gain(1.0, 1.0, 1.0), ParamError);
}

TEST(AfEffectiveGain, PositiveInsideUnitInterval) {
  for (int i = 1; i < 100; ++i) EXPECT_GT(af_effective_snr_gain(0.3, 2.0, i / 100.0), 0.0);
}

TEST(AfTotalPower, SymmetricAmplifiersReduceToDirect) {
  SystemParams p;
  p.inv_drain_eff_rn = p.inv_drain_eff_bs;
  const DualState s{0.4, 0.25};
  for (double alpha : {0.5, 2.0, 10.0, 1e3})
    EXPECT_NEAR(af_total_power(alpha, 0.5, s, p),
                direct_power(alpha, DualState{2 * s.lambda, s.q}, p), 1e-14);
}

TEST(AfTotalPower, ClippedForWeakGain) {
  const SystemParams p;
  EXPECT_EQ(af_total_power(1e-6, 0.5, DualState{1.0, 0.0}, p), 0.0);
}

TEST(AfTotalPower, Substitution) {
  const SystemParams p;
  EXPECT_NEAR(af_total_power(2.0, 0.5, DualState{0.5 / kLn2, 0.0}, p), 0.5, 1e-15);
}

TEST(AfTotalPower, RejectsBoundaryBeta) {
  const SystemParams p;
  EXPECT_THROW(af_total_power(1.0, 0.0, DualState{1.0, 0.0}, p), ParamError);
  EXPECT_THROW(af_total_power(1.0, 1.0, DualState{1.0, 0.0}, p), ParamError);
}

TEST(SubcarrierGain, ZeroPower) { EXPECT_EQ(subcarrier_gain(0.0), 0.0); }

TEST(SubcarrierGain, UnitSnr) {
  EXPECT_NEAR(subcarrier_gain(1.0), 1.0 - 1.0 / (2.0 * kLn2), 1e-15);
  EXPECT_NEAR(subcarrier_gain(1.0), 0.27865, 1e-5);
}

TEST(SubcarrierGain, StrictlyIncreasing) {
  double prev = 0.0;
  for (double x = 1e-6; x < 1e6; x *= 1.1) {
    const double g = subcarrier_gain(x);
    EXPECT_GT(g, prev);
    prev = g;
  }
}

TEST(SubcarrierMetrics, ZeroExactlyWhenPowerZero) {
  const SystemParams p;
  const auto m = evaluate_subproblem(0.5, 0.5, 0.5, true, DualState{1.0 / kLn2, 0.0}, p);
  EXPECT_EQ(m.p_direct, 0.0);
  EXPECT_EQ(m.direct, 0.0);
  EXPECT_EQ(m.p_af_total, 0.0);
  EXPECT_EQ(m.af, 0.0);
  const auto n = evaluate_subproblem(50., 0.5, 0.5, false, DualState{1.0 / kLn2, 0.0}, p);
  EXPECT_GT(n.direct, 0.0);
  EXPECT_EQ(n.af, -std::numeric_limits<double>::infinity());
}

TEST(SubcarrierMetrics, SiMatchesNormalized) {
  const SystemParams p = dims(2, 3, 1);
  const ChannelRealization c = random_channel(p, 4);
  const DualState s{3e5, 1.0};
  const double nz = p.noise_power_w();
  for (int k = 0; k < 2; ++k)
    for (int n = 0; n < 3; ++n) {
      const auto a = subcarrier_metrics(k, n, c, s, p);
      const auto b = evaluate_subproblem(c.bs_ue(k, n) / nz, c.first_hop(k, n) / nz,
                                         c.second_hop(k, n) / nz, true, s, p);
      EXPECT_EQ(a.direct, b.direct);
      EXPECT_EQ(a.af, b.af);
    }
}

MetricTable table(int k, int n) { return MetricTable(k, n); }

TEST(Allocate, SingleUserDirectBeatsAf) {
  MetricTable t = table(1, 1);
  t.at(0, 0).direct = 0.4;
  t.at(0, 0).af = 0.2;
  const auto a = allocate_subcarriers(t);
  EXPECT_EQ(a[0], SubcarrierAssignment::direct(0));
  t.at(0, 0).af = 0.5;
  EXPECT_EQ(allocate_subcarriers(t)[0], SubcarrierAssignment::af(0));
}

TEST(Allocate, AllZeroStaysUnused) {
  MetricTable t = table(3, 2);
  for (auto& c : t.cells) c.af = 0.0;
  for (const auto& a : allocate_subcarriers(t)) EXPECT_EQ(a, SubcarrierAssignment::unused());
}

TEST(Allocate, TiesGoToLowestUserThenDirect) {
  MetricTable t = table(3, 2);
  t.at(1, 0).direct = t.at(2, 0).direct = 0.7;
  t.at(0, 1).af = t.at(1, 1).direct = t.at(0, 1).direct = 0.3;
  const auto a = allocate_subcarriers(t);
  EXPECT_EQ(a[0], SubcarrierAssignment::direct(1));
  EXPECT_EQ(a[1], SubcarrierAssignment::direct(0));
}

TEST(InnerSolve, SlackBudgetEndsAtZeroMultiplier) {
  const SystemParams p = dims(2, 4, 1, 40.0);
  const ChannelRealization c = random_channel(p, 8);
  const InnerSolution s = inner_solve(c, 1.0, p);
  EXPECT_TRUE(s.converged);
  EXPECT_EQ(s.lambda, 0.0);
  EXPECT_LT(s.allocation.total_transmit_power(), p.p_max_w());
}

TEST(InnerSolve, ZeroPriceSaturatesBudget) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SystemParams p = dims(3, 6, 2, 10.0);
    const ChannelRealization c = random_channel(p, seed);
    const InnerSolution s = inner_solve(c, 0.0, p);
    EXPECT_TRUE(s.converged);
    EXPECT_NEAR(s.allocation.total_transmit_power() / p.p_max_w(), 1.0, p.dual_tol);
    EXPECT_GT(s.lambda, 0.0);
    EXPECT_TRUE(check_feasible(s.allocation, p).empty());
  }
}

TEST(InnerSolve, SingleLinkWaterFilling) {
  const SystemParams p = dims(1, 1, 0, 0.0);
  const ChannelRealization c = random_channel(p, 3);
  const double alpha = c.bs_ue(0, 0) / p.noise_power_w();
  const InnerSolution s = inner_solve(c, 0.0, p);
  ASSERT_EQ(s.allocation.assignment[0], SubcarrierAssignment::direct(0));
  const double at_lambda = direct_power(alpha, DualState{s.lambda, 0.0}, p);
  EXPECT_NEAR(s.allocation.p_direct(0, 0), at_lambda, 1e-9 * p.p_max_w());
  EXPECT_NEAR(s.allocation.p_direct(0, 0), p.p_max_w(), 1e-9 * p.p_max_w());
}

TEST(InnerSolve, SingleLinkUnconstrained) {
  const SystemParams p = dims(1, 1, 0, 40.0);
  const ChannelRealization c = random_channel(p, 3);
  const double alpha = c.bs_ue(0, 0) / p.noise_power_w();
  const double q = 1.0;
  const InnerSolution s = inner_solve(c, q, p);
  EXPECT_EQ(s.lambda, 0.0);
  EXPECT_NEAR(s.allocation.p_direct(0, 0), direct_power(alpha, DualState{0.0, q}, p), 1e-12);
}

TEST(InnerSolve, RejectsNegativePrice) {
  const SystemParams p = dims(1, 1, 0);
  EXPECT_THROW(inner_solve(random_channel(p, 1), -1.0, p), ParamError);
}

TEST(InnerSolve, BestEffortWhenIterationsRunOut) {
  SystemParams p = dims(3, 8, 1, 10.0);
  p.max_inner_iters = 2;
  const InnerSolution s = inner_solve(random_channel(p, 2), 0.0, p);
  EXPECT_FALSE(s.converged);
  EXPECT_TRUE(check_feasible(s.allocation, p).empty());
}

class Dinkelbach : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(Dinkelbach, TracesAndFixedPoint) {
  const SystemParams p = dims(4, 16, 3, 10.0);
  const ChannelRealization c = random_channel(p, GetParam());
  const auto [alloc, r] = dinkelbach_solve(c, p);
  ASSERT_TRUE(r.converged);
  EXPECT_LE(r.outer_iters(), 15);
  EXPECT_LE(r.total_inner_iters, 5000);
  EXPECT_EQ(r.q_trace.front(), 0.0);
  for (int i = 1; i < r.outer_iters(); ++i) {
    EXPECT_GE(r.q_trace[i], r.q_trace[i - 1]);
    EXPECT_GE(r.ee_trace[i], r.ee_trace[i - 1]);
  }
  EXPECT_GE(r.f_trace.back(), 0.0);
  EXPECT_LT(r.f_trace.back(), p.convergence_tol);
  EXPECT_NEAR(r.final_ee, r.q_trace.back(), p.convergence_tol);
  EXPECT_EQ(r.final_ee, r.ee_trace.back());
  EXPECT_EQ(r.final_ee, energy_efficiency(alloc, c, p));
  EXPECT_TRUE(check_feasible(alloc, p).empty());
}

TEST_P(Dinkelbach, DominanceOverSem) {
  for (double dbm : {-10.0, 10.0, 30.0}) {
    const SystemParams p = dims(4, 16, 3, dbm);
    const ChannelRealization c = random_channel(p, GetParam());
    const auto eem = dinkelbach_solve(c, p).second;
    const auto sem = sem_solve(c, p).second;
    EXPECT_GE(sem.final_se, eem.final_se * (1 - 1e-9));
    EXPECT_GE(eem.final_ee, sem.final_ee * (1 - 1e-9));
  }
}

TEST_P(Dinkelbach, CoincidesWithSemAtLowBudget) {
  const SystemParams p = dims(4, 16, 3, -20.0);
  const ChannelRealization c = random_channel(p, GetParam());
  const auto eem = dinkelbach_solve(c, p).second;
  const auto sem = sem_solve(c, p).second;
  EXPECT_NEAR(eem.final_ee / sem.final_ee, 1.0, 1e-3);
  EXPECT_NEAR(eem.final_power_w / sem.final_power_w, 1.0, 1e-6);
}

INSTANTIATE_TEST_SUITE_P(Seeds, Dinkelbach, ::testing::Values(1, 2, 3, 4, 5, 6));

TEST(Dinkelbach, NoRelayCellNeverUsesAf) {
  const SystemParams p = dims(3, 8, 0, 10.0);
  const auto [alloc, r] = dinkelbach_solve(random_channel(p, 9), p);
  EXPECT_EQ(r.final_rho, 0.0);
  for (const auto& a : alloc.assignment) EXPECT_NE(a.protocol, Protocol::AmplifyForward);
}

TEST(Dinkelbach, AfPairsPowerBothHops) {
  const SystemParams p = dims(4, 16, 3, 20.0);
  const ChannelRealization c = random_channel(p, 12);
  const auto [alloc, r] = dinkelbach_solve(c, p);
  for (int n = 0; n < 16; ++n) {
    const auto [proto, k] = alloc.assignment[n];
    if (proto != Protocol::AmplifyForward) continue;
    EXPECT_GT(alloc.p_af_bs(k, n), 0.0);
    EXPECT_GT(alloc.p_af_rn(k, n), 0.0);
  }
}

TEST(InnerSolve, NoRelaysMatchesDirectOnlyLimit) {
  // Relays whose links are useless leave the direct solution unchanged.
  SystemParams p = dims(2, 6, 1, 0.0);
  ChannelRealization with = random_channel(p, 21);
  with.bs_rn.setConstant(1e-40);
  with.rn_ue.setConstant(1e-40);
  SystemParams q = p;
  q.n_relays = 0;
  ChannelRealization without = with;
  without.bs_rn.resize(0, 6);
  without.rn_ue.resize(0, 6);
  without.relay_of_user.clear();
  const auto a = inner_solve(with, 0.0, p);
  const auto b = inner_solve(without, 0.0, q);
  EXPECT_EQ(a.allocation.assignment, b.allocation.assignment);
  EXPECT_NEAR(system_se(a.allocation, with, p), system_se(b.allocation, without, q), 1e-12);
}

}  // namespace
