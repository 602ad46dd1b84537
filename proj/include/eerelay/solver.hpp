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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>
#include <Eigen/Core>

#include "eerelay/model.hpp"
#include "eerelay/objective.hpp"
#include "eerelay/params.hpp"

namespace eerelay {

class SolverError : public Error {
 public:
  explicit SolverError(const std::string& what) : Error("SolverError", what) {}
};

/// Prices of the per-subcarrier subproblems.
///
/// `q` is the Dinkelbach parameter applied to the summed rate, i.e. N times
/// the energy efficiency it stands for; `lambda` is the budget multiplier.
/// Both are in rate per unit of whatever power unit the gains refer to.
struct DualState {
  double lambda = 0.0;
  double q = 0.0;
  int inner_iter = 0;
  int outer_iter = 0;
};

inline constexpr double kLn2 = std::numbers::ln2;

// ---------------------------------------------------------------------------
// Closed-form subproblem solutions. Gains passed as `alpha*` are already
// divided by the noise power, so the functions work in any consistent
// power unit.

/// Direct-link water filling [1/(ln2 (q xi_B + lambda)) - 1/alpha]^+.
inline double direct_power(double alpha_d, const DualState& s, const SystemParams& params) {
  if (!(alpha_d > 0.0)) throw ParamError("direct_power: effective gain must be positive");
  const double price = s.q * params.inv_drain_eff_bs + s.lambda;
  if (!(price > 0.0))
    throw SolverError("direct_power: q = lambda = 0 leaves the water level unbounded");
  return std::max(0.0, 1.0 / (kLn2 * price) - 1.0 / alpha_d);
}

/// Share of an AF pair's power spent on the BS->RN hop, in the
/// cancellation-free form sqrt(g_ru Y) / (sqrt(g_br X) + sqrt(g_ru Y)).
inline double af_split(double gain_bs_rn, double gain_rn_ue, const DualState& s,
                       const SystemParams& params) {
  if (!(gain_bs_rn > 0.0) || !(gain_rn_ue > 0.0))
    throw ParamError("af_split: gains must be positive");
  const double x = s.q * params.inv_drain_eff_bs + 2.0 * s.lambda;
  const double y = s.q * params.inv_drain_eff_rn + 2.0 * s.lambda;
  if (!(x > 0.0) || !(y > 0.0)) throw SolverError("af_split: invalid dual state");
  const double a = std::sqrt(gain_bs_rn * x);
  const double b = std::sqrt(gain_rn_ue * y);
  return b / (a + b);
}

/// AF effective SNR gain for noise-normalized hop gains.
inline double af_effective_snr_gain(double alpha_bs_rn, double alpha_rn_ue, double beta) {
  if (!(beta > 0.0 && beta < 1.0))
    throw ParamError("af_effective_gain: beta must lie strictly inside (0, 1)");
  // beta (1-beta) g1 g2 / (beta g1 + (1-beta) g2), divided through by g1 g2.
  return beta * (1.0 - beta) / (beta / alpha_rn_ue + (1.0 - beta) / alpha_bs_rn);
}

/// beta (1-beta) g_br g_ru / ((beta g_br + (1-beta) g_ru) Δγ N0 W).
inline double af_effective_gain(double gain_bs_rn, double gain_rn_ue, double beta,
                                const SystemParams& params) {
  if (!(gain_bs_rn > 0.0) || !(gain_rn_ue > 0.0))
    throw ParamError("af_effective_gain: gains must be positive");
  const double noise = params.noise_power_w();
  return af_effective_snr_gain(gain_bs_rn / noise, gain_rn_ue / noise, beta);
}

/// Total AF water filling; the hops get beta P and (1 - beta) P.
inline double af_total_power(double alpha_a, double beta, const DualState& s,
                             const SystemParams& params) {
  if (!(alpha_a > 0.0)) throw ParamError("af_total_power: effective gain must be positive");
  if (!(beta > 0.0 && beta < 1.0)) throw ParamError("af_total_power: beta outside (0, 1)");
  const double x = s.q * params.inv_drain_eff_bs + 2.0 * s.lambda;
  const double y = s.q * params.inv_drain_eff_rn + 2.0 * s.lambda;
  const double price = beta * x + (1.0 - beta) * y;
  if (!(price > 0.0))
    throw SolverError("af_total_power: q = lambda = 0 leaves the water level unbounded");
  return std::max(0.0, 1.0 / (kLn2 * price) - 1.0 / alpha_a);
}

/// log2(1 + x) - x / (ln2 (1 + x)): the Lagrangian gain of using a
/// subcarrier at SNR x under its optimal power.
inline double subcarrier_gain(double snr) {
  if (snr <= 0.0) return 0.0;
  return (std::log1p(snr) - snr / (1.0 + snr)) / kLn2;
}

/// Closed-form solution of one (user, subcarrier) subproblem.
struct SubcarrierMetrics {
  double direct = 0.0;  // D
  double af = -std::numeric_limits<double>::infinity();  // A; -inf without relay
  double p_direct = 0.0;
  double beta = 0.5;
  double p_af_total = 0.0;
  double alpha_direct = 0.0;
  double alpha_af = 0.0;
};

/// Same as subcarrier_metrics but on noise-normalized gains.
inline SubcarrierMetrics evaluate_subproblem(double alpha_d, double alpha_br,
                                             double alpha_ru, bool has_relay,
                                             const DualState& s, const SystemParams& params) {
  SubcarrierMetrics m;
  m.alpha_direct = alpha_d;
  m.p_direct = direct_power(alpha_d, s, params);
  m.direct = subcarrier_gain(alpha_d * m.p_direct);
  if (has_relay) {
    m.beta = af_split(alpha_br, alpha_ru, s, params);
    m.alpha_af = af_effective_snr_gain(alpha_br, alpha_ru, m.beta);
    m.p_af_total = af_total_power(m.alpha_af, m.beta, s, params);
    m.af = 0.5 * subcarrier_gain(m.alpha_af * m.p_af_total);
  }
  return m;
}

/// D and A of user k on subcarrier n with `s` in SI units (per Watt).
inline SubcarrierMetrics subcarrier_metrics(int k, int n, const ChannelRealization& chan,
                                            const DualState& s, const SystemParams& params) {
  const double noise = params.noise_power_w();
  const bool relay = chan.has_relays();
  return evaluate_subproblem(chan.bs_ue(k, n) / noise, relay ? chan.first_hop(k, n) / noise : 0,
                             relay ? chan.second_hop(k, n) / noise : 0, relay, s, params);
}

/// K x N table of subproblem solutions, row-major by user.
struct MetricTable {
  int users = 0;
  int subcarriers = 0;
  std::vector<SubcarrierMetrics> cells;

  MetricTable() = default;
  MetricTable(int k, int n) : users(k), subcarriers(n), cells(static_cast<std::size_t>(k) * n) {}
  SubcarrierMetrics& at(int k, int n) { return cells[static_cast<std::size_t>(k) * subcarriers + n]; }
  const SubcarrierMetrics& at(int k, int n) const {
    return cells[static_cast<std::size_t>(k) * subcarriers + n];
  }
};

/// Winner per subcarrier: the largest of all D and A, lowest user first and
/// Direct before AF on ties. A subcarrier whose best metric is not
/// positive stays unused.
inline std::vector<SubcarrierAssignment> allocate_subcarriers(const MetricTable& metrics) {
  std::vector<SubcarrierAssignment> out(metrics.subcarriers);
  for (int n = 0; n < metrics.subcarriers; ++n) {
    double best = 0.0;
    SubcarrierAssignment winner;
    for (int k = 0; k < metrics.users; ++k) {
      const auto& m = metrics.at(k, n);
      if (m.direct > best) {
        best = m.direct;
        winner = SubcarrierAssignment::direct(k);
      }
      if (m.af > best) {
        best = m.af;
        winner = SubcarrierAssignment::af(k);
      }
    }
    out[n] = winner;
  }
  return out;
}

// ---------------------------------------------------------------------------

/// Result of one inner (dual) solve at a fixed Dinkelbach parameter.
struct InnerSolution {
  Allocation allocation;
  double lambda = 0.0;  // budget multiplier, rate per Watt
  int iterations = 0;
  bool converged = false;
};

namespace detail {

// Powers are normalized by P_max and gains by Δγ N0 W / P_max, so that
// alpha * p is the received SNR and the budget is sum(p) <= 1.
struct NormalizedInstance {
  int users = 0;
  int subcarriers = 0;
  bool has_relay = false;
  Eigen::MatrixXd alpha_d, alpha_br, alpha_ru;
  double p_max_w = 1.0;

  NormalizedInstance(const ChannelRealization& chan, const SystemParams& params)
      : users(chan.users()), subcarriers(chan.subcarriers()), has_relay(chan.has_relays()),
        p_max_w(params.p_max_w()) {
    const double scale = p_max_w / params.noise_power_w();
    alpha_d = chan.bs_ue * scale;
    if (has_relay) {
      alpha_br.resize(users, subcarriers);
      for (int k = 0; k < users; ++k)
        for (int n = 0; n < subcarriers; ++n) alpha_br(k, n) = chan.first_hop(k, n) * scale;
      alpha_ru = chan.rn_ue * scale;
    }
  }

  SubcarrierMetrics solve(int k, int n, const DualState& s, const SystemParams& params) const {
    return evaluate_subproblem(alpha_d(k, n), has_relay ? alpha_br(k, n) : 0.0,
                               has_relay ? alpha_ru(k, n) : 0.0, has_relay, s, params);
  }
};

struct DualEvaluation {
  double lambda = 0.0;
  std::vector<SubcarrierAssignment> assignment;
  double total_power = 0.0;  // normalized
};

inline double winner_power(const SubcarrierMetrics& m, Protocol p) {
  if (p == Protocol::Direct) return m.p_direct;
  if (p == Protocol::AmplifyForward) return m.p_af_total;
  return 0.0;
}

inline DualEvaluation evaluate_dual(const NormalizedInstance& inst, const DualState& s,
                                    const SystemParams& params) {
  MetricTable table(inst.users, inst.subcarriers);
  for (int k = 0; k < inst.users; ++k)
    for (int n = 0; n < inst.subcarriers; ++n) table.at(k, n) = inst.solve(k, n, s, params);
  DualEvaluation ev;
  ev.lambda = s.lambda;
  ev.assignment = allocate_subcarriers(table);
  for (int n = 0; n < inst.subcarriers; ++n) {
    const auto [p, k] = ev.assignment[n];
    if (p != Protocol::Unused) ev.total_power += winner_power(table.at(k, n), p);
  }
  return ev;
}

/// Powers of a fixed assignment at one multiplier, normalized units.
struct FixedAssignmentPowers {
  std::vector<double> power;  // total per subcarrier
  std::vector<double> beta;   // AF split per subcarrier
  double total = 0.0;
  double value = 0.0;  // summed rate minus q times variable power
};

inline FixedAssignmentPowers powers_for(const NormalizedInstance& inst,
                                        const std::vector<SubcarrierAssignment>& assignment,
                                        const DualState& s, const SystemParams& params) {
  FixedAssignmentPowers out;
  out.power.assign(inst.subcarriers, 0.0);
  out.beta.assign(inst.subcarriers, 0.0);
  for (int n = 0; n < inst.subcarriers; ++n) {
    const auto [p, k] = assignment[n];
    if (p == Protocol::Direct) {
      const double alpha = inst.alpha_d(k, n);
      const double pw = direct_power(alpha, s, params);
      out.power[n] = pw;
      out.value += std::log2(1.0 + alpha * pw) - s.q * params.inv_drain_eff_bs * pw;
    } else if (p == Protocol::AmplifyForward) {
      const double beta = af_split(inst.alpha_br(k, n), inst.alpha_ru(k, n), s, params);
      const double alpha = af_effective_snr_gain(inst.alpha_br(k, n), inst.alpha_ru(k, n), beta);
      const double pw = af_total_power(alpha, beta, s, params);
      out.power[n] = pw;
      out.beta[n] = beta;
      out.value += 0.5 * std::log2(1.0 + alpha * pw) -
                   0.5 * s.q *
                       (params.inv_drain_eff_bs * beta + params.inv_drain_eff_rn * (1.0 - beta)) *
                       pw;
    }
    out.total += out.power[n];
  }
  return out;
}

/// Water-fills a fixed assignment so the budget is met exactly (or left
/// slack with lambda = 0 when the Dinkelbach price alone bounds the powers).
inline std::pair<FixedAssignmentPowers, double> fill_assignment(
    const NormalizedInstance& inst, const std::vector<SubcarrierAssignment>& assignment,
    double q, double lambda_hint, const SystemParams& params) {
  const bool any = std::any_of(assignment.begin(), assignment.end(),
                               [](const auto& a) { return a.protocol != Protocol::Unused; });
  auto at = [&](double lambda) {
    return powers_for(inst, assignment, DualState{lambda, q}, params);
  };
  if (!any) {
    const double lambda = q > 0.0 ? 0.0 : lambda_hint;
    return {at(lambda), lambda};
  }
  if (q > 0.0) {
    auto zero = at(0.0);
    if (zero.total <= 1.0) return {std::move(zero), 0.0};
  }
  auto excess = [&](double lambda) { return at(lambda).total - 1.0; };

  // Total power is continuous and nonincreasing in lambda.
  double lo = q > 0.0 ? 0.0 : lambda_hint;
  double hi = lambda_hint;
  double f_lo = excess(lo);
  while (f_lo < 0.0) {
    hi = lo;
    lo *= 0.5;
    f_lo = excess(lo);
  }
  double f_hi = excess(hi);
  while (f_hi > 0.0) {
    lo = hi;
    f_lo = f_hi;
    hi *= 2.0;
    f_hi = excess(hi);
  }
  double root = hi;
  if (f_lo == 0.0) {
    root = lo;
  } else if (f_hi != 0.0) {
    std::uintmax_t max_iter = 200;
    const auto r = boost::math::tools::toms748_solve(
        excess, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(50), max_iter);
    root = 0.5 * (r.first + r.second);
    hi = r.second;
  }
  auto powers = at(root);
  if (powers.total > 1.0) {
    // Overshoot within the final bracket; the upper end never exceeds the budget.
    auto upper = at(hi);
    if (upper.total <= 1.0) return {std::move(upper), hi};
  }
  return {std::move(powers), root};
}

inline Allocation to_allocation(const NormalizedInstance& inst,
                                const std::vector<SubcarrierAssignment>& assignment,
                                const FixedAssignmentPowers& powers) {
  Allocation alloc = Allocation::zeros(inst.users, inst.subcarriers);
  alloc.assignment = assignment;
  const double scale = powers.total > 1.0 ? inst.p_max_w / powers.total : inst.p_max_w;
  for (int n = 0; n < inst.subcarriers; ++n) {
    const auto [p, k] = assignment[n];
    const double watts = powers.power[n] * scale;
    if (watts <= 0.0) continue;
    if (p == Protocol::Direct) {
      alloc.p_direct(k, n) = watts;
    } else if (p == Protocol::AmplifyForward) {
      alloc.p_af_bs(k, n) = powers.beta[n] * watts;
      alloc.p_af_rn(k, n) = watts - alloc.p_af_bs(k, n);
    }
  }
  return alloc;
}

}  // namespace detail

/// Maximizes summed rate minus N q times consumed power under the budget,
/// by dual decomposition over the multiplier.
///
/// Each iteration solves all K x N subproblems in closed form at the current
/// multiplier, assigns subcarriers by the winner rule and takes a projected
/// constant-step subgradient step on the budget residual. The step is
/// safeguarded by the bracket of multipliers seen so far: a proposal that
/// leaves the bracket, or two steps that fail to halve it, is replaced by
/// bisection. The loop stops when the budget is met within dual_tol, when
/// the budget is slack at lambda = 0, or when the bracket collapses on a
/// discontinuity of the winner rule. The surviving assignment(s) are then
/// water-filled to the exact budget and the better one returned.
///
/// `q` is an energy efficiency in bits/Joule/Hz.
inline InnerSolution inner_solve(const ChannelRealization& chan, double q,
                                 const SystemParams& params) {
  params.validate();
  check_dimensions(chan, params);
  if (!(q >= 0.0) || !std::isfinite(q)) throw ParamError("inner_solve: q must be >= 0");

  const detail::NormalizedInstance inst(chan, params);
  const double q_norm = q * inst.subcarriers * inst.p_max_w;
  const double tol = params.dual_tol;

  DualState state{q_norm > 0.0 ? 0.0 : 1.0, q_norm};
  bool has_lo = false, has_hi = false;
  detail::DualEvaluation lo_eval, hi_eval, current;
  double width_ref = 0.0;
  int stale = 0;

  InnerSolution out;
  std::vector<detail::DualEvaluation> candidates;
  for (int it = 1; it <= params.max_inner_iters; ++it) {
    state.inner_iter = it;
    out.iterations = it;
    current = detail::evaluate_dual(inst, state, params);
    const double residual = 1.0 - current.total_power;

    if (std::abs(residual) <= tol || (residual > 0.0 && state.lambda == 0.0)) {
      candidates.push_back(current);
      out.converged = true;
      break;
    }
    if (residual > 0.0) {
      has_hi = true;
      hi_eval = current;
    } else {
      has_lo = true;
      lo_eval = current;
    }
    if (has_lo && has_hi && hi_eval.lambda - lo_eval.lambda <= 1e-13 * hi_eval.lambda) {
      candidates.push_back(lo_eval);
      candidates.push_back(hi_eval);
      out.converged = true;
      break;
    }

    const double proposal = std::max(0.0, state.lambda - params.dual_step * residual);
    double next;
    if (has_lo && has_hi) {
      const double lo = lo_eval.lambda, hi = hi_eval.lambda;
      const double width = hi - lo;
      if (width_ref == 0.0 || width <= 0.5 * width_ref) {
        width_ref = width;
        stale = 0;
      } else {
        ++stale;
      }
      const bool inside = proposal > lo && proposal < hi;
      next = (inside && stale < 2) ? proposal : 0.5 * (lo + hi);
    } else if (has_lo) {
      next = std::max(proposal, 2.0 * state.lambda);
    } else {
      next = proposal > 0.0 ? std::min(proposal, 0.5 * state.lambda) : 0.5 * state.lambda;
    }
    state.lambda = next;
  }
  if (candidates.empty()) candidates.push_back(has_hi ? hi_eval : current);

  bool first = true;
  detail::FixedAssignmentPowers best_powers;
  double best_lambda = 0.0;
  for (const auto& cand : candidates) {
    auto [powers, lambda] =
        state.lambda == 0.0 && out.converged && candidates.size() == 1
            ? std::pair{detail::powers_for(inst, cand.assignment, DualState{0.0, q_norm}, params),
                        0.0}
            : detail::fill_assignment(inst, cand.assignment, q_norm,
                                      cand.lambda > 0.0 ? cand.lambda : 1.0, params);
    if (first || powers.value > best_powers.value) {
      best_powers = std::move(powers);
      best_lambda = lambda;
      out.allocation = detail::to_allocation(inst, cand.assignment, best_powers);
      first = false;
    }
  }
  out.lambda = best_lambda / inst.p_max_w;
  return out;
}

/// Per-outer-iteration traces and final metrics of a solve.
///
/// `q_trace` holds the Dinkelbach parameter used by each outer iteration and
/// `f_trace` the achieved SE - q P_T, both on the energy-efficiency scale
/// (bits/Joule/Hz and bits/s/Hz). `lambda_trace` holds each inner solve's
/// final multiplier in rate per Watt.
struct SolveReport {
  std::vector<double> q_trace;
  std::vector<double> lambda_trace;
  std::vector<double> f_trace;
  std::vector<int> inner_iters_trace;
  std::vector<double> ee_trace;  // EE of the incumbent after each outer iteration
  double final_se = 0.0;
  double final_ee = 0.0;
  double final_power_w = 0.0;
  double final_rho = 0.0;
  double final_q = 0.0;       // q of the inner solve that produced the final allocation
  double final_lambda = 0.0;  // its multiplier, rate per Watt
  bool converged = false;
  bool inner_converged = true;  // every inner solve met its stopping rule
  int total_inner_iters = 0;
  int outer_iters() const { return static_cast<int>(q_trace.size()); }
};

inline void fill_final_metrics(SolveReport& report, const Allocation& alloc,
                               const ChannelRealization& chan, const SystemParams& params) {
  report.final_se = system_se(alloc, chan, params);
  report.final_power_w = system_power(alloc, params);
  report.final_ee = report.final_se / report.final_power_w;
  report.final_rho = af_fraction(alloc);
}

/// Energy-efficiency maximization by Dinkelbach iteration, starting at
/// q = 0 and stopping once SE - q P_T drops below convergence_tol.
///
/// An inner result that scores below the incumbent at the current q is
/// discarded (the incumbent itself scores exactly zero there), so q never
/// decreases.
inline std::pair<Allocation, SolveReport> dinkelbach_solve(const ChannelRealization& chan,
                                                           const SystemParams& params) {
  params.validate();
  check_dimensions(chan, params);
  SolveReport report;
  Allocation incumbent;
  double inc_se = 0.0, inc_power = 0.0;
  double q = 0.0;

  for (int i = 0; i < params.max_outer_iters; ++i) {
    InnerSolution inner = inner_solve(chan, q, params);
    const double se = system_se(inner.allocation, chan, params);
    const double power = system_power(inner.allocation, params);
    // SE - q P with q = inc_se / inc_power, written so that an unchanged
    // allocation yields exactly zero.
    double f = i == 0 ? se : (se * inc_power - inc_se * power) / inc_power;
    if (i == 0 || f >= 0.0) {
      incumbent = std::move(inner.allocation);
      inc_se = se;
      inc_power = power;
      report.final_q = q;
      report.final_lambda = inner.lambda;
    } else {
      f = 0.0;
    }
    report.q_trace.push_back(q);
    report.f_trace.push_back(f);
    report.lambda_trace.push_back(inner.lambda);
    report.inner_iters_trace.push_back(inner.iterations);
    report.ee_trace.push_back(inc_se / inc_power);
    report.total_inner_iters += inner.iterations;
    report.inner_converged = report.inner_converged && inner.converged;
    if (f < params.convergence_tol) {
      report.converged = true;
      break;
    }
    q = inc_se / inc_power;
  }
  fill_final_metrics(report, incumbent, chan, params);
  return {std::move(incumbent), std::move(report)};
}

/// Spectral-efficiency maximization: the inner problem at q = 0.
inline std::pair<Allocation, SolveReport> sem_solve(const ChannelRealization& chan,
                                                    const SystemParams& params) {
  InnerSolution inner = inner_solve(chan, 0.0, params);
  SolveReport report;
  fill_final_metrics(report, inner.allocation, chan, params);
  report.q_trace.push_back(0.0);
  report.f_trace.push_back(report.final_se);
  report.lambda_trace.push_back(inner.lambda);
  report.inner_iters_trace.push_back(inner.iterations);
  report.ee_trace.push_back(report.final_ee);
  report.total_inner_iters = inner.iterations;
  report.final_lambda = inner.lambda;
  report.converged = inner.converged;
  report.inner_converged = inner.converged;
  return {std::move(inner.allocation), std::move(report)};
}

}  // namespace eerelay
