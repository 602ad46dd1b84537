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
#include <string>
#include <vector>

#include <Eigen/Core>

#include "eerelay/model.hpp"
#include "eerelay/params.hpp"

namespace eerelay {

enum class Protocol : std::uint8_t { Unused, Direct, AmplifyForward };

inline const char* to_string(Protocol p) {
  switch (p) {
    case Protocol::Direct: return "direct";
    case Protocol::AmplifyForward: return "af";
    case Protocol::Unused: break;
  }
  return "unused";
}

/// Owner of one subcarrier. `user` is -1 when the subcarrier is unused.
struct SubcarrierAssignment {
  Protocol protocol = Protocol::Unused;
  int user = -1;

  static SubcarrierAssignment unused() { return {}; }
  static SubcarrierAssignment direct(int k) { return {Protocol::Direct, k}; }
  static SubcarrierAssignment af(int k) { return {Protocol::AmplifyForward, k}; }
  friend bool operator==(const SubcarrierAssignment&, const SubcarrierAssignment&) = default;
};

/// Binary subcarrier assignment plus transmit powers in Watts.
struct Allocation {
  std::vector<SubcarrierAssignment> assignment;  // N
  Eigen::MatrixXd p_direct;                      // K x N
  Eigen::MatrixXd p_af_bs;                       // K x N
  Eigen::MatrixXd p_af_rn;                       // K x N

  static Allocation zeros(int users, int subcarriers) {
    Allocation a;
    a.assignment.assign(subcarriers, SubcarrierAssignment::unused());
    a.p_direct = Eigen::MatrixXd::Zero(users, subcarriers);
    a.p_af_bs = Eigen::MatrixXd::Zero(users, subcarriers);
    a.p_af_rn = Eigen::MatrixXd::Zero(users, subcarriers);
    return a;
  }

  int users() const { return static_cast<int>(p_direct.rows()); }
  int subcarriers() const { return static_cast<int>(assignment.size()); }

  double total_transmit_power() const {
    return p_direct.sum() + p_af_bs.sum() + p_af_rn.sum();
  }
};

namespace detail {

inline void require_nonnegative(double p, const char* what) {
  if (!(p >= 0.0)) throw ParamError(std::string(what) + ": power must be nonnegative");
}

inline void require_shape(const Allocation& alloc) {
  const int k = alloc.users(), n = alloc.subcarriers();
  auto ok = [&](const Eigen::MatrixXd& m) { return m.rows() == k && m.cols() == n; };
  if (!ok(alloc.p_af_bs) || !ok(alloc.p_af_rn) || alloc.p_direct.cols() != n)
    throw DimensionError("allocation power matrices disagree with assignment length");
}

}  // namespace detail

/// log2(1 + p g / (Δγ N0 W)), bits/s/Hz.
inline double direct_rate(double p_w, double gain, const SystemParams& params) {
  detail::require_nonnegative(p_w, "direct_rate");
  return std::log2(1.0 + p_w * gain / params.noise_power_w());
}

/// High-SNR AF rate ½ log2(1 + ab / (Δγ N0 W (a + b))) with a, b the
/// received powers of the two hops.
inline double af_rate(double p_bs_w, double gain_bs_rn, double p_rn_w, double gain_rn_ue,
                      const SystemParams& params) {
  detail::require_nonnegative(p_bs_w, "af_rate");
  detail::require_nonnegative(p_rn_w, "af_rate");
  const double a = p_bs_w * gain_bs_rn;
  const double b = p_rn_w * gain_rn_ue;
  if (a + b <= 0.0) return 0.0;
  return 0.5 * std::log2(1.0 + a * b / (params.noise_power_w() * (a + b)));
}

/// Average spectral efficiency per subcarrier. Only the owner's powers on
/// each subcarrier contribute.
inline double system_se(const Allocation& alloc, const ChannelRealization& chan,
                        const SystemParams& params) {
  detail::require_shape(alloc);
  if (alloc.users() != chan.users() || alloc.subcarriers() != chan.subcarriers())
    throw DimensionError("allocation and channel dimensions differ");
  double sum = 0.0;
  for (int n = 0; n < alloc.subcarriers(); ++n) {
    const auto [protocol, k] = alloc.assignment[n];
    if (protocol == Protocol::Direct) {
      sum += direct_rate(alloc.p_direct(k, n), chan.bs_ue(k, n), params);
    } else if (protocol == Protocol::AmplifyForward) {
      if (!chan.has_relays())
        throw DimensionError("subcarrier " + std::to_string(n) +
                             " uses AF in a cell without relays");
      sum += af_rate(alloc.p_af_bs(k, n), chan.first_hop(k, n), alloc.p_af_rn(k, n),
                     chan.second_hop(k, n), params);
    }
  }
  return sum / alloc.subcarriers();
}

/// Fixed consumption plus amplifier-weighted transmit power; AF powers
/// are counted for half the slot.
inline double system_power(const Allocation& alloc, const SystemParams& params) {
  detail::require_shape(alloc);
  const double variable = params.inv_drain_eff_bs * alloc.p_direct.sum() +
                          0.5 * (params.inv_drain_eff_bs * alloc.p_af_bs.sum() +
                                 params.inv_drain_eff_rn * alloc.p_af_rn.sum());
  return params.fixed_power_w() + variable;
}

/// bits/Joule/Hz.
inline double energy_efficiency(const Allocation& alloc, const ChannelRealization& chan,
                                const SystemParams& params) {
  return system_se(alloc, chan, params) / system_power(alloc, params);
}

/// Fraction of subcarriers carried over a relay.
inline double af_fraction(const Allocation& alloc) {
  if (alloc.assignment.empty()) return 0.0;
  int af = 0;
  for (const auto& a : alloc.assignment) af += a.protocol == Protocol::AmplifyForward;
  return static_cast<double>(af) / static_cast<double>(alloc.assignment.size());
}

/// A constraint an allocation breaks. `user`/`subcarrier` are -1 when the
/// violation is not tied to one index.
struct Violation {
  std::string constraint;
  int user = -1;
  int subcarrier = -1;
  std::string detail;
};

/// Empty iff the allocation respects the power budget (within
/// P_max * (1 + dual_tol)), one owner per subcarrier, one protocol per
/// user-subcarrier pair and nonnegative powers.
inline std::vector<Violation> check_feasible(const Allocation& alloc,
                                             const SystemParams& params) {
  std::vector<Violation> out;
  const int k_count = alloc.users(), n_count = alloc.subcarriers();
  if (alloc.p_direct.cols() != n_count || alloc.p_af_bs.rows() != k_count ||
      alloc.p_af_bs.cols() != n_count || alloc.p_af_rn.rows() != k_count ||
      alloc.p_af_rn.cols() != n_count) {
    out.push_back({"shape", -1, -1, "power matrices disagree with assignment length"});
    return out;
  }

  for (int n = 0; n < n_count; ++n) {
    const auto [protocol, owner] = alloc.assignment[n];
    if (protocol != Protocol::Unused && (owner < 0 || owner >= k_count))
      out.push_back({"owner-index", owner, n, "assigned user out of range"});
    std::vector<int> powered;
    Protocol powered_protocol = Protocol::Unused;
    for (int k = 0; k < k_count; ++k) {
      const double pd = alloc.p_direct(k, n);
      const double pb = alloc.p_af_bs(k, n);
      const double pr = alloc.p_af_rn(k, n);
      if (!(pd >= 0) || !(pb >= 0) || !(pr >= 0))
        out.push_back({"nonnegative-power", k, n, "negative or NaN power"});
      const bool direct_on = pd > 0;
      const bool af_on = pb > 0 || pr > 0;
      if (direct_on && af_on)
        out.push_back({"single-protocol", k, n, "both direct and AF powers set"});
      if (direct_on || af_on) {
        powered.push_back(k);
        powered_protocol = direct_on ? Protocol::Direct : Protocol::AmplifyForward;
      }
    }
    if (powered.size() > 1) {
      out.push_back({"single-owner", -1, n,
                     std::to_string(powered.size()) + " users transmit on this subcarrier"});
    } else if (powered.size() == 1 &&
               (powered.front() != owner || powered_protocol != protocol)) {
      out.push_back({"assignment-mismatch", powered.front(), n,
                     "power set on a user/protocol that does not own the subcarrier"});
    }
  }

  const double total = alloc.total_transmit_power();
  const double limit = params.p_max_w() * (1.0 + params.dual_tol);
  if (!(total <= limit))
    out.push_back({"power-budget", -1, -1,
                   "total " + std::to_string(total) + " W exceeds " + std::to_string(limit)});
  return out;
}

}  // namespace eerelay
