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
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "eerelay/params.hpp"
#include "eerelay/random.hpp"

namespace eerelay {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Cell geometry. Relay indices are zero-based; `relay_of_user` is empty
/// exactly when there are no relays.
struct Topology {
  Point bs;
  std::vector<Point> relays;
  std::vector<Point> users;
  std::vector<int> relay_of_user;
};

/// Index of the relay closest to `ue`, lowest index on ties.
inline int nearest_relay(Point ue, const std::vector<Point>& relays) {
  int best = -1;
  double best_d = 0.0;
  for (int m = 0; m < static_cast<int>(relays.size()); ++m) {
    const double d = distance(ue, relays[m]);
    if (best < 0 || d < best_d) {
      best = m;
      best_d = d;
    }
  }
  return best;
}

/// Relays sit on the half-radius ring at sector centres; users are uniform
/// over the annulus [min_distance_m, cell_radius_m] around the BS.
inline Topology generate_topology(const SystemParams& params, std::uint64_t seed) {
  params.validate();
  Topology topo;
  const int m_count = params.n_relays;
  const double ring = params.cell_radius_m / 2.0;
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  for (int m = 0; m < m_count; ++m) {
    const double angle = kTwoPi * m / m_count + std::numbers::pi / m_count;
    topo.relays.push_back({ring * std::cos(angle), ring * std::sin(angle)});
  }

  Engine rng(seed);
  const double r0 = params.min_distance_m;
  const double r1 = params.cell_radius_m;
  for (int k = 0; k < params.n_users; ++k) {
    // Inverse CDF of a radius uniform over the annulus area.
    const double u = uniform_open(rng);
    const double r = std::sqrt(r0 * r0 + u * (r1 * r1 - r0 * r0));
    const double theta = kTwoPi * uniform_open(rng);
    const Point ue{r * std::cos(theta), r * std::sin(theta)};
    topo.users.push_back(ue);
    if (m_count > 0) topo.relay_of_user.push_back(nearest_relay(ue, topo.relays));
  }
  return topo;
}

enum class LinkClass { LineOfSight, NonLineOfSight };

/// Linear power gain 10^(-(A + B log10(d_km)) / 10).
inline double path_loss_gain(LinkClass link, double distance_m, const SystemParams& params) {
  if (!(distance_m > 0.0) || !std::isfinite(distance_m))
    throw ParamError("path_loss_gain: distance must be positive, got " +
                     std::to_string(distance_m));
  const bool los = link == LinkClass::LineOfSight;
  const double a = los ? params.pl_los_a_db : params.pl_nlos_a_db;
  const double b = los ? params.pl_los_b_db : params.pl_nlos_b_db;
  const double loss_db = a + b * std::log10(distance_m / 1000.0);
  return std::pow(10.0, -loss_db / 10.0);
}

/// Per-subcarrier linear power gains of every link in the cell.
///
/// `rn_ue(k, n)` is the gain from the relay assigned to user k. Both relay
/// matrices have zero rows when the cell has no relays.
struct ChannelRealization {
  Eigen::MatrixXd bs_ue;  // K x N
  Eigen::MatrixXd bs_rn;  // M x N
  Eigen::MatrixXd rn_ue;  // K x N, or 0 x N without relays
  std::vector<int> relay_of_user;
  std::uint64_t seed = 0;

  int users() const { return static_cast<int>(bs_ue.rows()); }
  int subcarriers() const { return static_cast<int>(bs_ue.cols()); }
  int relays() const { return static_cast<int>(bs_rn.rows()); }
  bool has_relays() const { return relays() > 0; }

  /// BS -> relay gain on the first hop serving user k.
  double first_hop(int k, int n) const { return bs_rn(relay_of_user[k], n); }
  double second_hop(int k, int n) const { return rn_ue(k, n); }
};

/// Throws DimensionError unless `chan` matches the K/N/M counts of `params`.
inline void check_dimensions(const ChannelRealization& chan, const SystemParams& params) {
  const int k = params.n_users, n = params.n_subcarriers, m = params.n_relays;
  if (chan.users() != k || chan.subcarriers() != n)
    throw DimensionError("channel is " + std::to_string(chan.users()) + "x" +
                         std::to_string(chan.subcarriers()) + ", params expect " +
                         std::to_string(k) + "x" + std::to_string(n));
  if (chan.relays() != m)
    throw DimensionError("channel has " + std::to_string(chan.relays()) +
                         " relays, params expect " + std::to_string(m));
  if (m > 0) {
    if (chan.bs_rn.cols() != n || chan.rn_ue.rows() != k || chan.rn_ue.cols() != n ||
        static_cast<int>(chan.relay_of_user.size()) != k)
      throw DimensionError("relay link matrices do not match K/N/M");
    for (int r : chan.relay_of_user)
      if (r < 0 || r >= m) throw DimensionError("relay_of_user index out of range");
  } else if (chan.rn_ue.size() != 0 || !chan.relay_of_user.empty()) {
    throw DimensionError("relay links present in a cell without relays");
  }
}

/// Path loss times unit-mean exponential fading per link and subcarrier.
/// BS->RN links are line-of-sight, every link towards a UE is not. Link
/// distances are floored at `min_distance_m`.
inline ChannelRealization generate_channel(const Topology& topo, const SystemParams& params,
                                           std::uint64_t seed) {
  params.validate();
  const int k_count = params.n_users, n_count = params.n_subcarriers;
  const int m_count = params.n_relays;
  if (static_cast<int>(topo.users.size()) != k_count ||
      static_cast<int>(topo.relays.size()) != m_count ||
      static_cast<int>(topo.relay_of_user.size()) != (m_count > 0 ? k_count : 0))
    throw DimensionError("topology does not match params (K=" + std::to_string(k_count) +
                         ", M=" + std::to_string(m_count) + ")");

  auto link_distance = [&](Point a, Point b) {
    return std::max(distance(a, b), params.min_distance_m);
  };

  ChannelRealization chan;
  chan.seed = seed;
  chan.relay_of_user = topo.relay_of_user;
  chan.bs_ue.resize(k_count, n_count);
  chan.bs_rn.resize(m_count, n_count);
  chan.rn_ue.resize(m_count > 0 ? k_count : 0, n_count);

  Engine rng(seed);
  for (int k = 0; k < k_count; ++k) {
    const double pl = path_loss_gain(LinkClass::NonLineOfSight,
                                     link_distance(topo.bs, topo.users[k]), params);
    for (int n = 0; n < n_count; ++n) chan.bs_ue(k, n) = pl * unit_exponential(rng);
  }
  for (int m = 0; m < m_count; ++m) {
    const double pl = path_loss_gain(LinkClass::LineOfSight,
                                     link_distance(topo.bs, topo.relays[m]), params);
    for (int n = 0; n < n_count; ++n) chan.bs_rn(m, n) = pl * unit_exponential(rng);
  }
  if (m_count > 0) {
    for (int k = 0; k < k_count; ++k) {
      const Point rn = topo.relays[topo.relay_of_user[k]];
      const double pl =
          path_loss_gain(LinkClass::NonLineOfSight, link_distance(rn, topo.users[k]), params);
      for (int n = 0; n < n_count; ++n) chan.rn_ue(k, n) = pl * unit_exponential(rng);
    }
  }
  return chan;
}

}  // namespace eerelay
