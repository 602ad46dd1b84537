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

// Line-oriented text formats shared by the CLI, the solver and the oracle.
// Every line is `<tag> <fields...>`; `#` starts a comment line. Indices are
// zero-based. Gains and powers are written with 17 significant digits so a
// write/read cycle is lossless.
//
//   instance file                      allocation file
//   -------------                      ---------------
//   format eerelay-instance 1          format eerelay-allocation 1
//   dims <K> <N> <M>                   dims <K> <N>
//   seed <u64>                         sc <n> unused
//   bs <x> <y>                         sc <n> direct <k> <p_w>
//   rn <m> <x> <y>                     sc <n> af <k> <p_bs_w> <p_rn_w>
//   ue <k> <x> <y> <relay|-1>
//   g_bs_ue <k> <n> <gain>             report file
//   g_bs_rn <m> <n> <gain>             -----------
//   g_rn_ue <k> <n> <gain>             format eerelay-report 1
//                                      iter <i> <q> <F> <lambda> <inner_iters>
//   bs/rn/ue lines are optional;       summary <se> <ee> <power_w> <rho> <0|1>
//   every gain line is required.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "eerelay/model.hpp"
#include "eerelay/objective.hpp"
#include "eerelay/solver.hpp"

namespace eerelay {

class FormatError : public Error {
 public:
  FormatError(int line, const std::string& what)
      : Error("FormatError", "line " + std::to_string(line) + ": " + what) {}
};

struct Instance {
  std::optional<Topology> topology;
  ChannelRealization channel;
};

namespace detail {

struct LineReader {
  std::istream& in;
  int line_no = 0;

  bool next(std::string& tag, std::istringstream& fields) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      fields.clear();
      fields.str(line);
      fields >> tag;
      return true;
    }
    return false;
  }

  template <typename... T>
  void read(std::istringstream& fields, T&... out) {
    ((fields >> out), ...);
    if (fields.fail()) throw FormatError(line_no, "malformed fields");
    std::string extra;
    if (fields >> extra) throw FormatError(line_no, "unexpected trailing field '" + extra + "'");
  }

  void expect_format(const std::string& name) {
    std::string tag, kind;
    std::istringstream fields;
    int version = 0;
    if (!next(tag, fields) || tag != "format") throw FormatError(line_no, "missing format line");
    read(fields, kind, version);
    if (kind != name || version != 1)
      throw FormatError(line_no, "expected '" + name + " 1', got '" + kind + " " +
                                     std::to_string(version) + "'");
  }
};

inline void check_index(int line, int value, int bound, const char* what) {
  if (value < 0 || value >= bound)
    throw FormatError(line, std::string(what) + " index " + std::to_string(value) +
                                " out of range");
}

}  // namespace detail

inline void write_instance(std::ostream& out, const ChannelRealization& chan,
                           const Topology* topo = nullptr) {
  const int k_count = chan.users(), n_count = chan.subcarriers(), m_count = chan.relays();
  out << "format eerelay-instance 1\n";
  out << fmt::format("dims {} {} {}\n", k_count, n_count, m_count);
  out << fmt::format("seed {}\n", chan.seed);
  if (topo) {
    out << fmt::format("bs {:.17g} {:.17g}\n", topo->bs.x, topo->bs.y);
    for (int m = 0; m < m_count; ++m)
      out << fmt::format("rn {} {:.17g} {:.17g}\n", m, topo->relays[m].x, topo->relays[m].y);
    for (int k = 0; k < k_count; ++k)
      out << fmt::format("ue {} {:.17g} {:.17g} {}\n", k, topo->users[k].x, topo->users[k].y,
                         m_count > 0 ? topo->relay_of_user[k] : -1);
  }
  for (int k = 0; k < k_count; ++k)
    for (int n = 0; n < n_count; ++n)
      out << fmt::format("g_bs_ue {} {} {:.17g}\n", k, n, chan.bs_ue(k, n));
  for (int m = 0; m < m_count; ++m)
    for (int n = 0; n < n_count; ++n)
      out << fmt::format("g_bs_rn {} {} {:.17g}\n", m, n, chan.bs_rn(m, n));
  if (m_count > 0)
    for (int k = 0; k < k_count; ++k)
      for (int n = 0; n < n_count; ++n)
        out << fmt::format("g_rn_ue {} {} {:.17g}\n", k, n, chan.rn_ue(k, n));
}

/// Parses an instance file. The relay assignment comes from the `ue` lines
/// and is required when M > 0.
inline Instance read_instance(std::istream& in) {
  detail::LineReader reader{in};
  reader.expect_format("eerelay-instance");
  Instance inst;
  auto& chan = inst.channel;
  int k_count = -1, n_count = -1, m_count = -1;
  Topology topo;
  std::vector<char> seen_bs_ue, seen_bs_rn, seen_rn_ue, seen_ue, seen_rn;
  bool has_bs = false;

  std::string tag;
  std::istringstream fields;
  while (reader.next(tag, fields)) {
    const int line = reader.line_no;
    if (tag == "dims") {
      reader.read(fields, k_count, n_count, m_count);
      if (k_count <= 0 || n_count <= 0 || m_count < 0)
        throw FormatError(line, "dims must be positive (M may be zero)");
      chan.bs_ue.setZero(k_count, n_count);
      chan.bs_rn.setZero(m_count, n_count);
      chan.rn_ue.setZero(m_count > 0 ? k_count : 0, n_count);
      seen_bs_ue.assign(static_cast<std::size_t>(k_count) * n_count, 0);
      seen_bs_rn.assign(static_cast<std::size_t>(m_count) * n_count, 0);
      seen_rn_ue.assign(m_count > 0 ? static_cast<std::size_t>(k_count) * n_count : 0, 0);
      seen_ue.assign(k_count, 0);
      seen_rn.assign(m_count, 0);
      topo.users.assign(k_count, {});
      topo.relays.assign(m_count, {});
      topo.relay_of_user.assign(m_count > 0 ? k_count : 0, -1);
      continue;
    }
    if (k_count < 0) throw FormatError(line, "'" + tag + "' before dims");
    if (tag == "seed") {
      reader.read(fields, chan.seed);
    } else if (tag == "bs") {
      reader.read(fields, topo.bs.x, topo.bs.y);
      has_bs = true;
    } else if (tag == "rn") {
      int m;
      Point p;
      reader.read(fields, m, p.x, p.y);
      detail::check_index(line, m, m_count, "relay");
      topo.relays[m] = p;
      seen_rn[m] = 1;
    } else if (tag == "ue") {
      int k, relay;
      Point p;
      reader.read(fields, k, p.x, p.y, relay);
      detail::check_index(line, k, k_count, "user");
      topo.users[k] = p;
      seen_ue[k] = 1;
      if (m_count > 0) {
        detail::check_index(line, relay, m_count, "relay");
        topo.relay_of_user[k] = relay;
      } else if (relay != -1) {
        throw FormatError(line, "relay given in a cell without relays");
      }
    } else if (tag == "g_bs_ue" || tag == "g_bs_rn" || tag == "g_rn_ue") {
      int row, n;
      double gain;
      reader.read(fields, row, n, gain);
      const bool relay_row = tag == "g_bs_rn";
      if (tag == "g_rn_ue" && m_count == 0)
        throw FormatError(line, "g_rn_ue in a cell without relays");
      detail::check_index(line, row, relay_row ? m_count : k_count, relay_row ? "relay" : "user");
      detail::check_index(line, n, n_count, "subcarrier");
      if (!(gain > 0.0) || !std::isfinite(gain))
        throw FormatError(line, "gain must be positive and finite");
      const std::size_t idx = static_cast<std::size_t>(row) * n_count + n;
      auto& seen = tag == "g_bs_ue" ? seen_bs_ue : relay_row ? seen_bs_rn : seen_rn_ue;
      auto& mat = tag == "g_bs_ue" ? chan.bs_ue : relay_row ? chan.bs_rn : chan.rn_ue;
      if (seen[idx]) throw FormatError(line, "duplicate " + tag + " record");
      seen[idx] = 1;
      mat(row, n) = gain;
    } else {
      throw FormatError(line, "unknown record '" + tag + "'");
    }
  }
  if (k_count < 0) throw FormatError(reader.line_no, "missing dims");
  auto complete = [](const std::vector<char>& v) {
    return std::all_of(v.begin(), v.end(), [](char c) { return c != 0; });
  };
  if (!complete(seen_bs_ue) || !complete(seen_bs_rn) || !complete(seen_rn_ue))
    throw FormatError(reader.line_no, "missing gain records");
  const bool any_ue = std::any_of(seen_ue.begin(), seen_ue.end(), [](char c) { return c; });
  if (any_ue && !complete(seen_ue)) throw FormatError(reader.line_no, "incomplete ue records");
  if (m_count > 0 && !complete(seen_ue))
    throw FormatError(reader.line_no, "ue records carry the relay assignment and are required");
  chan.relay_of_user = topo.relay_of_user;
  if (has_bs && complete(seen_ue) && complete(seen_rn)) inst.topology = std::move(topo);
  return inst;
}

inline void write_allocation(std::ostream& out, const Allocation& alloc) {
  out << "format eerelay-allocation 1\n";
  out << fmt::format("dims {} {}\n", alloc.users(), alloc.subcarriers());
  for (int n = 0; n < alloc.subcarriers(); ++n) {
    const auto [p, k] = alloc.assignment[n];
    switch (p) {
      case Protocol::Unused: out << fmt::format("sc {} unused\n", n); break;
      case Protocol::Direct:
        out << fmt::format("sc {} direct {} {:.17g}\n", n, k, alloc.p_direct(k, n));
        break;
      case Protocol::AmplifyForward:
        out << fmt::format("sc {} af {} {:.17g} {:.17g}\n", n, k, alloc.p_af_bs(k, n),
                           alloc.p_af_rn(k, n));
        break;
    }
  }
}

inline Allocation read_allocation(std::istream& in) {
  detail::LineReader reader{in};
  reader.expect_format("eerelay-allocation");
  Allocation alloc;
  std::vector<char> seen;
  int k_count = -1, n_count = -1;
  std::string tag;
  std::istringstream fields;
  while (reader.next(tag, fields)) {
    const int line = reader.line_no;
    if (tag == "dims") {
      reader.read(fields, k_count, n_count);
      if (k_count <= 0 || n_count <= 0) throw FormatError(line, "dims must be positive");
      alloc = Allocation::zeros(k_count, n_count);
      seen.assign(n_count, 0);
    } else if (tag == "sc") {
      if (k_count < 0) throw FormatError(line, "sc before dims");
      int n;
      std::string protocol;
      fields >> n >> protocol;
      if (fields.fail()) throw FormatError(line, "malformed sc record");
      detail::check_index(line, n, n_count, "subcarrier");
      if (seen[n]) throw FormatError(line, "duplicate subcarrier record");
      seen[n] = 1;
      if (protocol == "unused") {
        reader.read(fields);
      } else if (protocol == "direct") {
        int k;
        double p;
        reader.read(fields, k, p);
        detail::check_index(line, k, k_count, "user");
        alloc.assignment[n] = SubcarrierAssignment::direct(k);
        alloc.p_direct(k, n) = p;
      } else if (protocol == "af") {
        int k;
        double pb, pr;
        reader.read(fields, k, pb, pr);
        detail::check_index(line, k, k_count, "user");
        alloc.assignment[n] = SubcarrierAssignment::af(k);
        alloc.p_af_bs(k, n) = pb;
        alloc.p_af_rn(k, n) = pr;
      } else {
        throw FormatError(line, "unknown protocol '" + protocol + "'");
      }
    } else {
      throw FormatError(line, "unknown record '" + tag + "'");
    }
  }
  if (k_count < 0) throw FormatError(reader.line_no, "missing dims");
  if (!std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; }))
    throw FormatError(reader.line_no, "missing subcarrier records");
  return alloc;
}

inline void write_report(std::ostream& out, const SolveReport& report) {
  out << "format eerelay-report 1\n";
  for (int i = 0; i < report.outer_iters(); ++i)
    out << fmt::format("iter {} {:.9g} {:.9g} {:.9g} {}\n", i, report.q_trace[i],
                       report.f_trace[i], report.lambda_trace[i], report.inner_iters_trace[i]);
  out << fmt::format("summary {:.9g} {:.9g} {:.9g} {:.9g} {}\n", report.final_se,
                     report.final_ee, report.final_power_w, report.final_rho,
                     report.converged ? 1 : 0);
}

}  // namespace eerelay
