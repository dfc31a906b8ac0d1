// Copyright 2026 The schedbound Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "schedbound/generators.h"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>

namespace schedbound {

namespace {

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  int between(int lo, int hi) {
    if (hi <= lo) return lo;
    return lo + static_cast<int>(rng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool chance(double p) { return static_cast<double>(rng_() % 1000000) < p * 1e6; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

GpspInstance random_gpsp(std::uint64_t seed, const RandomGpspOptions& o) {
  Draw draw(seed);
  const int horizon = draw.between(o.min_horizon, o.max_horizon);
  int activities = draw.between(o.min_activities, o.max_activities);
  activities = std::max(1, std::min(activities, o.max_variables / horizon));
  const int resources = draw.between(o.min_resources, o.max_resources);
  // Spread the variable budget evenly so later activities are not starved.
  const int mode_cap =
      std::max(1, std::min(o.max_modes, o.max_variables / (activities * horizon)));

  std::vector<int> cluster_of(activities);
  int clusters = 0;
  for (int a = 0; a < activities; ++a) {
    cluster_of[a] = (a > 0 && draw.chance(0.25)) ? clusters - 1 : clusters++;
  }
  GpspInstance inst(horizon, resources, clusters);
  for (int r = 0; r < resources; ++r) {
    for (int t = 1; t <= horizon; ++t) inst.set_capacity(r, t, draw.between(2, 5));
  }
  for (int a = 0; a < activities; ++a) {
    Activity act;
    act.cluster = cluster_of[a];
    const int modes = draw.between(1, mode_cap);
    for (int m = 0; m < modes; ++m) {
      Mode mode;
      mode.duration = draw.between(0, o.max_duration);
      for (int r = 0; r < resources; ++r) mode.usage.push_back(draw.between(0, 3));
      act.modes.push_back(std::move(mode));
    }
    if (o.releases && draw.chance(0.3)) act.release = draw.between(1, std::min(2, horizon));
    if (o.due_dates && draw.chance(0.3)) {
      act.due = draw.between(std::max(act.release, horizon - 1), horizon);
    }
    const int id = inst.add_activity(std::move(act));
    for (int m = 1; m <= inst.activity(id).num_modes(); ++m) {
      for (int t = 1; t <= horizon; ++t) inst.set_profit(id, m, t, draw.between(-6, 8));
    }
  }
  for (int c2 = 1; c2 < clusters; ++c2) {
    if (draw.chance(0.4)) {
      inst.add_precedence(c2, {draw.between(0, c2 - 1), draw.between(0, o.max_lag)});
    }
  }
  return inst;
}

GpcpInstance random_gpcp(std::uint64_t seed, const RandomGpcpOptions& o) {
  Draw draw(seed);
  GpcpInstance g;
  g.n = draw.between(o.min_vars, o.max_vars);
  g.c.resize(g.n);
  for (double& v : g.c) v = draw.between(-5, 5);
  std::vector<int> order(g.n);
  std::iota(order.begin(), order.end(), 0);
  for (int i = g.n - 1; i > 0; --i) std::swap(order[i], order[draw.between(0, i)]);
  for (int i = 0; i < g.n; ++i) {
    for (int j = i + 1; j < g.n; ++j) {
      if (draw.chance(o.arc_density / std::max(1.0, g.n / 6.0))) {
        g.arcs.emplace_back(order[i], order[j]);
      }
    }
  }
  const int general = draw.between(0, o.max_general_rows);
  for (int k = 0; k < general; ++k) {
    ConstraintRow row;
    int total = 0;
    for (int i = 0; i < g.n; ++i) {
      if (draw.chance(0.4)) {
        const int coef = draw.between(1, 2);
        row.z.push_back({i, static_cast<double>(coef)});
        total += coef;
      }
    }
    if (total < 2) continue;
    row.rhs = draw.between(1, total - 1) + (draw.chance(0.5) ? 0.5 : 0.0);
    g.a_rows.push_back(std::move(row));
  }
  g.num_u = draw.between(0, o.max_u);
  g.d.resize(g.num_u);
  for (double& v : g.d) v = draw.between(-3, 3);
  const int side = draw.between(1, o.max_side_rows);
  for (int k = 0; k < side; ++k) {
    ConstraintRow row;
    for (int i = 0; i < g.n; ++i) {
      if (draw.chance(0.5)) {
        const int coef = draw.between(-3, 3);
        if (coef != 0) row.z.push_back({i, static_cast<double>(coef)});
      }
    }
    for (int j = 0; j < g.num_u; ++j) {
      if (draw.chance(0.5)) {
        const int coef = draw.between(-2, 2);
        if (coef != 0) row.u.push_back({j, static_cast<double>(coef)});
      }
    }
    row.rhs = draw.between(0, 4) + (draw.chance(0.3) ? 0.5 : 0.0);
    g.h_rows.push_back(std::move(row));
  }
  for (int j = 0; j < g.num_u; ++j) {
    g.h_rows.push_back({{}, {{j, 1.0}}, RowSense::kLessEqual, static_cast<double>(draw.between(1, 3))});
    g.h_rows.push_back({{}, {{j, -1.0}}, RowSense::kLessEqual, static_cast<double>(draw.between(0, 2))});
  }
  return g;
}

std::string generate_psplib_sm(std::uint64_t seed, const PsplibGeneratorOptions& o) {
  Draw draw(seed);
  const int real = o.jobs;
  const int total = real + 2;
  const int sink = total - 1;
  std::vector<std::vector<int>> successors(total);
  std::vector<int> indegree(total, 0);
  for (int i = 1; i <= real; ++i) {
    const int later = real - i;  // real jobs after i
    if (later <= 0) continue;
    const int count = draw.between(1, std::min(o.max_successors, later));
    std::vector<int> pool;
    for (int j = i + 1; j <= real; ++j) pool.push_back(j);
    for (int k = 0; k < count; ++k) {
      const int pick = draw.between(k, static_cast<int>(pool.size()) - 1);
      std::swap(pool[k], pool[pick]);
      successors[i].push_back(pool[k]);
      ++indegree[pool[k]];
    }
    // Thin out: later jobs keep only a share of their successors.
    if (i > real / 3 && successors[i].size() > 1 && draw.chance(0.5)) {
      --indegree[successors[i].back()];
      successors[i].pop_back();
    }
    std::sort(successors[i].begin(), successors[i].end());
  }
  for (int i = 1; i <= real; ++i) {
    if (indegree[i] == 0) successors[0].push_back(i);
    if (successors[i].empty()) successors[i].push_back(sink);
  }

  std::vector<int> duration(total, 0);
  std::vector<std::vector<int>> request(total, std::vector<int>(o.resources, 0));
  for (int i = 1; i <= real; ++i) {
    duration[i] = draw.between(1, o.max_duration);
    bool any = false;
    for (int r = 0; r < o.resources; ++r) {
      if (draw.chance(o.resource_factor)) {
        request[i][r] = draw.between(1, 10);
        any = true;
      }
    }
    if (!any) request[i][draw.between(0, o.resources - 1)] = draw.between(1, 10);
  }

  // Earliest-start schedule gives the peak demand used to size capacities.
  std::vector<int> start(total, 0);
  for (int i = 0; i < total; ++i) {
    for (int j : successors[i]) start[j] = std::max(start[j], start[i] + duration[i]);
  }
  const int critical = start[sink];
  std::vector<int> capacity(o.resources);
  for (int r = 0; r < o.resources; ++r) {
    int kmin = 0;
    std::vector<int> profile(critical + 1, 0);
    for (int i = 1; i <= real; ++i) {
      kmin = std::max(kmin, request[i][r]);
      for (int t = start[i]; t < start[i] + duration[i]; ++t) profile[t] += request[i][r];
    }
    const int kmax = *std::max_element(profile.begin(), profile.end());
    capacity[r] = kmin + static_cast<int>(o.resource_strength * std::max(0, kmax - kmin) + 0.5);
  }
  const int horizon = std::accumulate(duration.begin(), duration.end(), 0);

  std::ostringstream out;
  const std::string stars(72, '*');
  char buf[256];
  out << stars << '\n'
      << "file with basedata            : j30gen.bas\n"
      << "initial value random generator: " << seed << '\n'
      << stars << '\n'
      << "projects                      :  1\n";
  std::snprintf(buf, sizeof(buf), "jobs (incl. supersource/sink ):  %d\n", total);
  out << buf;
  std::snprintf(buf, sizeof(buf), "horizon                       :  %d\n", horizon);
  out << buf << "RESOURCES\n";
  std::snprintf(buf, sizeof(buf), "  - renewable                 :  %d   R\n", o.resources);
  out << buf << "  - nonrenewable              :  0   N\n"
      << "  - doubly constrained        :  0   D\n"
      << stars << '\n'
      << "PROJECT INFORMATION:\n"
      << "pronr.  #jobs rel.date duedate tardcost  MPM-Time\n";
  std::snprintf(buf, sizeof(buf), "    1     %d      0       %d       %d       %d\n", real,
                critical, draw.between(5, 40), critical);
  out << buf << stars << '\n'
      << "PRECEDENCE RELATIONS:\n"
      << "jobnr.    #modes  #successors   successors\n";
  for (int i = 0; i < total; ++i) {
    std::snprintf(buf, sizeof(buf), "%4d        1         %2d        ", i + 1,
                  static_cast<int>(successors[i].size()));
    out << buf;
    for (int j : successors[i]) {
      std::snprintf(buf, sizeof(buf), " %3d", j + 1);
      out << buf;
    }
    out << '\n';
  }
  out << stars << '\n' << "REQUESTS/DURATIONS:\n" << "jobnr. mode duration";
  for (int r = 0; r < o.resources; ++r) out << "  R " << r + 1;
  out << '\n' << std::string(72, '-') << '\n';
  for (int i = 0; i < total; ++i) {
    std::snprintf(buf, sizeof(buf), "%3d      1     %2d   ", i + 1, duration[i]);
    out << buf;
    for (int r = 0; r < o.resources; ++r) {
      std::snprintf(buf, sizeof(buf), "  %3d", request[i][r]);
      out << buf;
    }
    out << '\n';
  }
  out << stars << '\n' << "RESOURCEAVAILABILITIES:\n";
  for (int r = 0; r < o.resources; ++r) out << "  R " << r + 1;
  out << '\n';
  for (int r = 0; r < o.resources; ++r) {
    std::snprintf(buf, sizeof(buf), "  %3d", capacity[r]);
    out << buf;
  }
  out << '\n' << stars << '\n';
  return out.str();
}

}  // namespace schedbound
