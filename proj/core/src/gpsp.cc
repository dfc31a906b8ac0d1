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

#include "schedbound/gpsp.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace schedbound {

GpspInstance::GpspInstance(int horizon, int num_resources, int num_clusters)
    : horizon_(horizon),
      num_resources_(num_resources),
      predecessors_(num_clusters),
      capacity_(num_resources, std::vector<double>(std::max(horizon, 0), 0.0)) {}

int GpspInstance::add_activity(Activity activity) {
  const size_t cells = activity.modes.size() * static_cast<size_t>(horizon_);
  activities_.push_back(std::move(activity));
  profits_.emplace_back(cells, 0.0);
  return num_activities() - 1;
}

void GpspInstance::add_precedence(int successor, Precedence precedence) {
  predecessors_[successor].push_back(precedence);
}

std::vector<std::vector<int>> GpspInstance::cluster_members() const {
  std::vector<std::vector<int>> members(num_clusters());
  for (int a = 0; a < num_activities(); ++a) {
    const int c = activities_[a].cluster;
    if (c >= 0 && c < num_clusters()) members[c].push_back(a);
  }
  return members;
}

GpspInstance GpspInstance::with_horizon(int horizon,
                                        bool clamp_due_dates) const {
  GpspInstance out(horizon, num_resources_, num_clusters());
  out.predecessors_ = predecessors_;
  for (int r = 0; r < num_resources_; ++r) {
    for (int t = 1; t <= horizon; ++t) {
      const int source = std::min(t, horizon_);
      out.set_capacity(r, t, source >= 1 ? capacity(r, source) : 0.0);
    }
  }
  for (int a = 0; a < num_activities(); ++a) {
    Activity act = activities_[a];
    if (clamp_due_dates && act.has_due_date()) act.due = std::min(act.due, horizon);
    act.release = std::min(act.release, horizon);
    const int id = out.add_activity(std::move(act));
    for (int m = 1; m <= activities_[a].num_modes(); ++m) {
      for (int t = 1; t <= std::min(horizon, horizon_); ++t) {
        out.set_profit(id, m, t, profit(a, m, t));
      }
    }
  }
  return out;
}

std::string format_diagnostics(const std::vector<Diagnostic>& diagnostics) {
  std::ostringstream out;
  for (const Diagnostic& d : diagnostics) {
    out << d.location << ": " << d.message << '\n';
  }
  return out.str();
}

namespace {

std::string activity_location(int a) {
  return "activity " + std::to_string(a + 1);
}

std::string cluster_location(int c) { return "cluster " + std::to_string(c + 1); }

}  // namespace

std::vector<Diagnostic> validate_instance(const GpspInstance& inst) {
  std::vector<Diagnostic> out;
  const int horizon = inst.horizon();
  if (horizon < 1) out.push_back({"header", "horizon must be at least 1"});
  if (inst.num_resources() < 0) {
    out.push_back({"header", "resource count must be nonnegative"});
  }
  if (inst.num_activities() == 0) out.push_back({"header", "no activities"});

  std::vector<int> cluster_size(inst.num_clusters(), 0);
  for (int a = 0; a < inst.num_activities(); ++a) {
    const Activity& act = inst.activity(a);
    const std::string where = activity_location(a);
    if (act.cluster < 0 || act.cluster >= inst.num_clusters()) {
      out.push_back({where, "references unknown cluster " +
                                std::to_string(act.cluster + 1)});
    } else {
      ++cluster_size[act.cluster];
    }
    if (act.modes.empty()) out.push_back({where, "has no modes"});
    if (act.release < 1 || act.release > std::max(horizon, 1)) {
      out.push_back({where, "release date outside 1..T"});
    }
    if (act.has_due_date()) {
      if (act.due < 1 || act.due > horizon) {
        out.push_back({where, "due date outside 1..T"});
      }
      if (act.release > act.due) {
        out.push_back({where, "window inverted: release " +
                                  std::to_string(act.release) + " > due " +
                                  std::to_string(act.due)});
      }
    }
    for (int m = 0; m < act.num_modes(); ++m) {
      const Mode& mode = act.modes[m];
      const std::string mode_where = where + " mode " + std::to_string(m + 1);
      if (mode.duration < 0) out.push_back({mode_where, "negative duration"});
      if (static_cast<int>(mode.usage.size()) != inst.num_resources()) {
        out.push_back({mode_where, "usage vector has wrong length"});
      }
      for (double q : mode.usage) {
        if (!std::isfinite(q)) out.push_back({mode_where, "non-finite usage"});
      }
      for (int t = 1; t <= horizon; ++t) {
        if (!std::isfinite(inst.profit(a, m + 1, t))) {
          out.push_back({mode_where + " period " + std::to_string(t),
                         "non-finite profit"});
        }
      }
    }
  }
  for (int c = 0; c < inst.num_clusters(); ++c) {
    if (cluster_size[c] == 0) {
      out.push_back({cluster_location(c), "empty cluster"});
    }
    for (const Precedence& p : inst.predecessors(c)) {
      if (p.predecessor < 0 || p.predecessor >= inst.num_clusters()) {
        out.push_back({cluster_location(c), "precedence references unknown cluster " +
                                                std::to_string(p.predecessor + 1)});
      }
      if (p.lag < 0) out.push_back({cluster_location(c), "negative lag"});
    }
  }
  for (int r = 0; r < inst.num_resources(); ++r) {
    for (int t = 1; t <= horizon; ++t) {
      if (!std::isfinite(inst.capacity(r, t))) {
        out.push_back({"resource " + std::to_string(r + 1) + " period " +
                           std::to_string(t),
                       "capacity not set"});
      }
    }
  }
  return out;
}

ScheduleEvaluation evaluate_schedule(const GpspInstance& inst,
                                     const Schedule& schedule) {
  ScheduleEvaluation eval;
  const int horizon = inst.horizon();
  if (static_cast<int>(schedule.activities.size()) != inst.num_activities()) {
    eval.violations.push_back({"schedule", "activity count mismatch"});
    return eval;
  }
  bool usable = true;
  for (int a = 0; a < inst.num_activities(); ++a) {
    const ScheduledActivity& s = schedule.activities[a];
    if (!s.executed) continue;
    const std::string where = activity_location(a);
    if (s.mode < 1 || s.mode > inst.activity(a).num_modes()) {
      eval.violations.push_back({where, "invalid mode"});
      usable = false;
    }
    if (s.start < 1 || s.start > horizon) {
      eval.violations.push_back({where, "start outside horizon"});
      usable = false;
    }
  }
  if (!usable) return eval;

  for (int a = 0; a < inst.num_activities(); ++a) {
    const ScheduledActivity& s = schedule.activities[a];
    if (s.executed) eval.objective += inst.profit(a, s.mode, s.start);
  }

  // Clusters start once and together.
  const auto members = inst.cluster_members();
  std::vector<int> cluster_start(inst.num_clusters(), 0);
  for (int c = 0; c < inst.num_clusters(); ++c) {
    bool any = false, all = true;
    int start = 0;
    bool mismatch = false;
    for (int a : members[c]) {
      const ScheduledActivity& s = schedule.activities[a];
      if (s.executed) {
        if (any && s.start != start) mismatch = true;
        start = s.start;
        any = true;
      } else {
        all = false;
      }
    }
    if (any && !all) {
      eval.violations.push_back({cluster_location(c), "only part of the cluster executed"});
    }
    if (mismatch) {
      eval.violations.push_back({cluster_location(c), "members start in different periods"});
    }
    cluster_start[c] = any ? start : 0;
  }

  // Lags: cluster c2 started by t requires c1 started by t - lag.
  for (int c2 = 0; c2 < inst.num_clusters(); ++c2) {
    if (cluster_start[c2] == 0) continue;
    for (const Precedence& p : inst.predecessors(c2)) {
      const int s1 = cluster_start[p.predecessor];
      if (s1 == 0 || s1 + p.lag > cluster_start[c2]) {
        eval.violations.push_back(
            {cluster_location(c2),
             "lag from " + cluster_location(p.predecessor) + " violated"});
      }
    }
  }

  // Resources, counted only inside the horizon.
  for (int r = 0; r < inst.num_resources(); ++r) {
    std::vector<double> load(horizon + 1, 0.0);
    for (int a = 0; a < inst.num_activities(); ++a) {
      const ScheduledActivity& s = schedule.activities[a];
      if (!s.executed) continue;
      const double q = inst.usage(r, a, s.mode);
      const int last = std::min(horizon, s.start + inst.duration(a, s.mode) - 1);
      for (int t = s.start; t <= last; ++t) load[t] += q;
    }
    for (int t = 1; t <= horizon; ++t) {
      const double cap = inst.capacity(r, t);
      if (load[t] > cap + 1e-9 * std::max(1.0, std::abs(cap))) {
        eval.violations.push_back({"resource " + std::to_string(r + 1) + " period " +
                                       std::to_string(t),
                                   "capacity exceeded"});
      }
    }
  }

  for (int a = 0; a < inst.num_activities(); ++a) {
    const Activity& act = inst.activity(a);
    const ScheduledActivity& s = schedule.activities[a];
    const std::string where = activity_location(a);
    if (s.executed && s.start < act.release) {
      eval.violations.push_back({where, "starts before release date"});
    }
    if (act.has_due_date()) {
      if (!s.executed) {
        eval.violations.push_back({where, "has a due date but is not executed"});
      } else if (s.start + inst.duration(a, s.mode) - 1 > act.due) {
        eval.violations.push_back({where, "finishes after due date"});
      }
    }
  }
  return eval;
}

namespace {

// Kahn's algorithm with the smallest ready cluster first. Empty on cycles.
std::vector<int> topological_clusters(const GpspInstance& inst) {
  const int n = inst.num_clusters();
  std::vector<std::vector<int>> successors(n);
  std::vector<int> indegree(n, 0);
  for (int c = 0; c < n; ++c) {
    for (const Precedence& p : inst.predecessors(c)) {
      successors[p.predecessor].push_back(c);
      ++indegree[c];
    }
  }
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int c = 0; c < n; ++c) {
    if (indegree[c] == 0) ready.push(c);
  }
  std::vector<int> order;
  while (!ready.empty()) {
    const int c = ready.top();
    ready.pop();
    order.push_back(c);
    for (int s : successors[c]) {
      if (--indegree[s] == 0) ready.push(s);
    }
  }
  if (static_cast<int>(order.size()) != n) order.clear();
  return order;
}

}  // namespace

GreedyResult greedy_toposort_schedule(const GpspInstance& inst,
                                      bool open_horizon) {
  GreedyResult result;
  result.schedule.activities.assign(inst.num_activities(), {});
  const std::vector<int> order = topological_clusters(inst);
  if (order.empty() && inst.num_clusters() > 0) {
    result.failure = "cluster precedence graph has a cycle";
    return result;
  }
  const auto members = inst.cluster_members();
  const int horizon = inst.horizon();

  int max_duration = 0, max_lag = 0;
  for (int a = 0; a < inst.num_activities(); ++a) {
    max_duration = std::max(max_duration, inst.duration(a, 1));
  }
  for (int c = 0; c < inst.num_clusters(); ++c) {
    for (const Precedence& p : inst.predecessors(c)) max_lag = std::max(max_lag, p.lag);
  }
  const int last_start =
      open_horizon ? horizon + inst.num_clusters() * (max_duration + max_lag) + 1
                   : horizon;

  auto capacity_at = [&](int r, int t) {
    return inst.capacity(r, std::min(t, horizon));
  };
  // load[r][t] for t in 1..last_start + max_duration
  const int span = last_start + max_duration + 1;
  std::vector<std::vector<double>> load(inst.num_resources(),
                                        std::vector<double>(span + 1, 0.0));

  std::vector<int> cluster_start(inst.num_clusters(), 0);
  for (int c : order) {
    int earliest = 1;
    bool blocked = false;
    for (const Precedence& p : inst.predecessors(c)) {
      if (cluster_start[p.predecessor] == 0) {
        blocked = true;
        break;
      }
      earliest = std::max(earliest, cluster_start[p.predecessor] + p.lag);
    }
    int latest = last_start;
    bool required = false;
    for (int a : members[c]) {
      const Activity& act = inst.activity(a);
      earliest = std::max(earliest, act.release);
      if (act.has_due_date()) {
        required = true;
        if (!open_horizon) latest = std::min(latest, act.due - inst.duration(a, 1) + 1);
      }
    }
    int chosen = 0;
    if (!blocked) {
      for (int t = earliest; t <= latest && chosen == 0; ++t) {
        int window = 0;
        for (int a : members[c]) window = std::max(window, inst.duration(a, 1));
        const int limit = open_horizon ? span : horizon;
        bool fits = true;
        for (int r = 0; r < inst.num_resources() && fits; ++r) {
          for (int s = t; s <= std::min(limit, t + window - 1) && fits; ++s) {
            double extra = 0.0;
            for (int a : members[c]) {
              if (s <= t + inst.duration(a, 1) - 1) extra += inst.usage(r, a, 1);
            }
            if (load[r][s] + extra > capacity_at(r, s) + 1e-9) fits = false;
          }
        }
        if (fits) chosen = t;
      }
    }
    if (chosen == 0) {
      if (required) {
        result.failure = "cluster " + std::to_string(c + 1) +
                         " cannot be scheduled within its window";
        return result;
      }
      continue;
    }
    cluster_start[c] = chosen;
    for (int a : members[c]) {
      const int d = inst.duration(a, 1);
      auto& slot = result.schedule.activities[a];
      slot.executed = true;
      slot.start = chosen;
      slot.mode = 1;
      for (int r = 0; r < inst.num_resources(); ++r) {
        for (int s = chosen; s <= std::min(span, chosen + d - 1); ++s) {
          load[r][s] += inst.usage(r, a, 1);
        }
      }
      result.completion = std::max(result.completion, chosen + std::max(d, 1) - 1);
    }
  }
  result.feasible = true;
  return result;
}

}  // namespace schedbound
