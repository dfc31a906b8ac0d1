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

#ifndef SCHEDBOUND_GPSP_H_
#define SCHEDBOUND_GPSP_H_

// Time-indexed production scheduling model: activities grouped into clusters
// that start together, one processing mode per executed activity, lagged
// cluster precedences and per-period renewable resource capacities.
//
// Index conventions used throughout the library:
//   * activities, clusters and resources are 0-based positions;
//   * periods run 1..T and modes run 1..M_a, exactly as in the model.

#include <limits>
#include <string>
#include <vector>

namespace schedbound {

inline constexpr int kNoDueDate = std::numeric_limits<int>::max();

struct Mode {
  int duration = 1;
  std::vector<double> usage;  // one entry per resource, per active period
};

struct Activity {
  int cluster = 0;
  int release = 1;
  int due = kNoDueDate;
  std::vector<Mode> modes;

  int num_modes() const { return static_cast<int>(modes.size()); }
  bool has_due_date() const { return due != kNoDueDate; }
};

struct Precedence {
  int predecessor = 0;  // cluster that must start at least `lag` periods earlier
  int lag = 0;
};

class GpspInstance {
 public:
  GpspInstance() = default;
  GpspInstance(int horizon, int num_resources, int num_clusters);

  int horizon() const { return horizon_; }
  int num_resources() const { return num_resources_; }
  int num_clusters() const { return static_cast<int>(predecessors_.size()); }
  int num_activities() const { return static_cast<int>(activities_.size()); }

  // Appends an activity; its profit table is sized and zero-filled.
  int add_activity(Activity activity);
  void add_precedence(int successor, Precedence precedence);

  const Activity& activity(int a) const { return activities_[a]; }
  Activity& mutable_activity(int a) { return activities_[a]; }
  const std::vector<Activity>& activities() const { return activities_; }
  const std::vector<Precedence>& predecessors(int cluster) const {
    return predecessors_[cluster];
  }

  double capacity(int r, int t) const { return capacity_[r][t - 1]; }
  void set_capacity(int r, int t, double value) { capacity_[r][t - 1] = value; }

  double profit(int a, int m, int t) const {
    return profits_[a][static_cast<size_t>(m - 1) * horizon_ + (t - 1)];
  }
  void set_profit(int a, int m, int t, double value) {
    profits_[a][static_cast<size_t>(m - 1) * horizon_ + (t - 1)] = value;
  }

  double usage(int r, int a, int m) const {
    return activities_[a].modes[m - 1].usage[r];
  }
  int duration(int a, int m) const { return activities_[a].modes[m - 1].duration; }

  // Activities of each cluster in ascending index order.
  std::vector<std::vector<int>> cluster_members() const;

  // Copy restricted (or extended) to `horizon` periods. Capacities past the
  // old horizon repeat the last period; new profits are zero; due dates are
  // clamped to the new horizon when `clamp_due_dates` is set.
  GpspInstance with_horizon(int horizon, bool clamp_due_dates) const;

 private:
  int horizon_ = 0;
  int num_resources_ = 0;
  std::vector<Activity> activities_;
  std::vector<std::vector<Precedence>> predecessors_;
  std::vector<std::vector<double>> capacity_;  // [r][t-1]
  std::vector<std::vector<double>> profits_;   // [a][(m-1)*T + t-1]
};

struct Diagnostic {
  std::string location;
  std::string message;
};

std::string format_diagnostics(const std::vector<Diagnostic>& diagnostics);

// Empty iff every structural invariant of the instance holds.
std::vector<Diagnostic> validate_instance(const GpspInstance& instance);

struct ScheduledActivity {
  bool executed = false;
  int start = 0;  // period, valid when executed
  int mode = 1;
};

struct Schedule {
  std::vector<ScheduledActivity> activities;
};

struct ScheduleEvaluation {
  double objective = 0.0;
  std::vector<Diagnostic> violations;

  bool feasible() const { return violations.empty(); }
};

// Objective value and every violated scheduling constraint (cluster start,
// mode choice, lags, capacities, release and due dates).
ScheduleEvaluation evaluate_schedule(const GpspInstance& instance,
                                     const Schedule& schedule);

struct GreedyResult {
  Schedule schedule;
  // Last occupied period; a zero-duration activity occupies its start period.
  int completion = 0;
  bool feasible = false;
  std::string failure;
};

// Serial schedule generation over clusters in topological order (ties by
// ascending index), mode 1, earliest resource-feasible start. Activities
// without due dates that do not fit are left unexecuted.
// If `open_horizon` is set the search ignores T (used to size RCPSP
// horizons); otherwise starts must lie in 1..T.
GreedyResult greedy_toposort_schedule(const GpspInstance& instance,
                                      bool open_horizon = false);

}  // namespace schedbound

#endif  // SCHEDBOUND_GPSP_H_
