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

#ifndef SCHEDBOUND_GPCP_H_
#define SCHEDBOUND_GPCP_H_

// Precedence constrained 0-1 programs and the reformulation of scheduling
// instances into them.
//
//   max  c'z + d'u
//   s.t. z_i <= z_j          for every arc (i, j)
//        A z (<=|=) b        general rows (empty for scheduling instances)
//        z_i = v             bound fixings
//        H z + G u <= h      side rows
//        z in {0,1}^n, u free
//
// The variable z_{a,m,t} equals one when activity a started before period t,
// or started at t in a mode <= m.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "schedbound/gpsp.h"

namespace schedbound {

struct SparseEntry {
  int index = 0;
  double value = 0.0;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

enum class RowSense { kLessEqual, kEqual };

struct ConstraintRow {
  std::vector<SparseEntry> z;  // sorted by index, no zeros
  std::vector<SparseEntry> u;
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0.0;
};

struct Fixing {
  int index = 0;
  int value = 0;  // 0 or 1
};

struct GpcpInstance {
  int n = 0;
  std::vector<double> c;
  std::vector<std::pair<int, int>> arcs;  // (i, j): z_i <= z_j
  std::vector<ConstraintRow> a_rows;
  std::vector<Fixing> bound_fixings;
  std::vector<ConstraintRow> h_rows;  // always <=
  int num_u = 0;
  std::vector<double> d;

  int r2() const { return static_cast<int>(h_rows.size()); }
  // Arc rows, bound rows 0 <= z <= 1, general rows and fixings.
  int r1() const {
    return static_cast<int>(arcs.size() + a_rows.size() + bound_fixings.size()) + 2 * n;
  }
  // True when the A-block holds only arcs, bounds and fixings.
  bool precedence_only() const { return a_rows.empty(); }
};

// Empty iff indices are in range, values finite and fixings binary.
std::vector<Diagnostic> validate_gpcp(const GpcpInstance& g);

// Bijection (a, m, t) <-> column, ordered by activity, then period, then mode.
class VarIndex {
 public:
  VarIndex() = default;
  explicit VarIndex(const GpspInstance& instance);

  int size() const { return size_; }
  int horizon() const { return horizon_; }
  int num_modes(int a) const { return modes_[a]; }
  int operator()(int a, int m, int t) const {
    return offsets_[a] + (t - 1) * modes_[a] + (m - 1);
  }
  struct Key {
    int activity, mode, period;
  };
  Key decode(int index) const;

 private:
  int horizon_ = 0;
  int size_ = 0;
  std::vector<int> offsets_;
  std::vector<int> modes_;
};

std::vector<double> tilde_profit(const GpspInstance& instance, const VarIndex& index);

// Coefficients of the resource row for (r, t) over z; rhs is Q_{r,t}.
ConstraintRow tilde_resource_row(const GpspInstance& instance, int r, int t,
                                 const VarIndex& index);

enum class FixingPlacement { kSideRows, kBounds };

struct GpcpBuildOptions {
  FixingPlacement fixings = FixingPlacement::kSideRows;
};

struct GpcpModel {
  GpcpInstance problem;
  VarIndex index;
  int num_resource_rows = 0;  // leading rows of h_rows
};

// Throws InvalidInstanceError when the instance does not validate.
GpcpModel build_gpcp(const GpspInstance& instance, const GpcpBuildOptions& options = {});

// Time-indexed assignment: x[c][t-1], y[a][(m-1)*T + t-1].
struct XySolution {
  std::vector<std::vector<double>> x;
  std::vector<std::vector<double>> y;
};

// Throws std::invalid_argument when z is not monotone along the chains of an
// activity, or cluster members disagree, beyond `tolerance`.
XySolution lift_solution(const GpspInstance& instance, const VarIndex& index,
                         const std::vector<double>& z, double tolerance = 1e-9);

// Throws std::invalid_argument when x and y disagree beyond `tolerance`.
std::vector<double> project_solution(const GpspInstance& instance, const VarIndex& index,
                                     const XySolution& xy, double tolerance = 1e-9);

XySolution schedule_to_xy(const GpspInstance& instance, const Schedule& schedule);
std::vector<double> schedule_to_z(const GpspInstance& instance, const VarIndex& index,
                                  const Schedule& schedule);

// Objective of the time-indexed model at (x, y).
double xy_objective(const GpspInstance& instance, const XySolution& xy);

// Copy whose general A rows are moved into the side system (equalities become
// two inequalities), leaving a pure precedence A-block.
GpcpInstance with_general_rows_as_side(const GpcpInstance& g);

// Debug text form; ids are 1-based, u entries are written "uK:coef".
//   n N | u K | c v.. | d v.. | arc i j | fix i v
//   A <=|=|>= rhs i:coef .. | H <=|>= rhs i:coef .. uK:coef ..
std::string write_gpcp(const GpcpInstance& g);
GpcpInstance parse_gpcp(std::istream& in);
GpcpInstance parse_gpcp(std::string_view text);
GpcpInstance load_gpcp_file(const std::string& path);

// Objective value c'z + d'u.
double gpcp_objective(const GpcpInstance& g, const std::vector<double>& z,
                      const std::vector<double>& u = {});

}  // namespace schedbound

#endif  // SCHEDBOUND_GPCP_H_
