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

#ifndef SCHEDBOUND_LP_H_
#define SCHEDBOUND_LP_H_

// Bounded-variable primal revised simplex for
//
//   max c'x  s.t.  rows (<=, =, >=),  lower <= x <= upper.
//
// Each row i carries a logical variable s_i = a_i x whose bounds encode the
// row sense, so the working matrix is [A | -I] with zero right-hand side.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace schedbound {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class LpSense { kLessEqual, kEqual, kGreaterEqual };

struct LpEntry {
  int var = 0;
  double coef = 0.0;
};

struct LpRow {
  std::vector<LpEntry> entries;
  LpSense sense = LpSense::kLessEqual;
  double rhs = 0.0;
};

class LpProblem {
 public:
  int add_variable(double objective, double lower = 0.0, double upper = kInfinity);
  int add_row(std::vector<LpEntry> entries, LpSense sense, double rhs);

  int num_vars() const { return static_cast<int>(objective_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  double objective(int j) const { return objective_[j]; }
  double lower(int j) const { return lower_[j]; }
  double upper(int j) const { return upper_[j]; }
  const LpRow& row(int i) const { return rows_[i]; }
  const std::vector<LpRow>& rows() const { return rows_; }

  void set_objective(int j, double value) { objective_[j] = value; }
  void set_bounds(int j, double lower, double upper) {
    lower_[j] = lower;
    upper_[j] = upper;
  }
  void set_rhs(int i, double rhs) { rows_[i].rhs = rhs; }

  // Empty iff bounds are ordered, coefficients finite and indices in range.
  std::string check() const;

 private:
  std::vector<double> objective_, lower_, upper_;
  std::vector<LpRow> rows_;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit, kNumericalFailure };

const char* to_string(LpStatus status);

enum class BasisStatus : std::uint8_t { kBasic, kAtLower, kAtUpper, kFree };

// Status of every structural variable and every row's logical variable.
struct LpBasis {
  std::vector<BasisStatus> vars;
  std::vector<BasisStatus> rows;

  bool empty() const { return vars.empty() && rows.empty(); }
};

struct LpOptions {
  double primal_tolerance = 1e-9;
  double dual_tolerance = 1e-9;
  double pivot_tolerance = 1e-9;
  int refactor_interval = 64;
  int stall_threshold = 50;  // degenerate pivots before Bland's rule
  std::int64_t iteration_limit = 2'000'000;
  // At optimality, pivot nonbasic free variables into the basis with
  // objective-neutral steps wherever some basic variable blocks, so that
  // bounded problems end at a vertex.
  bool basic_free_variables = true;
  // Cold solves run the dual simplex first when the slack basis can be made
  // dual feasible; the primal simplex then finishes from its basis.
  bool dual_start = true;
};

struct LpSolution {
  LpStatus status = LpStatus::kNumericalFailure;
  double objective = 0.0;
  std::vector<double> x;
  std::vector<double> row_activity;
  // y with c_j - y'A_j = reduced cost; >= 0 on binding <= rows.
  std::vector<double> duals;
  std::vector<double> reduced_costs;
  LpBasis basis;
  std::int64_t iterations = 0;
  std::int64_t phase1_iterations = 0;
  bool used_hint = false;
  bool dual_phase = false;  // the dual simplex ran first

  bool optimal() const { return status == LpStatus::kOptimal; }
};

LpSolution solve_lp(const LpProblem& problem, const LpOptions& options = {});

// LP dual written as a maximization: max -b'y - u'p + l'q subject to
// A'y + p - q = c, with y_i >= 0 on <= rows, <= 0 on >= rows, free on
// equalities, and p (q) present only for finite upper (lower) bounds. Its
// optimum is the negated primal optimum. Useful when rows far outnumber
// variables, since the basis dimension becomes the variable count.
LpProblem dual_problem(const LpProblem& problem);

// Starts from `hint` when its dimensions match and its basic columns are
// nonsingular; otherwise repairs it (dependent or missing columns replaced by
// logicals). The optimum does not depend on the hint.
LpSolution warm_solve(const LpProblem& problem, const LpBasis& hint,
                      const LpOptions& options = {});

// Phase-I embedding: one penalized artificial per row that the origin may
// violate (two for equalities). Artificials follow the original variables.
struct EmbeddedLp {
  LpProblem problem;
  int num_original_vars = 0;
  std::vector<int> artificials;
  double penalty = 0.0;
};

EmbeddedLp phase1_embed(const LpProblem& problem);

struct EmbeddedResult {
  LpSolution solution;  // restricted to the original variables
  double residual = 0.0;  // sum of artificial values
  bool feasible = false;  // every artificial below 1e-7
};

EmbeddedResult solve_embedded(const EmbeddedLp& embedded, const LpBasis& hint = {},
                              const LpOptions& options = {});

}  // namespace schedbound

#endif  // SCHEDBOUND_LP_H_
