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

#ifndef SCHEDBOUND_ORACLE_H_
#define SCHEDBOUND_ORACLE_H_

// Independent reference computations used to certify the engines: exhaustive
// enumeration for small problems, an exact rational simplex, explicit hull
// formulations and identity checks. Input doubles are converted to rationals
// exactly, so comparisons between oracle values are exact.

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "schedbound/closure.h"
#include "schedbound/gpcp.h"
#include "schedbound/gpsp.h"

namespace schedbound {

using Rational = mpq_class;

// Thrown when an enumeration oracle is asked for more than kOracleMaxVars
// variables.
class OracleSizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr int kOracleMaxVars = 20;

enum class ExactStatus { kOptimal, kInfeasible, kUnbounded };
const char* to_string(ExactStatus status);

// Dense two-phase simplex over the rationals with Bland's rule. Intended for
// problems with a few dozen rows.
class ExactLp {
 public:
  enum class Sense { kLessEqual, kEqual, kGreaterEqual };
  struct Entry {
    int var;
    Rational coef;
  };
  struct Result {
    ExactStatus status = ExactStatus::kInfeasible;
    Rational objective;
    std::vector<Rational> x;

    bool optimal() const { return status == ExactStatus::kOptimal; }
  };

  // Maximizes; absent bounds are infinite.
  int add_variable(Rational objective, std::optional<Rational> lower = Rational(0),
                   std::optional<Rational> upper = std::nullopt);
  void add_row(std::vector<Entry> entries, Sense sense, Rational rhs);
  Result solve() const;

  int num_vars() const { return static_cast<int>(objective_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }

 private:
  struct Row {
    std::vector<Entry> entries;
    Sense sense;
    Rational rhs;
  };
  std::vector<Rational> objective_;
  std::vector<std::optional<Rational>> lower_, upper_;
  std::vector<Row> rows_;
};

struct ExactBound {
  ExactStatus status = ExactStatus::kInfeasible;
  Rational value;

  bool optimal() const { return status == ExactStatus::kOptimal; }
  double approx() const { return value.get_d(); }
};

struct OracleResult {
  bool feasible = false;
  Rational value;
  std::vector<char> selection;  // witness over the variables
  std::vector<Rational> u;      // witness continuous part, when present
  std::int64_t enumerated = 0;  // candidates examined
};

// Best closure of the graph for per-variable `weights`, enumerating every
// subset of the free nodes. At most kOracleMaxVars nodes.
OracleResult enumerate_closures(const ClosureGraph& graph, std::span<const double> weights);

// The same optimum from the exact LP over the (totally unimodular) closure
// polytope 0 <= x <= 1, x_i <= x_j per arc.
ExactBound closure_lp_value(const ClosureGraph& graph, std::span<const double> weights);

// Points of the easy block P, each as a 0-1 vector. At most kOracleMaxVars
// variables.
std::vector<std::vector<char>> enumerate_easy_points(const GpcpInstance& g);

// Integer optimum: every z in P, with u optimized by an exact LP per point.
OracleResult enumerate_zip(const GpcpInstance& g);

// Exact LP relaxation of the whole problem.
ExactBound exact_lp_bound(const GpcpInstance& g);

// Floating LP relaxation of the whole problem (no decomposition); usable at
// any size the simplex handles.
double direct_lp_bound(const GpcpInstance& g);
// LP relaxation of the time-indexed assignment form of the scheduling model
// (start variables per cluster and per activity mode), built independently of
// the cumulative reformulation.
double direct_lp_bound(const GpspInstance& instance);

// Linear-hull bound from an explicit basis of lin.hull(P): a maximal linearly
// independent subset of the enumerated points. `include_bounds` adds
// 0 <= z <= 1 to the master together with the easy-block rows.
ExactBound zlin_bound(const GpcpInstance& g, bool include_bounds = true);

// Convex-hull bound: one multiplier per point of P.
ExactBound zdw_bound(const GpcpInstance& g);

struct BoundChain {
  OracleResult ip;
  ExactBound dw, lin, lp;

  // IP <= DW <= LIN <= LP, exactly; false unless all four are optimal.
  bool ordered() const;
};
BoundChain bound_chain(const GpcpInstance& g);

// Resource-row provider used by the identity check; defaults to
// tilde_resource_row.
using ResourceRowFn = std::function<ConstraintRow(int r, int t, const VarIndex& index)>;

struct IdentityCheckResult {
  bool passed = true;
  int trials = 0;
  // Location of the first mismatch (1-based period, 0-based resource).
  int trial = -1, resource = -1, period = -1;
  std::string message;
};

// For `trials` random schedules (clusters start together, random modes and
// starts, unexecuted clusters allowed) compares the per-period resource load
// of the assignment form against the cumulative row evaluated at z, exactly.
IdentityCheckResult resource_row_identity_check(const GpspInstance& instance, int trials,
                                                std::uint64_t seed,
                                                const ResourceRowFn& row = {});

struct FractionalCheck {
  bool passed = true;
  int count = 0;  // distinct values strictly inside (0, 1)
  int limit = 0;  // r2 - m
};

// Passes iff z has at most r2 - m distinct fractional values.
FractionalCheck fractional_values_check(std::span<const double> z, int r2, int m,
                                        double tolerance = 1e-9);

}  // namespace schedbound

#endif  // SCHEDBOUND_ORACLE_H_
