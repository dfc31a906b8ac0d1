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

#ifndef SCHEDBOUND_COLGEN_H_
#define SCHEDBOUND_COLGEN_H_

// Column generation bounds for 0-1 programs split into an easy block
// (A z <= b, optimized by a pricing oracle) and side rows (H z + G u <= h,
// priced by duals):
//
//   gcg_solve     restricted master over the linear span of generated points
//   gcg_eq_solve  same for A z = b, columns shifted into null(A)
//   dw_solve      restricted master over convex combinations
//   bz_solve      span master over orthogonal 0-1 columns with refining and
//                 coarsification, for precedence-only easy blocks
//
// Every master carries one penalized artificial per side row, so any set of
// columns is feasible; a bound is only reported once all artificials vanish.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "schedbound/closure.h"
#include "schedbound/gpcp.h"
#include "schedbound/gpsp.h"
#include "schedbound/partition.h"

namespace schedbound {

struct PricingResult {
  bool feasible = false;    // false when the easy block has no 0-1 point
  std::vector<char> column;  // maximizer over the easy block
  double value = 0.0;        // weights'column
};

// Maximizes w'v over P = {v in {0,1}^n : arcs, general rows, bound fixings}.
class Pricer {
 public:
  virtual ~Pricer() = default;
  virtual PricingResult price(std::span<const double> weights) = 0;
  virtual const char* name() const = 0;
};

// Min-cut pricing; requires a precedence-only easy block.
class ClosurePricingOracle final : public Pricer {
 public:
  ClosurePricingOracle(const GpcpInstance& g, ClosurePricerOptions options = {});
  PricingResult price(std::span<const double> weights) override;
  const char* name() const override { return "closure"; }
  const ClosurePricer& closure() const { return pricer_; }

 private:
  ClosurePricer pricer_;
};

// Lists P once, then scans it; for n <= kMaxVars only.
class EnumerationPricer final : public Pricer {
 public:
  static constexpr int kMaxVars = 20;
  explicit EnumerationPricer(const GpcpInstance& g);
  PricingResult price(std::span<const double> weights) override;
  const char* name() const override { return "enumeration"; }
  const std::vector<std::uint32_t>& points() const { return points_; }

 private:
  int n_;
  std::vector<std::uint32_t> points_;
};

// Closure pricing when the easy block is precedence-only, enumeration
// otherwise. Throws std::invalid_argument when neither applies.
std::unique_ptr<Pricer> make_pricer(const GpcpInstance& g, ClosurePricerOptions options = {});

// Rows of the easy block in a fixed order: arcs (z_i - z_j <= 0), upper
// bounds (z_i <= 1), lower bounds (-z_i <= 0), general rows, fixings.
std::vector<ConstraintRow> easy_block_rows(const GpcpInstance& g, bool include_bounds = true);

// c'v - alpha A v - pi H v with A as listed by easy_block_rows.
double reduced_cost(const GpcpInstance& g, std::span<const char> v,
                    std::span<const double> alpha, std::span<const double> pi);

// Relative gap test (upper - lower) / max(1, |lower|) <= tolerance.
bool check_termination(double lower, double upper, double tolerance = 1e-6);

enum class SolveStatus { kConverged, kIterationLimit, kTimeLimit, kInfeasible, kFailed };
const char* to_string(SolveStatus status);

enum class BoundType {
  kLpEqual,     // BZ: the LP relaxation value
  kDw,          // convex-hull bound
  kLin,         // linear-hull bound
  kEarlyUpper,  // span engines stopped when the bounds crossed
};
const char* to_string(BoundType type);

struct IterationRecord {
  int iteration = 0;
  double lower = 0.0;          // master value
  double upper = 0.0;          // best Lagrangian value so far
  double pricing_value = 0.0;  // this iteration's Lagrangian value
  int columns = 0;
  double master_ms = 0.0;
  double pricing_ms = 0.0;
};

// Counts of invariant checks performed during a run and of violations found.
struct InvariantCounters {
  std::int64_t refine_checks = 0, refine_violations = 0;
  std::int64_t removal_checks = 0, removal_violations = 0;
  std::int64_t coarsify_checks = 0, coarsify_violations = 0;
  std::int64_t fractional_checks = 0, fractional_violations = 0;
  std::int64_t monotone_checks = 0, monotone_violations = 0;
  std::int64_t span_checks = 0, span_violations = 0;

  std::int64_t violations() const {
    return refine_violations + removal_violations + coarsify_violations +
           fractional_violations + monotone_violations + span_violations;
  }
};

struct BoundReport {
  std::string algorithm;
  SolveStatus status = SolveStatus::kFailed;
  BoundType bound_type = BoundType::kLpEqual;
  double bound = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  int iterations = 0;
  int peak_columns = 0;
  int final_columns = 0;
  double time_ms = 0.0;
  double master_ms = 0.0;
  double pricing_ms = 0.0;
  std::int64_t lp_iterations = 0;
  std::vector<double> z;  // final master point
  std::vector<double> u;
  std::vector<IterationRecord> log;
  InvariantCounters invariants;
  std::string message;

  bool converged() const { return status == SolveStatus::kConverged; }
};

// Iteration log as CSV with header
// iteration,lower,upper,pricing_value,columns,master_ms,pricing_ms.
void write_iteration_log(const BoundReport& report, std::ostream& out);

struct ColgenOptions {
  double tolerance = 1e-6;
  int k_step = 1;
  bool pricing_hot_start = true;  // PHS
  bool path_contraction = true;   // PC
  bool master_hot_start = true;   // MHS
  // Gcg engines: stop as soon as the Lagrangian bound drops to the master
  // value, which may end below the linear-hull bound.
  bool stop_on_crossing = true;
  int max_iterations = 100000;
  double time_limit_s = 0.0;  // <= 0 disables
  bool check_invariants = true;
  // Initial 0-1 columns (STCOL); they must satisfy the easy block.
  std::vector<std::vector<char>> start_columns;
  // Penalty per unit of side-row violation; <= 0 selects 1e6 * scale.
  double penalty = 0.0;
};

// When `pricer` is null a pricer is built by make_pricer.
BoundReport gcg_solve(const GpcpInstance& g, const ColgenOptions& options = {},
                      Pricer* pricer = nullptr);
// Requires every general row to be an equality and no arcs.
BoundReport gcg_eq_solve(const GpcpInstance& g, const ColgenOptions& options = {},
                         Pricer* pricer = nullptr);
BoundReport dw_solve(const GpcpInstance& g, const ColgenOptions& options = {},
                     Pricer* pricer = nullptr);
// Requires a precedence-only easy block.
BoundReport bz_solve(const GpcpInstance& g, const ColgenOptions& options = {});

// Elementary basis of the greedy schedule's z; empty when nothing is
// executed or the greedy schedule is infeasible.
Partition starting_columns(const GpspInstance& instance, const VarIndex& index);
// The same columns as 0-1 vectors.
std::vector<std::vector<char>> partition_columns(const Partition& partition, int n);

}  // namespace schedbound

#endif  // SCHEDBOUND_COLGEN_H_
