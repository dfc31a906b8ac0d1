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

#include "schedbound/colgen.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <utility>

#include "schedbound/io.h"
#include "schedbound/lp.h"

namespace schedbound {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

double row_value(const ConstraintRow& row, std::span<const double> z) {
  double s = 0.0;
  for (const SparseEntry& e : row.z) s += e.value * z[e.index];
  return s;
}

bool row_satisfied(const ConstraintRow& row, double lhs, double tol = 1e-9) {
  return row.sense == RowSense::kEqual ? std::abs(lhs - row.rhs) <= tol : lhs <= row.rhs + tol;
}

// Weights c - H'pi over z.
std::vector<double> priced_weights(const GpcpInstance& g, std::span<const double> pi) {
  std::vector<double> w = g.c;
  for (int r = 0; r < g.r2(); ++r) {
    if (pi[r] == 0.0) continue;
    for (const SparseEntry& e : g.h_rows[r].z) w[e.index] -= pi[r] * e.value;
  }
  return w;
}

double dot_rhs(const GpcpInstance& g, std::span<const double> pi) {
  double s = 0.0;
  for (int r = 0; r < g.r2(); ++r) s += pi[r] * g.h_rows[r].rhs;
  return s;
}

double penalty_for(const GpcpInstance& g, const ColgenOptions& options) {
  if (options.penalty > 0.0) return options.penalty;
  double scale = 1.0;
  for (double v : g.c) scale = std::max(scale, std::abs(v));
  for (double v : g.d) scale = std::max(scale, std::abs(v));
  return 1e6 * scale;
}

std::vector<double> to_double(std::span<const char> v) {
  return std::vector<double>(v.begin(), v.end());
}

double relative_slack(double a) { return 1e-9 * std::max(1.0, std::abs(a)); }

// The first finite master value counts as a strict improvement.
bool strictly_improves(double value, double previous) {
  return previous == -kInfinity || value > previous + relative_slack(previous);
}

bool drops_below(double value, double previous) {
  return previous != -kInfinity && value < previous - relative_slack(previous);
}

bool time_exceeded(const ColgenOptions& options, Clock::time_point start) {
  return options.time_limit_s > 0.0 && elapsed_ms(start) > 1000.0 * options.time_limit_s;
}

void finish(BoundReport* report, Clock::time_point start) {
  report->time_ms = elapsed_ms(start);
  report->iterations = static_cast<int>(report->log.size());
}

// Variables [u (num_u), s (r2)] shared by every master; returns the first
// index after them. Side rows are added by the caller.
int add_side_variables(const GpcpInstance& g, double penalty, LpProblem* lp) {
  for (int j = 0; j < g.num_u; ++j) lp->add_variable(g.d[j], -kInfinity, kInfinity);
  for (int r = 0; r < g.r2(); ++r) lp->add_variable(-penalty, 0.0, kInfinity);
  return g.num_u + g.r2();
}

double artificial_sum(const GpcpInstance& g, const LpSolution& sol) {
  double s = 0.0;
  for (int r = 0; r < g.r2(); ++r) s += sol.x[g.num_u + r];
  return s;
}

// ---------------------------------------------------------------------------
// Shared loop of the gcg, gcg-eq and dw engines.

enum class MasterKind { kSpan, kSpanEquality, kConvex };

struct ColumnEngine {
  const GpcpInstance& g;
  const ColgenOptions& options;
  MasterKind kind;
  Pricer* pricer;

  std::vector<ConstraintRow> easy_rows;  // kSpan only
  std::vector<double> origin;            // v0 for kSpanEquality, else zeros
  std::vector<std::vector<double>> columns;
  std::vector<BasisStatus> column_status;
  LpBasis side_basis;  // u, s and row statuses of the previous master
  double penalty = 0.0;

  struct Master {
    LpSolution sol;
    double lower = 0.0;
    double artificial = 0.0;
    std::vector<double> lambda, z, u, alpha, pi;
    double mu = 0.0;
  };

  int side_rows_begin() const {
    return kind == MasterKind::kSpan ? static_cast<int>(easy_rows.size())
           : kind == MasterKind::kConvex ? 1
                                         : 0;
  }

  Master solve_master(std::int64_t* lp_iterations) {
    LpProblem lp;
    const int first = add_side_variables(g, penalty, &lp);
    const bool convex = kind == MasterKind::kConvex;
    for (const auto& col : columns) {
      double obj = 0.0;
      for (int i = 0; i < g.n; ++i) obj += g.c[i] * col[i];
      lp.add_variable(obj, convex ? 0.0 : -kInfinity, kInfinity);
    }
    const int k = static_cast<int>(columns.size());
    if (kind == MasterKind::kSpan) {
      for (const ConstraintRow& row : easy_rows) {
        std::vector<LpEntry> entries;
        for (int q = 0; q < k; ++q) {
          const double a = row_value(row, columns[q]);
          if (a != 0.0) entries.push_back({first + q, a});
        }
        lp.add_row(std::move(entries),
                   row.sense == RowSense::kEqual ? LpSense::kEqual : LpSense::kLessEqual, row.rhs);
      }
    } else if (convex) {
      std::vector<LpEntry> entries;
      for (int q = 0; q < k; ++q) entries.push_back({first + q, 1.0});
      lp.add_row(std::move(entries), LpSense::kEqual, 1.0);
    }
    for (int r = 0; r < g.r2(); ++r) {
      const ConstraintRow& row = g.h_rows[r];
      std::vector<LpEntry> entries;
      for (const SparseEntry& e : row.u) entries.push_back({e.index, e.value});
      entries.push_back({g.num_u + r, -1.0});
      for (int q = 0; q < k; ++q) {
        const double a = row_value(row, columns[q]);
        if (a != 0.0) entries.push_back({first + q, a});
      }
      lp.add_row(std::move(entries), LpSense::kLessEqual, row.rhs - row_value(row, origin));
    }

    Master m;
    if (options.master_hot_start && !side_basis.empty()) {
      LpBasis hint;
      hint.vars = side_basis.vars;
      hint.vars.insert(hint.vars.end(), column_status.begin(), column_status.end());
      hint.rows = side_basis.rows;
      m.sol = warm_solve(lp, hint);
    } else {
      m.sol = solve_lp(lp);
    }
    *lp_iterations += m.sol.iterations;
    if (!m.sol.optimal()) return m;

    side_basis.vars.assign(m.sol.basis.vars.begin(), m.sol.basis.vars.begin() + first);
    side_basis.rows = m.sol.basis.rows;
    column_status.assign(m.sol.basis.vars.begin() + first, m.sol.basis.vars.end());

    double constant = 0.0;
    for (int i = 0; i < g.n; ++i) constant += g.c[i] * origin[i];
    m.lower = m.sol.objective + constant;
    m.artificial = artificial_sum(g, m.sol);
    m.u.assign(m.sol.x.begin(), m.sol.x.begin() + g.num_u);
    m.lambda.assign(m.sol.x.begin() + first, m.sol.x.end());
    m.z = origin;
    for (int q = 0; q < k; ++q) {
      for (int i = 0; i < g.n; ++i) m.z[i] += m.lambda[q] * columns[q][i];
    }
    const int side = side_rows_begin();
    if (kind == MasterKind::kSpan) m.alpha.assign(m.sol.duals.begin(), m.sol.duals.begin() + side);
    if (convex) m.mu = m.sol.duals[0];
    m.pi.assign(m.sol.duals.begin() + side, m.sol.duals.end());
    return m;
  }

  void add_column(std::vector<double> column) {
    columns.push_back(std::move(column));
    column_status.push_back(kind == MasterKind::kConvex ? BasisStatus::kAtLower
                                                        : BasisStatus::kFree);
  }

  // Reduced-cost weights c - A'alpha - H'pi (span masters), so that
  // c_bar(v) = weights'v - shift.
  std::vector<double> reduced_weights(const Master& m) const {
    std::vector<double> w = priced_weights(g, m.pi);
    for (size_t r = 0; r < m.alpha.size(); ++r) {
      if (m.alpha[r] == 0.0) continue;
      for (const SparseEntry& e : easy_rows[r].z) w[e.index] -= m.alpha[r] * e.value;
    }
    return w;
  }

  BoundReport run(const char* name) {
    const auto start = Clock::now();
    BoundReport report;
    report.algorithm = name;
    penalty = penalty_for(g, options);
    origin.assign(g.n, 0.0);
    if (kind == MasterKind::kSpan) easy_rows = easy_block_rows(g);

    // Seed: supplied columns, else the best point of the easy block.
    PricingResult seed = pricer->price(g.c);
    if (!seed.feasible) {
      report.status = SolveStatus::kInfeasible;
      report.message = "easy block has no 0-1 point";
      finish(&report, start);
      return report;
    }
    if (kind == MasterKind::kSpanEquality) {
      origin = to_double(seed.column);
    } else if (options.start_columns.empty()) {
      add_column(to_double(seed.column));
    } else {
      for (const auto& col : options.start_columns) add_column(to_double(col));
    }

    double upper = kInfinity;
    double prev_lower = -kInfinity;
    Master m;
    for (int it = 1;; ++it) {
      if (it > options.max_iterations) {
        report.status = SolveStatus::kIterationLimit;
        break;
      }
      if (time_exceeded(options, start)) {
        report.status = SolveStatus::kTimeLimit;
        break;
      }
      IterationRecord rec;
      rec.iteration = it;
      auto t0 = Clock::now();
      m = solve_master(&report.lp_iterations);
      rec.master_ms = elapsed_ms(t0);
      if (!m.sol.optimal()) {
        report.status = SolveStatus::kFailed;
        report.message = std::string("master LP ") + to_string(m.sol.status);
        break;
      }
      t0 = Clock::now();
      const std::vector<double> w = priced_weights(g, m.pi);
      const PricingResult priced = pricer->price(w);
      rec.pricing_ms = elapsed_ms(t0);
      if (!priced.feasible) {
        report.status = SolveStatus::kFailed;
        report.message = "pricing failed";
        break;
      }
      const double lagrangian = priced.value + dot_rhs(g, m.pi);
      upper = std::min(upper, lagrangian);
      rec.lower = m.lower;
      rec.upper = upper;
      rec.pricing_value = lagrangian;
      rec.columns = static_cast<int>(columns.size());
      report.log.push_back(rec);
      report.peak_columns = std::max(report.peak_columns, rec.columns);
      report.master_ms += rec.master_ms;
      report.pricing_ms += rec.pricing_ms;
      if (options.check_invariants) {
        ++report.invariants.monotone_checks;
        if (drops_below(m.lower, prev_lower)) {
          ++report.invariants.monotone_violations;
        }
      }

      const bool feasible = m.artificial <= 1e-7;
      const bool closed = check_termination(m.lower, upper, options.tolerance);
      std::vector<double> entering;
      if (closed) {
        if (!feasible) {
          report.status = SolveStatus::kInfeasible;
          report.message = "side rows cannot be satisfied";
          break;
        }
        if (kind == MasterKind::kConvex || options.stop_on_crossing) {
          report.status = SolveStatus::kConverged;
          break;
        }
        // Span optimality: every point of P must have zero reduced cost.
        const std::vector<double> rw = reduced_weights(m);
        double shift = 0.0;
        for (int i = 0; i < g.n; ++i) shift += rw[i] * origin[i];
        const PricingResult hi = pricer->price(rw);
        std::vector<double> neg(rw.size());
        for (size_t i = 0; i < rw.size(); ++i) neg[i] = -rw[i];
        const PricingResult lo = pricer->price(neg);
        const double best_gain = hi.value - shift;
        const double best_loss = -lo.value - shift;
        const double tol = options.tolerance * std::max(1.0, std::abs(m.lower));
        if (best_gain <= tol && best_loss >= -tol) {
          report.status = SolveStatus::kConverged;
          break;
        }
        entering = to_double(best_gain >= -best_loss ? hi.column : lo.column);
      } else {
        entering = to_double(priced.column);
      }
      if (kind == MasterKind::kSpanEquality) {
        for (int i = 0; i < g.n; ++i) entering[i] -= origin[i];
      }

      // Column removal after strict improvement keeps only the support of
      // the basic optimum, at most r2 + 1 columns.
      if (kind == MasterKind::kConvex && strictly_improves(m.lower, prev_lower)) {
        std::vector<std::vector<double>> kept;
        std::vector<BasisStatus> kept_status;
        for (size_t q = 0; q < columns.size(); ++q) {
          if (std::abs(m.lambda[q]) > 1e-12) {
            kept.push_back(std::move(columns[q]));
            kept_status.push_back(column_status[q]);
          }
        }
        columns = std::move(kept);
        column_status = std::move(kept_status);
        if (options.check_invariants) {
          ++report.invariants.removal_checks;
          if (static_cast<int>(columns.size()) > g.r2() + 1) {
            ++report.invariants.removal_violations;
          }
        }
      }
      prev_lower = std::max(prev_lower, m.lower);
      add_column(std::move(entering));
    }

    report.lower = m.lower;
    report.upper = upper;
    report.z = m.z;
    report.u = m.u;
    report.final_columns = static_cast<int>(columns.size());
    switch (kind) {
      case MasterKind::kConvex:
        report.bound = m.lower;
        report.bound_type = BoundType::kDw;
        break;
      case MasterKind::kSpan:
      case MasterKind::kSpanEquality:
        if (options.stop_on_crossing) {
          report.bound = upper;
          report.bound_type = upper < m.lower - options.tolerance * std::max(1.0, std::abs(m.lower))
                                  ? BoundType::kEarlyUpper
                                  : BoundType::kLin;
        } else {
          report.bound = m.lower;
          report.bound_type = BoundType::kLin;
        }
        break;
    }
    finish(&report, start);
    return report;
  }
};

BoundReport run_column_engine(const GpcpInstance& g, const ColgenOptions& options,
                              Pricer* pricer, MasterKind kind, const char* name) {
  std::unique_ptr<Pricer> owned;
  if (pricer == nullptr) {
    owned = make_pricer(g, {options.path_contraction, options.pricing_hot_start});
    pricer = owned.get();
  }
  ColumnEngine engine{g, options, kind, pricer, {}, {}, {}, {}, {}, 0.0};
  return engine.run(name);
}

// ---------------------------------------------------------------------------
// BZ engine: master over the partition classes, one variable per class.

struct BzMaster {
  LpSolution sol;
  double lower = 0.0;
  double artificial = 0.0;
  std::vector<double> lambda, z, u, pi;
};

class BzEngine {
 public:
  BzEngine(const GpcpInstance& g, const ColgenOptions& options)
      : g_(g), options_(options), pricer_(g, {options.path_contraction, options.pricing_hot_start}) {}

  BoundReport run() {
    const auto start = Clock::now();
    BoundReport report;
    report.algorithm = "bz";
    penalty_ = penalty_for(g_, options_);
    const int k = std::max(1, options_.k_step);

    for (const auto& col : options_.start_columns) partition_ = refine(partition_, col);
    // Without starting columns the first class family comes from pricing at
    // c; a forced one must also be covered before the master is feasible.
    const bool forced_one = std::any_of(g_.bound_fixings.begin(), g_.bound_fixings.end(),
                                        [](const Fixing& f) { return f.value == 1; });
    if (partition_.empty() || forced_one) {
      const ClosureResult seed = pricer_.price(g_.c);
      if (!seed.feasible) {
        report.status = SolveStatus::kInfeasible;
        report.message = "fixings contradict the precedence arcs";
        finish(&report, start);
        return report;
      }
      partition_ = refine(partition_, seed.selection);
    }

    std::vector<std::vector<double>> history_z;
    std::vector<std::vector<char>> history_v;
    double upper = kInfinity;
    double prev_lower = -kInfinity;
    BzMaster m;
    for (int it = 1;; ++it) {
      if (it > options_.max_iterations) {
        report.status = SolveStatus::kIterationLimit;
        break;
      }
      if (time_exceeded(options_, start)) {
        report.status = SolveStatus::kTimeLimit;
        break;
      }
      IterationRecord rec;
      rec.iteration = it;
      rec.columns = partition_.size();
      auto t0 = Clock::now();
      if (!solve_master(&m, &report.lp_iterations)) {
        report.status = SolveStatus::kFailed;
        report.message = std::string("master LP ") + to_string(m.sol.status);
        break;
      }
      rec.master_ms = elapsed_ms(t0);
      const bool feasible = m.artificial <= 1e-7;
      if (options_.check_invariants && feasible) {
        ++report.invariants.fractional_checks;
        if (count_fractional_values(m.z) > g_.r2() - g_.num_u) {
          ++report.invariants.fractional_violations;
        }
      }

      t0 = Clock::now();
      const std::vector<double> w = priced_weights(g_, m.pi);
      const ClosureResult priced = pricer_.price(w);
      rec.pricing_ms = elapsed_ms(t0);
      const double lagrangian = priced.value + dot_rhs(g_, m.pi);
      upper = std::min(upper, lagrangian);
      rec.lower = m.lower;
      rec.upper = upper;
      rec.pricing_value = lagrangian;
      report.log.push_back(rec);
      report.peak_columns = std::max(report.peak_columns, rec.columns);
      report.master_ms += rec.master_ms;
      report.pricing_ms += rec.pricing_ms;

      const bool improved = strictly_improves(m.lower, prev_lower);
      if (options_.check_invariants && k == 1) {
        ++report.invariants.monotone_checks;
        if (drops_below(m.lower, prev_lower)) {
          ++report.invariants.monotone_violations;
        }
      }
      if (check_termination(m.lower, upper, options_.tolerance)) {
        if (feasible) {
          report.status = SolveStatus::kConverged;
        } else {
          report.status = SolveStatus::kInfeasible;
          report.message = "side rows cannot be satisfied";
        }
        break;
      }

      history_z.push_back(m.z);
      history_v.push_back(priced.selection);
      if (static_cast<int>(history_z.size()) > k) {
        history_z.erase(history_z.begin());
        history_v.erase(history_v.begin());
      }
      bool coarsified = false;
      if (improved) {
        // Anchor z^{j+1-k}, refined by the pricing columns that followed it.
        const std::span<const std::vector<char>> later(history_v.data() + 1,
                                                       history_v.size() - 1);
        partition_ = coarsify_kstep(history_z.front(), later);
        coarsified = true;
        if (options_.check_invariants && k == 1) {
          ++report.invariants.coarsify_checks;
          if (partition_.size() > g_.r2() - g_.num_u + 1) {
            ++report.invariants.coarsify_violations;
          }
        }
      }
      const int base = partition_.size();
      partition_ = refine(partition_, priced.selection);
      partition_.values.clear();
      if (options_.check_invariants) {
        ++report.invariants.refine_checks;
        if (!is_orthogonal(partition_, g_.n) || partition_.size() > 2 * base + 1) {
          ++report.invariants.refine_violations;
        }
        if (!coarsified || k == 1) {
          ++report.invariants.span_checks;
          if (!in_span(m.z)) ++report.invariants.span_violations;
        }
      }
      prev_lower = std::max(prev_lower, m.lower);
      prev_z_ = m.z;
    }

    report.lower = m.lower;
    report.upper = upper;
    report.bound = m.lower;
    report.bound_type = BoundType::kLpEqual;
    report.z = m.z;
    report.u = m.u;
    report.final_columns = partition_.size();
    finish(&report, start);
    return report;
  }

 private:
  bool in_span(const std::vector<double>& z) const {
    std::vector<char> covered(g_.n, 0);
    for (const auto& cls : partition_.classes) {
      for (int i : cls) {
        covered[i] = 1;
        if (std::abs(z[i] - z[cls.front()]) > 1e-9) return false;
      }
    }
    for (int i = 0; i < g_.n; ++i) {
      if (!covered[i] && std::abs(z[i]) > 1e-9) return false;
    }
    return true;
  }

  bool solve_master(BzMaster* m, std::int64_t* lp_iterations) {
    const int num_classes = partition_.size();
    std::vector<int> cls_of(g_.n, -1);
    for (int q = 0; q < num_classes; ++q) {
      for (int i : partition_.classes[q]) cls_of[i] = q;
    }
    LpProblem lp;
    const int first = add_side_variables(g_, penalty_, &lp);
    std::vector<double> obj(num_classes, 0.0), lo(num_classes, 0.0), hi(num_classes, 1.0);
    for (int i = 0; i < g_.n; ++i) {
      if (cls_of[i] >= 0) obj[cls_of[i]] += g_.c[i];
    }
    std::set<std::pair<int, int>> arc_rows;
    for (const auto& [i, j] : g_.arcs) {
      const int a = cls_of[i], b = cls_of[j];
      if (a < 0 || a == b) continue;
      if (b < 0) {
        hi[a] = 0.0;
      } else {
        arc_rows.emplace(a, b);
      }
    }
    for (const Fixing& f : g_.bound_fixings) {
      const int a = cls_of[f.index];
      if (a < 0) {
        if (f.value == 1) return false;
        continue;
      }
      lo[a] = std::max(lo[a], static_cast<double>(f.value));
      hi[a] = std::min(hi[a], static_cast<double>(f.value));
    }
    for (int q = 0; q < num_classes; ++q) {
      if (lo[q] > hi[q]) return false;
      lp.add_variable(obj[q], lo[q], hi[q]);
    }
    for (int r = 0; r < g_.r2(); ++r) {
      const ConstraintRow& row = g_.h_rows[r];
      std::map<int, double> coef;
      for (const SparseEntry& e : row.z) {
        if (cls_of[e.index] >= 0) coef[first + cls_of[e.index]] += e.value;
      }
      std::vector<LpEntry> entries;
      for (const SparseEntry& e : row.u) entries.push_back({e.index, e.value});
      entries.push_back({g_.num_u + r, -1.0});
      for (const auto& [var, value] : coef) {
        if (value != 0.0) entries.push_back({var, value});
      }
      lp.add_row(std::move(entries), LpSense::kLessEqual, row.rhs);
    }
    for (const auto& [a, b] : arc_rows) {
      lp.add_row({{first + a, 1.0}, {first + b, -1.0}}, LpSense::kLessEqual, 0.0);
    }

    if (options_.master_hot_start && !side_vars_.empty()) {
      LpBasis hint;
      hint.vars = side_vars_;
      hint.rows = side_rows_;
      for (int q = 0; q < num_classes; ++q) {
        const double v = prev_z_[partition_.classes[q].front()];
        hint.vars.push_back(v > lo[q] + 1e-9 && v < hi[q] - 1e-9 ? BasisStatus::kBasic
                            : v >= hi[q] - 1e-9                  ? BasisStatus::kAtUpper
                                                                 : BasisStatus::kAtLower);
      }
      for (const auto& [a, b] : arc_rows) {
        const double gap = prev_z_[partition_.classes[a].front()] -
                           prev_z_[partition_.classes[b].front()];
        hint.rows.push_back(std::abs(gap) <= 1e-9 ? BasisStatus::kAtUpper : BasisStatus::kBasic);
      }
      m->sol = warm_solve(lp, hint);
    } else {
      m->sol = solve_lp(lp);
    }
    *lp_iterations += m->sol.iterations;
    if (!m->sol.optimal()) return false;

    side_vars_.assign(m->sol.basis.vars.begin(), m->sol.basis.vars.begin() + first);
    side_rows_.assign(m->sol.basis.rows.begin(), m->sol.basis.rows.begin() + g_.r2());
    m->lower = m->sol.objective;
    m->artificial = artificial_sum(g_, m->sol);
    m->u.assign(m->sol.x.begin(), m->sol.x.begin() + g_.num_u);
    m->lambda.assign(m->sol.x.begin() + first, m->sol.x.end());
    m->z = assemble(partition_, m->lambda, g_.n);
    m->pi.assign(m->sol.duals.begin(), m->sol.duals.begin() + g_.r2());
    return true;
  }

  const GpcpInstance& g_;
  const ColgenOptions& options_;
  ClosurePricer pricer_;
  Partition partition_;
  double penalty_ = 0.0;
  std::vector<BasisStatus> side_vars_, side_rows_;
  std::vector<double> prev_z_;
};

}  // namespace

// ---------------------------------------------------------------------------

ClosurePricingOracle::ClosurePricingOracle(const GpcpInstance& g, ClosurePricerOptions options)
    : pricer_(g, options) {}

PricingResult ClosurePricingOracle::price(std::span<const double> weights) {
  ClosureResult r = pricer_.price(weights);
  return {r.feasible, std::move(r.selection), r.value};
}

EnumerationPricer::EnumerationPricer(const GpcpInstance& g) : n_(g.n) {
  if (g.n > kMaxVars) {
    throw std::invalid_argument("enumeration pricing supports at most " +
                                std::to_string(kMaxVars) + " variables");
  }
  std::vector<double> z(g.n);
  for (std::uint32_t mask = 0; mask < (1u << g.n); ++mask) {
    for (int i = 0; i < g.n; ++i) z[i] = (mask >> i) & 1u;
    bool ok = true;
    for (const auto& [i, j] : g.arcs) ok = ok && z[i] <= z[j];
    for (const Fixing& f : g.bound_fixings) ok = ok && z[f.index] == f.value;
    for (const ConstraintRow& row : g.a_rows) ok = ok && row_satisfied(row, row_value(row, z));
    if (ok) points_.push_back(mask);
  }
}

PricingResult EnumerationPricer::price(std::span<const double> weights) {
  PricingResult best;
  for (std::uint32_t mask : points_) {
    double value = 0.0;
    for (int i = 0; i < n_; ++i) {
      if ((mask >> i) & 1u) value += weights[i];
    }
    if (!best.feasible || value > best.value) {
      best.feasible = true;
      best.value = value;
      best.column.assign(n_, 0);
      for (int i = 0; i < n_; ++i) best.column[i] = (mask >> i) & 1u;
    }
  }
  return best;
}

std::unique_ptr<Pricer> make_pricer(const GpcpInstance& g, ClosurePricerOptions options) {
  if (g.precedence_only()) return std::make_unique<ClosurePricingOracle>(g, options);
  return std::make_unique<EnumerationPricer>(g);
}

std::vector<ConstraintRow> easy_block_rows(const GpcpInstance& g, bool include_bounds) {
  std::vector<ConstraintRow> rows;
  for (const auto& [i, j] : g.arcs) {
    ConstraintRow row;
    row.z = i < j ? std::vector<SparseEntry>{{i, 1.0}, {j, -1.0}}
                  : std::vector<SparseEntry>{{j, -1.0}, {i, 1.0}};
    rows.push_back(std::move(row));
  }
  if (include_bounds) {
    for (int i = 0; i < g.n; ++i) rows.push_back({{{i, 1.0}}, {}, RowSense::kLessEqual, 1.0});
    for (int i = 0; i < g.n; ++i) rows.push_back({{{i, -1.0}}, {}, RowSense::kLessEqual, 0.0});
  }
  for (const ConstraintRow& row : g.a_rows) rows.push_back(row);
  for (const Fixing& f : g.bound_fixings) {
    rows.push_back({{{f.index, 1.0}}, {}, RowSense::kEqual, static_cast<double>(f.value)});
  }
  return rows;
}

double reduced_cost(const GpcpInstance& g, std::span<const char> v,
                    std::span<const double> alpha, std::span<const double> pi) {
  const std::vector<double> z = to_double(v);
  double value = 0.0;
  for (int i = 0; i < g.n; ++i) value += g.c[i] * z[i];
  if (!alpha.empty()) {
    const std::vector<ConstraintRow> rows = easy_block_rows(g);
    for (size_t r = 0; r < rows.size() && r < alpha.size(); ++r) {
      value -= alpha[r] * row_value(rows[r], z);
    }
  }
  for (int r = 0; r < g.r2() && r < static_cast<int>(pi.size()); ++r) {
    value -= pi[r] * row_value(g.h_rows[r], z);
  }
  return value;
}

bool check_termination(double lower, double upper, double tolerance) {
  return (upper - lower) / std::max(1.0, std::abs(lower)) <= tolerance;
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kConverged: return "converged";
    case SolveStatus::kIterationLimit: return "iteration_limit";
    case SolveStatus::kTimeLimit: return "time_limit";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kFailed: return "failed";
  }
  return "unknown";
}

const char* to_string(BoundType type) {
  switch (type) {
    case BoundType::kLpEqual: return "lp";
    case BoundType::kDw: return "dw";
    case BoundType::kLin: return "lin";
    case BoundType::kEarlyUpper: return "early_upper";
  }
  return "unknown";
}

void write_iteration_log(const BoundReport& report, std::ostream& out) {
  out << "iteration,lower,upper,pricing_value,columns,master_ms,pricing_ms\n";
  for (const IterationRecord& r : report.log) {
    out << r.iteration << ',' << format_double(r.lower) << ',' << format_double(r.upper) << ','
        << format_double(r.pricing_value) << ',' << r.columns << ',' << format_double(r.master_ms)
        << ',' << format_double(r.pricing_ms) << '\n';
  }
}

BoundReport gcg_solve(const GpcpInstance& g, const ColgenOptions& options, Pricer* pricer) {
  return run_column_engine(g, options, pricer, MasterKind::kSpan, "gcg");
}

BoundReport gcg_eq_solve(const GpcpInstance& g, const ColgenOptions& options, Pricer* pricer) {
  if (!g.arcs.empty()) throw std::invalid_argument("gcg-eq requires an arc-free easy block");
  for (const ConstraintRow& row : g.a_rows) {
    if (row.sense != RowSense::kEqual) {
      throw std::invalid_argument("gcg-eq requires equality general rows");
    }
  }
  return run_column_engine(g, options, pricer, MasterKind::kSpanEquality, "gcg-eq");
}

BoundReport dw_solve(const GpcpInstance& g, const ColgenOptions& options, Pricer* pricer) {
  return run_column_engine(g, options, pricer, MasterKind::kConvex, "dw");
}

BoundReport bz_solve(const GpcpInstance& g, const ColgenOptions& options) {
  if (!g.precedence_only()) {
    throw std::invalid_argument("bz requires a precedence-only easy block");
  }
  return BzEngine(g, options).run();
}

Partition starting_columns(const GpspInstance& instance, const VarIndex& index) {
  const GreedyResult greedy = greedy_toposort_schedule(instance);
  if (!greedy.feasible) return {};
  return elementary_basis(schedule_to_z(instance, index, greedy.schedule));
}

std::vector<std::vector<char>> partition_columns(const Partition& partition, int n) {
  std::vector<std::vector<char>> out;
  for (const auto& cls : partition.classes) {
    std::vector<char> col(n, 0);
    for (int i : cls) col[i] = 1;
    out.push_back(std::move(col));
  }
  return out;
}

}  // namespace schedbound
