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

#include "schedbound/lp.h"

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <memory>

namespace schedbound {

int LpProblem::add_variable(double objective, double lower, double upper) {
  objective_.push_back(objective);
  lower_.push_back(lower);
  upper_.push_back(upper);
  return num_vars() - 1;
}

int LpProblem::add_row(std::vector<LpEntry> entries, LpSense sense, double rhs) {
  rows_.push_back({std::move(entries), sense, rhs});
  return num_rows() - 1;
}

std::string LpProblem::check() const {
  for (int j = 0; j < num_vars(); ++j) {
    if (std::isnan(lower_[j]) || std::isnan(upper_[j]) || lower_[j] > upper_[j]) {
      return "variable " + std::to_string(j) + " has inconsistent bounds";
    }
    if (!std::isfinite(objective_[j])) return "variable " + std::to_string(j) + " objective";
  }
  for (int i = 0; i < num_rows(); ++i) {
    if (!std::isfinite(rows_[i].rhs)) return "row " + std::to_string(i) + " rhs";
    for (const LpEntry& e : rows_[i].entries) {
      if (e.var < 0 || e.var >= num_vars()) return "row " + std::to_string(i) + " index";
      if (!std::isfinite(e.coef)) return "row " + std::to_string(i) + " coefficient";
    }
  }
  return {};
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration_limit";
    case LpStatus::kNumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

namespace {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using Vector = Eigen::VectorXd;

struct Eta {
  int row;
  std::vector<std::pair<int, double>> entries;  // includes (row, 1/pivot)
};

// LU of a basis B (columns indexed by basis position) that first peels
// column singletons into a triangular part and factors only the remaining
// kernel, densely when it is small. Slack-heavy bases thus cost little.
class BasisFactor {
 public:
  using Column = std::vector<std::pair<int, double>>;

  bool factorize(int m, std::vector<Column> columns) {
    m_ = m;
    columns_ = std::move(columns);
    std::vector<std::vector<int>> row_cols(m);
    std::vector<int> count(m, 0);
    for (int k = 0; k < m; ++k) {
      for (const auto& [i, a] : columns_[k]) {
        row_cols[i].push_back(k);
        ++count[k];
      }
    }
    std::vector<char> row_active(m, 1), col_done(m, 0);
    std::vector<int> queue;
    for (int k = 0; k < m; ++k) {
      if (count[k] == 1) queue.push_back(k);
    }
    peeled_.clear();
    for (size_t head = 0; head < queue.size(); ++head) {
      const int k = queue[head];
      if (col_done[k] || count[k] != 1) continue;
      int row = -1;
      double pivot = 0.0;
      for (const auto& [i, a] : columns_[k]) {
        if (row_active[i]) {
          row = i;
          pivot = a;
        }
      }
      if (row < 0 || pivot == 0.0) continue;
      col_done[k] = 1;
      row_active[row] = 0;
      peeled_.push_back({k, row, pivot});
      for (int other : row_cols[row]) {
        if (!col_done[other] && --count[other] == 1) queue.push_back(other);
      }
    }
    kernel_cols_.clear();
    kernel_rows_.clear();
    kernel_index_.assign(m, -1);
    for (int k = 0; k < m; ++k) {
      if (!col_done[k]) kernel_cols_.push_back(k);
    }
    for (int i = 0; i < m; ++i) {
      if (row_active[i]) {
        kernel_index_[i] = static_cast<int>(kernel_rows_.size());
        kernel_rows_.push_back(i);
      }
    }
    if (kernel_cols_.size() != kernel_rows_.size()) return false;
    const int size = static_cast<int>(kernel_cols_.size());
    dense_ = size <= kDenseKernelLimit;
    if (size == 0) return true;
    if (dense_) {
      Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(size, size);
      for (int c = 0; c < size; ++c) {
        for (const auto& [i, a] : columns_[kernel_cols_[c]]) {
          if (kernel_index_[i] >= 0) kernel(kernel_index_[i], c) += a;
        }
      }
      dense_lu_.compute(kernel);
      return true;
    }
    std::vector<Eigen::Triplet<double>> triplets;
    for (int c = 0; c < size; ++c) {
      for (const auto& [i, a] : columns_[kernel_cols_[c]]) {
        if (kernel_index_[i] >= 0) triplets.emplace_back(kernel_index_[i], c, a);
      }
    }
    SparseMatrix kernel(size, size);
    kernel.setFromTriplets(triplets.begin(), triplets.end());
    kernel.makeCompressed();
    sparse_lu_ = std::make_unique<Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>>();
    sparse_lu_->analyzePattern(kernel);
    sparse_lu_->factorize(kernel);
    return sparse_lu_->info() == Eigen::Success;
  }

  // v: right-hand side by row in, solution by basis position out.
  void solve(Vector& v) const {
    Vector x = Vector::Zero(m_);
    const int size = static_cast<int>(kernel_cols_.size());
    if (size > 0) {
      Vector rhs(size);
      for (int r = 0; r < size; ++r) rhs[r] = v[kernel_rows_[r]];
      const Vector xk = dense_ ? Vector(dense_lu_.solve(rhs)) : Vector(sparse_lu_->solve(rhs));
      for (int c = 0; c < size; ++c) {
        const int k = kernel_cols_[c];
        x[k] = xk[c];
        if (xk[c] == 0.0) continue;
        for (const auto& [i, a] : columns_[k]) {
          if (kernel_index_[i] < 0) v[i] -= a * xk[c];
        }
      }
    }
    for (auto it = peeled_.rbegin(); it != peeled_.rend(); ++it) {
      const double xk = v[it->row] / it->pivot;
      x[it->col] = xk;
      if (xk == 0.0) continue;
      for (const auto& [i, a] : columns_[it->col]) {
        if (i != it->row) v[i] -= a * xk;
      }
    }
    v = std::move(x);
  }

  // v: right-hand side by basis position in, solution by row out.
  void solve_transpose(Vector& v) const {
    Vector y = Vector::Zero(m_);
    for (const Peeled& p : peeled_) {
      double s = v[p.col];
      for (const auto& [i, a] : columns_[p.col]) {
        if (i != p.row) s -= a * y[i];
      }
      y[p.row] = s / p.pivot;
    }
    const int size = static_cast<int>(kernel_cols_.size());
    if (size > 0) {
      Vector rhs(size);
      for (int c = 0; c < size; ++c) {
        const int k = kernel_cols_[c];
        double s = v[k];
        for (const auto& [i, a] : columns_[k]) {
          if (kernel_index_[i] < 0) s -= a * y[i];
        }
        rhs[c] = s;
      }
      const Vector yk = dense_ ? Vector(dense_lu_.transpose().solve(rhs))
                               : Vector(sparse_lu_->transpose().solve(rhs));
      for (int r = 0; r < size; ++r) y[kernel_rows_[r]] = yk[r];
    }
    v = std::move(y);
  }

 private:
  static constexpr int kDenseKernelLimit = 400;
  struct Peeled {
    int col, row;
    double pivot;
  };
  int m_ = 0;
  std::vector<Column> columns_;
  std::vector<Peeled> peeled_;  // in elimination order
  std::vector<int> kernel_cols_, kernel_rows_, kernel_index_;
  bool dense_ = true;
  Eigen::PartialPivLU<Eigen::MatrixXd> dense_lu_;
  std::unique_ptr<Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>> sparse_lu_;
};

constexpr double kRelativeDualTolerance = 1e-13;
// Dual refinement pays off only when penalty costs inflate y.
constexpr double kRefineCostScale = 1e3;
constexpr double kPerturbation = 1e-6;
constexpr int kMaxPerturbationRounds = 3;
constexpr double kCostPerturbation = 1e-6;
constexpr double kDualPivotTolerance = 1e-7;
constexpr double kDualRatioSlack = 1e-9;
constexpr double kDevexReset = 1e6;

class Simplex {
 public:
  Simplex(const LpProblem& problem, const LpOptions& options)
      : options_(options), m_(problem.num_rows()), n_(problem.num_vars()) {
    const int total = n_ + m_;
    cost_.assign(total, 0.0);
    lower_.assign(total, 0.0);
    upper_.assign(total, 0.0);
    for (int j = 0; j < n_; ++j) {
      cost_[j] = problem.objective(j);
      lower_[j] = problem.lower(j);
      upper_[j] = problem.upper(j);
    }
    std::vector<std::vector<std::pair<int, double>>> columns(n_);
    for (int i = 0; i < m_; ++i) {
      const LpRow& row = problem.row(i);
      for (const LpEntry& e : row.entries) {
        if (e.coef != 0.0) columns[e.var].emplace_back(i, e.coef);
      }
      const int s = n_ + i;
      switch (row.sense) {
        case LpSense::kLessEqual:
          lower_[s] = -kInfinity;
          upper_[s] = row.rhs;
          break;
        case LpSense::kGreaterEqual:
          lower_[s] = row.rhs;
          upper_[s] = kInfinity;
          break;
        case LpSense::kEqual:
          lower_[s] = upper_[s] = row.rhs;
          break;
      }
    }
    col_start_.push_back(0);
    for (int j = 0; j < n_; ++j) {
      // Merge repeated row indices within a column.
      auto& col = columns[j];
      std::stable_sort(col.begin(), col.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      for (size_t k = 0; k < col.size(); ++k) {
        if (!col_row_.empty() && static_cast<int>(col_row_.size()) > col_start_.back() &&
            col_row_.back() == col[k].first) {
          col_val_.back() += col[k].second;
        } else {
          col_row_.push_back(col[k].first);
          col_val_.push_back(col[k].second);
        }
      }
      col_start_.push_back(static_cast<int>(col_row_.size()));
    }
    x_.assign(total, 0.0);
    status_.assign(total, BasisStatus::kAtLower);
    pos_.assign(total, -1);
    fixed_.resize(total);
    for (int j = 0; j < total; ++j) {
      fixed_[j] = lower_[j] == upper_[j];
      cost_scale_ = std::max(cost_scale_, std::abs(cost_[j]));
    }
    original_lower_ = lower_;
    original_upper_ = upper_;
    shifted_.assign(total, 0);
  }

  LpSolution run(const LpBasis* hint) {
    LpSolution sol;
    if (!install_basis(hint, &sol.used_hint)) {
      sol.status = LpStatus::kNumericalFailure;
      return sol;
    }
    if (hint == nullptr && options_.dual_start && dual_feasible_start()) {
      sol.dual_phase = true;
      dual_iterate(&sol);
      cost_ = original_cost_;
      // The primal pass removes what the cost perturbation left behind and
      // confirms optimality or settles infeasibility.
      if (!refactor()) {
        sol.status = LpStatus::kNumericalFailure;
        extract(&sol);
        return sol;
      }
    }
    sol.status = iterate(&sol);
    extract(&sol);
    return sol;
  }

 private:
  template <typename F>
  void for_column(int j, F&& f) const {
    if (j >= n_) {
      f(j - n_, -1.0);
      return;
    }
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) f(col_row_[k], col_val_[k]);
  }

  double dot_column(const Vector& y, int j) const {
    if (j >= n_) return -y[j - n_];
    double s = 0.0;
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) s += y[col_row_[k]] * col_val_[k];
    return s;
  }

  // Also reports the sum of absolute terms.
  double dot_column(const Vector& y, int j, double* magnitude) const {
    if (j >= n_) {
      *magnitude = std::abs(y[j - n_]);
      return -y[j - n_];
    }
    double s = 0.0, a = 0.0;
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
      const double t = y[col_row_[k]] * col_val_[k];
      s += t;
      a += std::abs(t);
    }
    *magnitude = a;
    return s;
  }

  void place_nonbasic(int j, BasisStatus preferred) {
    const bool lo = std::isfinite(lower_[j]);
    const bool up = std::isfinite(upper_[j]);
    BasisStatus s = preferred;
    if (s == BasisStatus::kBasic) s = BasisStatus::kAtLower;
    if (s == BasisStatus::kAtUpper && !up) s = BasisStatus::kAtLower;
    if (s == BasisStatus::kAtLower && !lo) s = up ? BasisStatus::kAtUpper : BasisStatus::kFree;
    if (s == BasisStatus::kFree && (lo || up)) s = lo ? BasisStatus::kAtLower : BasisStatus::kAtUpper;
    status_[j] = s;
    x_[j] = s == BasisStatus::kAtLower ? lower_[j] : s == BasisStatus::kAtUpper ? upper_[j] : 0.0;
    pos_[j] = -1;
  }

  void set_head(const std::vector<int>& basics) {
    head_ = basics;
    for (int i = 0; i < m_; ++i) {
      pos_[head_[i]] = i;
      status_[head_[i]] = BasisStatus::kBasic;
    }
  }

  void slack_basis() {
    const int total = n_ + m_;
    for (int j = 0; j < total; ++j) place_nonbasic(j, BasisStatus::kAtLower);
    std::vector<int> basics(m_);
    for (int i = 0; i < m_; ++i) basics[i] = n_ + i;
    set_head(basics);
  }

  // Greedy elimination over candidate columns; rows left without a pivot get
  // their logical variable.
  std::vector<int> crash(const std::vector<int>& candidates) const {
    std::vector<int> chosen;
    std::vector<bool> row_used(m_, false);
    std::vector<Vector> pivots;  // reduced columns of chosen candidates
    std::vector<int> pivot_rows;
    for (int j : candidates) {
      if (static_cast<int>(chosen.size()) == m_) break;
      Vector v = Vector::Zero(m_);
      for_column(j, [&](int i, double a) { v[i] = a; });
      for (size_t k = 0; k < pivots.size(); ++k) {
        const int r = pivot_rows[k];
        if (v[r] != 0.0) v -= (v[r] / pivots[k][r]) * pivots[k];
      }
      int best = -1;
      double best_abs = 1e-7;
      for (int i = 0; i < m_; ++i) {
        if (!row_used[i] && std::abs(v[i]) > best_abs) {
          best_abs = std::abs(v[i]);
          best = i;
        }
      }
      if (best < 0) continue;
      row_used[best] = true;
      pivots.push_back(std::move(v));
      pivot_rows.push_back(best);
      chosen.push_back(j);
    }
    for (int i = 0; i < m_; ++i) {
      if (!row_used[i]) chosen.push_back(n_ + i);
    }
    return chosen;
  }

  bool install_basis(const LpBasis* hint, bool* used_hint) {
    *used_hint = false;
    const bool compatible = hint != nullptr &&
                            static_cast<int>(hint->vars.size()) == n_ &&
                            static_cast<int>(hint->rows.size()) == m_;
    if (!compatible) {
      slack_basis();
      return refactor();
    }
    const int total = n_ + m_;
    std::vector<int> basics;
    for (int j = 0; j < total; ++j) {
      const BasisStatus s = j < n_ ? hint->vars[j] : hint->rows[j - n_];
      if (s == BasisStatus::kBasic) {
        basics.push_back(j);
      } else {
        place_nonbasic(j, s);
      }
    }
    if (static_cast<int>(basics.size()) == m_) {
      set_head(basics);
      if (refactor()) {
        *used_hint = true;
        return true;
      }
    }
    if (m_ > 2500) {
      slack_basis();
      return refactor();
    }
    std::vector<int> chosen = crash(basics);
    for (int j : basics) {
      if (std::find(chosen.begin(), chosen.end(), j) == chosen.end()) {
        place_nonbasic(j, BasisStatus::kAtLower);
      }
    }
    set_head(chosen);
    if (refactor()) {
      *used_hint = true;
      return true;
    }
    slack_basis();
    return refactor();
  }

  bool factorize() {
    etas_.clear();
    factored_ = false;
    if (m_ == 0) return factored_ = true;
    std::vector<BasisFactor::Column> columns(m_);
    for (int k = 0; k < m_; ++k) {
      for_column(head_[k], [&](int i, double a) { columns[k].emplace_back(i, a); });
    }
    if (!lu_.factorize(m_, columns)) return false;
    // Residual probe catches numerically singular bases.
    const Vector probe = Vector::LinSpaced(m_, 1.0, 2.0);
    Vector sol = probe;
    lu_.solve(sol);
    if (!sol.allFinite()) return false;
    Vector back = Vector::Zero(m_);
    for (int k = 0; k < m_; ++k) {
      for (const auto& [i, a] : columns[k]) back[i] += a * sol[k];
    }
    const double residual = (back - probe).lpNorm<Eigen::Infinity>();
    factored_ = residual <= 1e-7 * std::max(1.0, sol.lpNorm<Eigen::Infinity>());
    return factored_;
  }

  bool refactor() {
    if (!factorize()) return false;
    compute_basic_values();
    return true;
  }

  void ftran(Vector& v) const {
    if (m_ == 0) return;
    lu_.solve(v);
    for (const Eta& eta : etas_) {
      const double pivot_value = v[eta.row];
      if (pivot_value == 0.0) continue;
      for (const auto& [i, e] : eta.entries) {
        if (i == eta.row) continue;
        v[i] += e * pivot_value;
      }
      for (const auto& [i, e] : eta.entries) {
        if (i == eta.row) v[i] = e * pivot_value;
      }
    }
  }

  void btran(Vector& v) const {
    if (m_ == 0) return;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double s = 0.0;
      for (const auto& [i, e] : it->entries) s += v[i] * e;
      v[it->row] = s;
    }
    lu_.solve_transpose(v);
  }

  // One step of iterative refinement on B'y = c_B. Big penalty costs put
  // large entries in y whose rounding error swamps small reduced costs.
  void refine_duals(Vector& y, bool phase1) const {
    if (m_ == 0) return;
    Vector r(m_);
    for (int k = 0; k < m_; ++k) {
      const int j = head_[k];
      const double target = phase1 ? (x_[j] < lower_[j] - options_.primal_tolerance   ? 1.0
                                      : x_[j] > upper_[j] + options_.primal_tolerance ? -1.0
                                                                                        : 0.0)
                                    : cost_[j];
      r[k] = target - dot_column(y, j);
    }
    btran(r);
    y += r;
  }

  // Widens the bounds of basic variables by small deterministic amounts so
  // that degenerate vertices split. Returns false if nothing changed.
  bool perturb_basics() {
    bool changed = false;
    for (int k = 0; k < m_; ++k) {
      const int j = head_[k];
      if (shifted_[j]) continue;
      shifted_[j] = 1;
      // Golden-ratio sequence in [0, 1) keeps the shifts distinct.
      const double u = std::fmod(0.6180339887498949 * (j + 1), 1.0);
      const double base = kPerturbation * (1.0 + u);
      if (std::isfinite(lower_[j])) lower_[j] -= base * (1.0 + std::abs(lower_[j]));
      if (std::isfinite(upper_[j])) upper_[j] += base * (1.0 + std::abs(upper_[j]));
      changed = true;
    }
    if (changed) perturbed_ = true;
    return changed;
  }

  bool remove_perturbation() {
    ++perturbation_rounds_;
    perturbed_ = false;
    lower_ = original_lower_;
    upper_ = original_upper_;
    std::fill(shifted_.begin(), shifted_.end(), 0);
    const int total = n_ + m_;
    for (int j = 0; j < total; ++j) {
      if (pos_[j] < 0) place_nonbasic(j, status_[j]);
    }
    return refactor();
  }

  void compute_basic_values() {
    Vector rhs = Vector::Zero(m_);
    const int total = n_ + m_;
    for (int j = 0; j < total; ++j) {
      if (pos_[j] >= 0 || x_[j] == 0.0) continue;
      const double xj = x_[j];
      for_column(j, [&](int i, double a) { rhs[i] -= a * xj; });
    }
    ftran(rhs);
    for (int k = 0; k < m_; ++k) x_[head_[k]] = rhs[k];
  }

  double infeasibility(int j) const {
    if (x_[j] < lower_[j] - options_.primal_tolerance) return lower_[j] - x_[j];
    if (x_[j] > upper_[j] + options_.primal_tolerance) return x_[j] - upper_[j];
    return 0.0;
  }

  LpStatus iterate(LpSolution* sol) {
    int degenerate_run = 0;
    bool bland = false;
    int failures = 0;
    int confirmations = 0;
    std::vector<char> free_tried(n_ + m_, 0);
    const double dual_tol = options_.dual_tolerance;
    Vector y(m_), alpha(m_), rho(m_);
    std::vector<double> devex(n_ + m_, 1.0);
    while (true) {
      if (sol->iterations >= options_.iteration_limit) return LpStatus::kIterationLimit;
      if (static_cast<int>(etas_.size()) >= options_.refactor_interval) {
        if (!refactor()) return LpStatus::kNumericalFailure;
      }
      bool phase1 = false;
      for (int k = 0; k < m_ && !phase1; ++k) phase1 = infeasibility(head_[k]) > 0.0;

      for (int k = 0; k < m_; ++k) {
        const int j = head_[k];
        if (phase1) {
          y[k] = x_[j] < lower_[j] - options_.primal_tolerance   ? 1.0
                 : x_[j] > upper_[j] + options_.primal_tolerance ? -1.0
                                                                   : 0.0;
        } else {
          y[k] = cost_[j];
        }
      }
      btran(y);
      if (cost_scale_ > kRefineCostScale) refine_duals(y, phase1);

      int entering = -1;
      double best = 0.0, entering_d = 0.0;
      const int total = n_ + m_;
      for (int j = 0; j < total; ++j) {
        if (pos_[j] >= 0 || fixed_[j]) continue;
        const double cj = phase1 ? 0.0 : cost_[j];
        double magnitude;
        const double d = cj - dot_column(y, j, &magnitude);
        // Cancellation among large terms leaves noise of order eps * magnitude.
        const double tol_j = dual_tol + kRelativeDualTolerance * (std::abs(cj) + magnitude);
        bool eligible = false;
        switch (status_[j]) {
          case BasisStatus::kAtLower: eligible = d > tol_j; break;
          case BasisStatus::kAtUpper: eligible = d < -tol_j; break;
          case BasisStatus::kFree: eligible = std::abs(d) > tol_j; break;
          case BasisStatus::kBasic: break;
        }
        if (!eligible) continue;
        if (bland) {
          entering = j;
          entering_d = d;
          break;
        }
        // Devex: squared reduced cost over the reference weight.
        const double score = d * d / devex[j];
        if (score > best) {
          best = score;
          entering = j;
          entering_d = d;
        }
      }

      if (entering < 0) {
        // Confirm on a fresh factorization before declaring a result.
        if (!etas_.empty() && confirmations < 3) {
          ++confirmations;
          if (!refactor()) return LpStatus::kNumericalFailure;
          continue;
        }
        if (perturbed_) {
          // Cleanup pivots from the restored bounds finish the solve.
          if (!remove_perturbation()) return LpStatus::kNumericalFailure;
          degenerate_run = 0;
          bland = false;
          continue;
        }
        if (phase1) return LpStatus::kInfeasible;
        if (!options_.basic_free_variables) return LpStatus::kOptimal;
        entering = pick_free_entering(alpha, &entering_d, &free_tried);
        if (entering < 0) return LpStatus::kOptimal;
      } else {
        alpha.setZero();
        for_column(entering, [&](int i, double a) { alpha[i] = a; });
        ftran(alpha);
      }
      confirmations = 0;
      const double dir = entering_d > 0.0 ? 1.0 : -1.0;

      // Harris two-pass ratio test over x_B(theta) = x_B - theta * dir * alpha.
      const double tol = options_.primal_tolerance;
      double theta_max = kInfinity;
      auto bound_distance = [&](int k, double rate, bool relaxed, double* dist) {
        const int j = head_[k];
        const double v = x_[j];
        if (rate > 0.0) {
          if (v < lower_[j] - tol) {
            *dist = lower_[j] - v;
            return true;
          }
          if (v > upper_[j] + tol || !std::isfinite(upper_[j])) return false;
          *dist = upper_[j] - v + (relaxed ? tol : 0.0);
          return true;
        }
        if (v > upper_[j] + tol) {
          *dist = v - upper_[j];
          return true;
        }
        if (v < lower_[j] - tol || !std::isfinite(lower_[j])) return false;
        *dist = v - lower_[j] + (relaxed ? tol : 0.0);
        return true;
      };
      for (int k = 0; k < m_; ++k) {
        const double rate = -dir * alpha[k];
        if (std::abs(rate) < options_.pivot_tolerance) continue;
        double dist;
        if (bound_distance(k, rate, !bland, &dist)) {
          theta_max = std::min(theta_max, std::max(dist, 0.0) / std::abs(rate));
        }
      }
      const double range = upper_[entering] - lower_[entering];
      int leaving = -1;
      double theta = 0.0;
      if (std::isfinite(range) && range <= theta_max) {
        theta = range;
      } else if (std::isfinite(theta_max)) {
        double best_rate = 0.0;
        for (int k = 0; k < m_; ++k) {
          const double rate = -dir * alpha[k];
          if (std::abs(rate) < options_.pivot_tolerance) continue;
          double dist;
          if (!bound_distance(k, rate, false, &dist)) continue;
          const double ratio = std::max(dist, 0.0) / std::abs(rate);
          if (ratio > theta_max) continue;
          const bool better = bland ? (leaving < 0 || head_[k] < head_[leaving])
                                    : std::abs(rate) > best_rate;
          if (better) {
            best_rate = std::abs(rate);
            leaving = k;
            theta = ratio;
          }
        }
        if (leaving < 0) theta = theta_max;
      } else {
        if (!phase1) return LpStatus::kUnbounded;
        if (++failures > 5 || !refactor()) return LpStatus::kNumericalFailure;
        continue;
      }

      ++sol->iterations;
      if (phase1) ++sol->phase1_iterations;
      // Progress is measured by the objective gain relative to the objective,
      // so steps that only shuffle rounding noise count as degenerate.
      double objective = 0.0;
      for (int j = 0; j < total; ++j) objective += (phase1 ? 0.0 : cost_[j]) * x_[j];
      if (std::abs(entering_d) * theta <= 1e-12 * std::max(1.0, std::abs(objective))) {
        if (++degenerate_run > options_.stall_threshold) {
          if (perturbation_rounds_ < kMaxPerturbationRounds && perturb_basics()) {
            degenerate_run = 0;
          } else {
            bland = true;
          }
        }
      } else {
        degenerate_run = 0;
        bland = false;
      }

      x_[entering] += dir * theta;
      for (int k = 0; k < m_; ++k) x_[head_[k]] -= theta * dir * alpha[k];

      if (leaving < 0) {
        status_[entering] =
            dir > 0.0 ? BasisStatus::kAtUpper : BasisStatus::kAtLower;
        x_[entering] = dir > 0.0 ? upper_[entering] : lower_[entering];
        continue;
      }
      update_devex(devex, leaving, entering, alpha[leaving], rho);
      const int out = head_[leaving];
      // Leaving variables settle on the bound they reached.
      const bool at_upper = !std::isfinite(lower_[out]) ||
                            (std::isfinite(upper_[out]) &&
                             std::abs(x_[out] - upper_[out]) < std::abs(x_[out] - lower_[out]));
      status_[out] = at_upper ? BasisStatus::kAtUpper : BasisStatus::kAtLower;
      x_[out] = status_[out] == BasisStatus::kAtLower ? lower_[out] : upper_[out];
      pos_[out] = -1;

      replace_basic(leaving, entering, alpha);
    }
  }

  // Devex reference weights from the pivot row of the leaving position.
  void update_devex(std::vector<double>& devex, int leaving, int entering, double pivot,
                    Vector& rho) const {
    rho.setZero();
    rho[leaving] = 1.0;
    btran(rho);
    const double wq = devex[entering];
    const int total = n_ + m_;
    double largest = 0.0;
    for (int j = 0; j < total; ++j) {
      if (pos_[j] >= 0 || fixed_[j] || j == entering) continue;
      const double ratio = dot_column(rho, j) / pivot;
      devex[j] = std::max(devex[j], ratio * ratio * wq);
      largest = std::max(largest, devex[j]);
    }
    devex[head_[leaving]] = std::max(wq / (pivot * pivot), 1.0);
    if (largest > kDevexReset) std::fill(devex.begin(), devex.end(), 1.0);
  }

  // Basis change at position `leaving`; `alpha` is B^{-1} times the entering
  // column.
  void replace_basic(int leaving, int entering, const Vector& alpha) {
    Eta eta;
    eta.row = leaving;
    const double pivot = alpha[leaving];
    for (int k = 0; k < m_; ++k) {
      if (k == leaving) {
        eta.entries.emplace_back(k, 1.0 / pivot);
      } else if (alpha[k] != 0.0) {
        eta.entries.emplace_back(k, -alpha[k] / pivot);
      }
    }
    etas_.push_back(std::move(eta));
    head_[leaving] = entering;
    pos_[entering] = leaving;
    status_[entering] = BasisStatus::kBasic;
  }

  // Places every structural variable on the bound its cost prefers, which
  // makes the slack basis dual feasible. False when some cost points at an
  // infinite bound or a free variable has a nonzero cost.
  bool dual_feasible_start() {
    const double tol = options_.dual_tolerance;
    for (int j = 0; j < n_; ++j) {
      if (fixed_[j]) continue;
      if (cost_[j] > tol && !std::isfinite(upper_[j])) return false;
      if (cost_[j] < -tol && !std::isfinite(lower_[j])) return false;
    }
    slack_basis();
    for (int j = 0; j < n_; ++j) {
      place_nonbasic(j, cost_[j] > tol ? BasisStatus::kAtUpper : BasisStatus::kAtLower);
    }
    perturb_costs();
    return refactor();
  }

  // Costs of nonbasic structurals move away from zero in the direction their
  // bound already prefers, which breaks dual degeneracy without losing dual
  // feasibility.
  void perturb_costs() {
    original_cost_ = cost_;
    for (int j = 0; j < n_; ++j) {
      if (pos_[j] >= 0 || fixed_[j] || status_[j] == BasisStatus::kFree) continue;
      const double u = std::fmod(0.6180339887498949 * (j + 1), 1.0);
      const double delta = kCostPerturbation * (1.0 + u) * (1.0 + std::abs(cost_[j]));
      cost_[j] += status_[j] == BasisStatus::kAtUpper ? delta : -delta;
    }
  }

  // Min-form reduced costs y'A_j - c_j from a fresh dual solve.
  void compute_dual_reduced_costs(std::vector<double>& d) const {
    Vector y(m_);
    for (int k = 0; k < m_; ++k) y[k] = cost_[head_[k]];
    btran(y);
    const int total = n_ + m_;
    for (int j = 0; j < total; ++j) d[j] = pos_[j] >= 0 ? 0.0 : dot_column(y, j) - cost_[j];
  }

  // Dual simplex from a dual feasible basis with steepest-edge row choice
  // and a bound-flipping ratio test. Returns true once the basis is primal
  // feasible; false hands the current basis to the primal simplex, which
  // also settles infeasibility.
  bool dual_iterate(LpSolution* sol) {
    const double tol = options_.primal_tolerance;
    const double piv_tol = std::max(options_.pivot_tolerance, kDualPivotTolerance);
    const int total = n_ + m_;
    std::vector<double> d(total), row(total);
    std::vector<double> weight(m_, 1.0);  // exact for the slack basis
    compute_dual_reduced_costs(d);
    Vector rho(m_), alpha(m_), tau(m_), shift(m_);
    struct Candidate {
      int j;
      double ratio;
    };
    std::vector<Candidate> candidates;
    std::int64_t degenerate = 0;
    int drift_refactors = 0;
    while (true) {
      if (sol->iterations >= options_.iteration_limit) return false;
      if (static_cast<int>(etas_.size()) >= options_.refactor_interval) {
        if (!refactor()) return false;
        compute_dual_reduced_costs(d);
      }
      int r = -1;
      double best = 0.0;
      for (int k = 0; k < m_; ++k) {
        const double infeasible = infeasibility(head_[k]);
        if (infeasible > 0.0 && infeasible * infeasible > best * weight[k]) {
          best = infeasible * infeasible / weight[k];
          r = k;
        }
      }
      if (r < 0) return true;
      const int p = head_[r];
      const bool to_lower = x_[p] < lower_[p];
      const double target = to_lower ? lower_[p] : upper_[p];

      rho.setZero();
      rho[r] = 1.0;
      btran(rho);
      weight[r] = std::max(rho.squaredNorm(), 1e-12);
      candidates.clear();
      for (int j = 0; j < total; ++j) {
        if (pos_[j] >= 0 || fixed_[j]) continue;
        const double a = dot_column(rho, j);
        row[j] = a;
        const double at = to_lower ? -a : a;
        if (std::abs(at) < piv_tol) continue;
        switch (status_[j]) {
          case BasisStatus::kAtLower:
            if (at > 0.0) candidates.push_back({j, std::max(d[j], 0.0) / at});
            break;
          case BasisStatus::kAtUpper:
            if (at < 0.0) candidates.push_back({j, std::max(-d[j], 0.0) / -at});
            break;
          case BasisStatus::kFree: candidates.push_back({j, std::abs(d[j]) / std::abs(at)}); break;
          case BasisStatus::kBasic: break;
        }
      }
      if (candidates.empty()) return false;
      std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        return a.ratio < b.ratio || (a.ratio == b.ratio && a.j < b.j);
      });
      // Pass breakpoints whose bound flip keeps the dual slope positive.
      double slope = std::abs(x_[p] - target);
      size_t stop = 0;
      while (stop < candidates.size()) {
        const int j = candidates[stop].j;
        const double range = upper_[j] - lower_[j];
        const double drop = range * std::abs(row[j]);
        if (!std::isfinite(range) || slope - drop <= tol) break;
        slope -= drop;
        ++stop;
      }
      if (stop == candidates.size()) return false;
      // Harris pass: the largest pivot among candidates whose ratio stays
      // below the tolerance-relaxed bound of the remaining ones.
      double limit = kInfinity;
      for (size_t k = stop; k < candidates.size(); ++k) {
        const double a = std::abs(row[candidates[k].j]);
        limit = std::min(limit, candidates[k].ratio + kDualRatioSlack / a);
        if (candidates[k].ratio > limit) break;
      }
      int q = candidates[stop].j;
      for (size_t k = stop + 1; k < candidates.size() && candidates[k].ratio <= limit; ++k) {
        if (std::abs(row[candidates[k].j]) > std::abs(row[q])) q = candidates[k].j;
      }
      const double at_q = to_lower ? -row[q] : row[q];
      const double step = d[q] / at_q;
      if (std::abs(step) <= 1e-12) {
        ++degenerate;
      } else {
        degenerate = 0;
      }
      if (degenerate > 10LL * (m_ + 100)) return false;

      // Bound flips move the basic values through one combined solve.
      bool flipped = false;
      shift.setZero();
      for (size_t k = 0; k < stop; ++k) {
        const int j = candidates[k].j;
        if (j == q) continue;
        const bool up = status_[j] == BasisStatus::kAtLower;
        const double change = up ? upper_[j] - lower_[j] : lower_[j] - upper_[j];
        status_[j] = up ? BasisStatus::kAtUpper : BasisStatus::kAtLower;
        x_[j] = up ? upper_[j] : lower_[j];
        for_column(j, [&](int i, double a) { shift[i] += a * change; });
        flipped = true;
      }
      if (flipped) {
        ftran(shift);
        for (int k = 0; k < m_; ++k) x_[head_[k]] -= shift[k];
      }

      for (int j = 0; j < total; ++j) {
        if (pos_[j] < 0 && !fixed_[j]) d[j] -= step * (to_lower ? -row[j] : row[j]);
      }
      d[q] = 0.0;
      d[p] = to_lower ? step : -step;

      alpha.setZero();
      for_column(q, [&](int i, double a) { alpha[i] = a; });
      ftran(alpha);
      const double pivot = alpha[r];
      // Row-wise and column-wise pivots must agree, else the factors drifted.
      if (std::abs(pivot) < piv_tol ||
          std::abs(pivot - row[q]) > 1e-8 * (1.0 + std::abs(row[q]))) {
        if (etas_.empty() || ++drift_refactors > 20) return false;
        if (!refactor()) return false;
        compute_dual_reduced_costs(d);
        continue;
      }
      tau = rho;
      ftran(tau);
      const double theta = (x_[p] - target) / pivot;
      for (int k = 0; k < m_; ++k) x_[head_[k]] -= theta * alpha[k];
      x_[q] += theta;
      const double wr = weight[r];
      for (int k = 0; k < m_; ++k) {
        if (k == r || alpha[k] == 0.0) continue;
        const double ratio = alpha[k] / pivot;
        weight[k] = std::max(weight[k] + ratio * (ratio * wr - 2.0 * tau[k]), 1e-12);
      }
      weight[r] = std::max(wr / (pivot * pivot), 1e-12);

      ++sol->iterations;
      status_[p] = to_lower ? BasisStatus::kAtLower : BasisStatus::kAtUpper;
      x_[p] = target;
      pos_[p] = -1;
      replace_basic(r, q, alpha);
    }
  }

  // A nonbasic free variable with zero reduced cost that some basic variable
  // blocks in one direction; the sign of *direction selects that direction.
  int pick_free_entering(Vector& alpha, double* direction, std::vector<char>* tried) {
    const int total = n_ + m_;
    for (int j = 0; j < total; ++j) {
      if (pos_[j] >= 0 || status_[j] != BasisStatus::kFree || (*tried)[j]) continue;
      (*tried)[j] = 1;
      alpha.setZero();
      for_column(j, [&](int i, double a) { alpha[i] = a; });
      ftran(alpha);
      for (const double dir : {1.0, -1.0}) {
        for (int k = 0; k < m_; ++k) {
          const double rate = -dir * alpha[k];
          if (std::abs(rate) < options_.pivot_tolerance) continue;
          const int b = head_[k];
          if ((rate > 0.0 && std::isfinite(upper_[b])) ||
              (rate < 0.0 && std::isfinite(lower_[b]))) {
            *direction = dir;
            return j;
          }
        }
      }
    }
    return -1;
  }

  void extract(LpSolution* sol) {
    sol->x.assign(x_.begin(), x_.begin() + n_);
    sol->row_activity.assign(x_.begin() + n_, x_.end());
    sol->objective = 0.0;
    for (int j = 0; j < n_; ++j) sol->objective += cost_[j] * x_[j];
    Vector y = Vector::Zero(m_);
    if (factored_ || m_ == 0) {
      for (int k = 0; k < m_; ++k) y[k] = cost_[head_[k]];
      btran(y);
    }
    sol->duals.assign(y.data(), y.data() + m_);
    sol->reduced_costs.resize(n_);
    for (int j = 0; j < n_; ++j) {
      sol->reduced_costs[j] = pos_[j] >= 0 ? 0.0 : cost_[j] - dot_column(y, j);
    }
    sol->basis.vars.assign(status_.begin(), status_.begin() + n_);
    sol->basis.rows.assign(status_.begin() + n_, status_.end());
  }

  LpOptions options_;
  int m_, n_;
  std::vector<double> cost_, lower_, upper_, x_;
  std::vector<int> col_start_, col_row_;
  std::vector<double> col_val_;
  std::vector<BasisStatus> status_;
  std::vector<int> pos_, head_;
  BasisFactor lu_;
  std::vector<Eta> etas_;
  std::vector<char> fixed_, shifted_;
  std::vector<double> original_lower_, original_upper_, original_cost_;
  double cost_scale_ = 0.0;
  bool perturbed_ = false;
  bool factored_ = false;
  int perturbation_rounds_ = 0;
};

}  // namespace

LpSolution solve_lp(const LpProblem& problem, const LpOptions& options) {
  Simplex simplex(problem, options);
  return simplex.run(nullptr);
}

LpProblem dual_problem(const LpProblem& problem) {
  LpProblem dual;
  const int n = problem.num_vars();
  std::vector<std::vector<LpEntry>> columns(n);
  for (int i = 0; i < problem.num_rows(); ++i) {
    const LpRow& row = problem.row(i);
    double lo = 0.0, hi = 0.0;
    switch (row.sense) {
      case LpSense::kLessEqual: hi = kInfinity; break;
      case LpSense::kGreaterEqual: lo = -kInfinity; break;
      case LpSense::kEqual: lo = -kInfinity; hi = kInfinity; break;
    }
    const int y = dual.add_variable(-row.rhs, lo, hi);
    for (const LpEntry& e : row.entries) columns[e.var].push_back({y, e.coef});
  }
  for (int j = 0; j < n; ++j) {
    const double l = problem.lower(j), u = problem.upper(j);
    if (std::isfinite(l) && l == u) {
      columns[j].push_back({dual.add_variable(-u, -kInfinity, kInfinity), 1.0});
    } else {
      if (std::isfinite(u)) columns[j].push_back({dual.add_variable(-u, 0.0, kInfinity), 1.0});
      if (std::isfinite(l)) columns[j].push_back({dual.add_variable(l, 0.0, kInfinity), -1.0});
    }
    dual.add_row(std::move(columns[j]), LpSense::kEqual, problem.objective(j));
  }
  return dual;
}

LpSolution warm_solve(const LpProblem& problem, const LpBasis& hint,
                      const LpOptions& options) {
  Simplex simplex(problem, options);
  return simplex.run(&hint);
}

EmbeddedLp phase1_embed(const LpProblem& problem) {
  EmbeddedLp out;
  out.problem = problem;
  out.num_original_vars = problem.num_vars();
  double largest = 1.0;
  for (int j = 0; j < problem.num_vars(); ++j) {
    largest = std::max(largest, std::abs(problem.objective(j)));
  }
  out.penalty = 1e6 * largest;
  // Rows are rebuilt so artificials can be appended to them.
  LpProblem rebuilt;
  for (int j = 0; j < problem.num_vars(); ++j) {
    rebuilt.add_variable(problem.objective(j), problem.lower(j), problem.upper(j));
  }
  std::vector<LpRow> rows = problem.rows();
  for (LpRow& row : rows) {
    if (row.sense != LpSense::kGreaterEqual) {
      const int a = rebuilt.add_variable(-out.penalty, 0.0, kInfinity);
      out.artificials.push_back(a);
      row.entries.push_back({a, -1.0});
    }
    if (row.sense != LpSense::kLessEqual) {
      const int a = rebuilt.add_variable(-out.penalty, 0.0, kInfinity);
      out.artificials.push_back(a);
      row.entries.push_back({a, 1.0});
    }
  }
  for (LpRow& row : rows) rebuilt.add_row(std::move(row.entries), row.sense, row.rhs);
  out.problem = std::move(rebuilt);
  return out;
}

EmbeddedResult solve_embedded(const EmbeddedLp& embedded, const LpBasis& hint,
                              const LpOptions& options) {
  EmbeddedResult result;
  result.solution = hint.empty() ? solve_lp(embedded.problem, options)
                                 : warm_solve(embedded.problem, hint, options);
  LpSolution& sol = result.solution;
  if (sol.status != LpStatus::kOptimal && sol.status != LpStatus::kUnbounded) return result;
  double largest = 0.0;
  for (int a : embedded.artificials) {
    result.residual += sol.x[a];
    largest = std::max(largest, sol.x[a]);
  }
  result.feasible = largest < 1e-7;
  if (sol.status == LpStatus::kOptimal) {
    for (int a : embedded.artificials) sol.objective += embedded.penalty * sol.x[a];
    if (!result.feasible) sol.status = LpStatus::kInfeasible;
  }
  sol.x.resize(embedded.num_original_vars);
  sol.reduced_costs.resize(embedded.num_original_vars);
  return result;
}

}  // namespace schedbound
