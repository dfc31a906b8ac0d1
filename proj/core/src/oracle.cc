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

#include "schedbound/oracle.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

#include "schedbound/colgen.h"
#include "schedbound/lp.h"
#include "schedbound/partition.h"

namespace schedbound {

const char* to_string(ExactStatus status) {
  switch (status) {
    case ExactStatus::kOptimal: return "optimal";
    case ExactStatus::kInfeasible: return "infeasible";
    case ExactStatus::kUnbounded: return "unbounded";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Exact simplex.

int ExactLp::add_variable(Rational objective, std::optional<Rational> lower,
                          std::optional<Rational> upper) {
  objective_.push_back(std::move(objective));
  lower_.push_back(std::move(lower));
  upper_.push_back(std::move(upper));
  return num_vars() - 1;
}

void ExactLp::add_row(std::vector<Entry> entries, Sense sense, Rational rhs) {
  for (const Entry& e : entries) {
    if (e.var < 0 || e.var >= num_vars()) throw std::out_of_range("exact LP variable index");
  }
  rows_.push_back({std::move(entries), sense, std::move(rhs)});
}

namespace {

// max c'y s.t. A y <= b, y >= 0, as a dense tableau with slack basis.
class Tableau {
 public:
  Tableau(std::vector<std::vector<Rational>> a, std::vector<Rational> b, std::vector<Rational> c)
      : m_(static_cast<int>(a.size())), n_(static_cast<int>(c.size())), cost_(std::move(c)) {
    // Columns: structural 0..n-1, slacks n..n+m-1, auxiliary n+m.
    cols_ = n_ + m_ + 1;
    aux_ = n_ + m_;
    tab_.assign(m_, std::vector<Rational>(cols_));
    rhs_ = std::move(b);
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) tab_[i][j] = a[i][j];
      tab_[i][n_ + i] = 1;
      tab_[i][aux_] = -1;
      basis_[i] = n_ + i;
    }
  }

  ExactStatus solve(std::vector<Rational>* y, Rational* value) {
    int worst = -1;
    for (int i = 0; i < m_; ++i) {
      if (rhs_[i] < 0 && (worst < 0 || rhs_[i] < rhs_[worst])) worst = i;
    }
    if (worst >= 0) {
      // Phase 1: max -x_aux.
      std::vector<Rational> phase1(cols_);
      phase1[aux_] = -1;
      pivot(worst, aux_);
      set_objective(phase1);
      run(true);
      if (objective_value_ < 0) return ExactStatus::kInfeasible;
      for (int i = 0; i < m_; ++i) {
        if (basis_[i] != aux_) continue;
        for (int j = 0; j < aux_; ++j) {
          if (tab_[i][j] != 0) {
            pivot(i, j);
            break;
          }
        }
      }
    }
    for (int i = 0; i < m_; ++i) tab_[i][aux_] = 0;  // aux never re-enters
    std::vector<Rational> phase2(cols_);
    std::copy(cost_.begin(), cost_.end(), phase2.begin());
    set_objective(phase2);
    if (!run(false)) return ExactStatus::kUnbounded;
    y->assign(n_, Rational(0));
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) (*y)[basis_[i]] = rhs_[i];
    }
    *value = objective_value_;
    return ExactStatus::kOptimal;
  }

 private:
  void set_objective(const std::vector<Rational>& c) {
    objective_ = c;
    objective_value_ = 0;
    for (int i = 0; i < m_; ++i) {
      const Rational& cb = c[basis_[i]];
      if (cb == 0) continue;
      for (int j = 0; j < cols_; ++j) objective_[j] -= cb * tab_[i][j];
      objective_value_ += cb * rhs_[i];
    }
  }

  // Bland's rule. False when unbounded.
  bool run(bool allow_aux) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < cols_; ++j) {
        if (j == aux_ && !allow_aux) continue;
        if (objective_[j] > 0) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      Rational best;
      for (int i = 0; i < m_; ++i) {
        if (tab_[i][enter] <= 0) continue;
        Rational ratio = rhs_[i] / tab_[i][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = std::move(ratio);
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  void pivot(int row, int col) {
    const Rational p = tab_[row][col];
    for (int j = 0; j < cols_; ++j) tab_[row][j] /= p;
    rhs_[row] /= p;
    for (int i = 0; i < m_; ++i) {
      if (i == row || tab_[i][col] == 0) continue;
      const Rational f = tab_[i][col];
      for (int j = 0; j < cols_; ++j) {
        if (tab_[row][j] != 0) tab_[i][j] -= f * tab_[row][j];
      }
      rhs_[i] -= f * rhs_[row];
    }
    if (!objective_.empty() && objective_[col] != 0) {
      const Rational f = objective_[col];
      for (int j = 0; j < cols_; ++j) {
        if (tab_[row][j] != 0) objective_[j] -= f * tab_[row][j];
      }
      objective_value_ += f * rhs_[row];
    }
    basis_[row] = col;
  }

  int m_, n_, cols_ = 0, aux_ = 0;
  std::vector<Rational> cost_;
  std::vector<std::vector<Rational>> tab_;
  std::vector<Rational> rhs_;
  std::vector<int> basis_;
  std::vector<Rational> objective_;
  Rational objective_value_;
};

}  // namespace

ExactLp::Result ExactLp::solve() const {
  // Substitute x_j = offset_j + sum(sign * y) with y >= 0.
  struct Map {
    Rational offset;
    std::vector<std::pair<int, int>> parts;  // (y index, sign)
  };
  std::vector<Map> map(num_vars());
  int ny = 0;
  std::vector<std::pair<int, Rational>> y_bounds;  // y_k <= bound
  for (int j = 0; j < num_vars(); ++j) {
    if (lower_[j]) {
      map[j].offset = *lower_[j];
      map[j].parts.push_back({ny, 1});
      if (upper_[j]) y_bounds.push_back({ny, *upper_[j] - *lower_[j]});
      ++ny;
    } else if (upper_[j]) {
      map[j].offset = *upper_[j];
      map[j].parts.push_back({ny++, -1});
    } else {
      map[j].parts.push_back({ny++, 1});
      map[j].parts.push_back({ny++, -1});
    }
  }
  Result result;
  for (int j = 0; j < num_vars(); ++j) {
    if (lower_[j] && upper_[j] && *upper_[j] < *lower_[j]) return result;  // infeasible
  }

  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  auto push = [&](std::vector<Rational> row, Rational rhs) {
    a.push_back(std::move(row));
    b.push_back(std::move(rhs));
  };
  for (const Row& row : rows_) {
    std::vector<Rational> coef(ny);
    Rational rhs = row.rhs;
    for (const Entry& e : row.entries) {
      rhs -= e.coef * map[e.var].offset;
      for (const auto& [k, sign] : map[e.var].parts) coef[k] += sign * e.coef;
    }
    if (row.sense != Sense::kGreaterEqual) push(coef, rhs);
    if (row.sense != Sense::kLessEqual) {
      for (auto& v : coef) v = -v;
      push(std::move(coef), -rhs);
    }
  }
  for (const auto& [k, bound] : y_bounds) {
    std::vector<Rational> coef(ny);
    coef[k] = 1;
    push(std::move(coef), bound);
  }
  std::vector<Rational> cost(ny);
  Rational constant;
  for (int j = 0; j < num_vars(); ++j) {
    constant += objective_[j] * map[j].offset;
    for (const auto& [k, sign] : map[j].parts) cost[k] += sign * objective_[j];
  }

  Tableau tableau(std::move(a), std::move(b), std::move(cost));
  std::vector<Rational> y;
  Rational value;
  result.status = tableau.solve(&y, &value);
  if (!result.optimal()) return result;
  result.objective = value + constant;
  result.x.resize(num_vars());
  for (int j = 0; j < num_vars(); ++j) {
    result.x[j] = map[j].offset;
    for (const auto& [k, sign] : map[j].parts) result.x[j] += sign * y[k];
  }
  return result;
}

// ---------------------------------------------------------------------------

namespace {

Rational exact(double v) { return Rational(v); }

Rational dot(const std::vector<SparseEntry>& entries, std::span<const char> z) {
  Rational s;
  for (const SparseEntry& e : entries) {
    if (z[e.index]) s += exact(e.value);
  }
  return s;
}

ExactLp::Sense exact_sense(RowSense sense) {
  return sense == RowSense::kEqual ? ExactLp::Sense::kEqual : ExactLp::Sense::kLessEqual;
}

void check_size(int n) {
  if (n > kOracleMaxVars) {
    throw OracleSizeError("oracle enumeration limited to " + std::to_string(kOracleMaxVars) +
                          " variables, got " + std::to_string(n));
  }
}

ExactBound from_result(const ExactLp::Result& r) { return {r.status, r.objective}; }

// u variables occupy ExactLp columns [first, first + num_u).
void add_u_variables(const GpcpInstance& g, ExactLp* lp) {
  for (int j = 0; j < g.num_u; ++j) lp->add_variable(exact(g.d[j]), std::nullopt, std::nullopt);
}

void append_u(const ConstraintRow& row, int first, std::vector<ExactLp::Entry>* entries) {
  for (const SparseEntry& e : row.u) entries->push_back({first + e.index, exact(e.value)});
}

}  // namespace

OracleResult enumerate_closures(const ClosureGraph& graph, std::span<const double> weights) {
  check_size(graph.num_nodes);
  if (static_cast<int>(weights.size()) != graph.num_vars) {
    throw std::invalid_argument("closure weights have wrong size");
  }
  OracleResult result;
  if (graph.infeasible) return result;
  Rational base;
  for (int v = 0; v < graph.num_vars; ++v) {
    if (graph.forced[v] == 1) base += exact(weights[v]);
  }
  std::vector<Rational> node_weight(graph.num_nodes);
  for (int k = 0; k < graph.num_nodes; ++k) {
    for (int v : graph.members[k]) node_weight[k] += exact(weights[v]);
  }
  std::uint32_t best_mask = 0;
  for (std::uint32_t mask = 0; mask < (1u << graph.num_nodes); ++mask) {
    bool closed = true;
    for (const auto& [i, j] : graph.arcs) {
      if (((mask >> i) & 1u) && !((mask >> j) & 1u)) {
        closed = false;
        break;
      }
    }
    if (!closed) continue;
    ++result.enumerated;
    Rational value = base;
    for (int k = 0; k < graph.num_nodes; ++k) {
      if ((mask >> k) & 1u) value += node_weight[k];
    }
    if (!result.feasible || value > result.value) {
      result.feasible = true;
      result.value = value;
      best_mask = mask;
    }
  }
  result.selection.assign(graph.num_vars, 0);
  for (int v = 0; v < graph.num_vars; ++v) {
    if (graph.forced[v] == 1) result.selection[v] = 1;
    if (graph.node_of[v] >= 0) result.selection[v] = (best_mask >> graph.node_of[v]) & 1u;
  }
  return result;
}

ExactBound closure_lp_value(const ClosureGraph& graph, std::span<const double> weights) {
  if (graph.infeasible) return {};
  ExactLp lp;
  Rational base;
  for (int v = 0; v < graph.num_vars; ++v) {
    if (graph.forced[v] == 1) base += exact(weights[v]);
  }
  for (int k = 0; k < graph.num_nodes; ++k) {
    Rational w;
    for (int v : graph.members[k]) w += exact(weights[v]);
    lp.add_variable(w, Rational(0), Rational(1));
  }
  for (const auto& [i, j] : graph.arcs) {
    lp.add_row({{i, Rational(1)}, {j, Rational(-1)}}, ExactLp::Sense::kLessEqual, Rational(0));
  }
  ExactBound bound = from_result(lp.solve());
  bound.value += base;
  return bound;
}

std::vector<std::vector<char>> enumerate_easy_points(const GpcpInstance& g) {
  check_size(g.n);
  std::vector<std::vector<char>> points;
  std::vector<char> z(g.n);
  for (std::uint32_t mask = 0; mask < (1u << g.n); ++mask) {
    for (int i = 0; i < g.n; ++i) z[i] = (mask >> i) & 1u;
    bool ok = true;
    for (const auto& [i, j] : g.arcs) ok = ok && z[i] <= z[j];
    for (const Fixing& f : g.bound_fixings) ok = ok && z[f.index] == f.value;
    for (size_t r = 0; ok && r < g.a_rows.size(); ++r) {
      const ConstraintRow& row = g.a_rows[r];
      const Rational lhs = dot(row.z, z);
      ok = row.sense == RowSense::kEqual ? lhs == exact(row.rhs) : lhs <= exact(row.rhs);
    }
    if (ok) points.push_back(z);
  }
  return points;
}

OracleResult enumerate_zip(const GpcpInstance& g) {
  OracleResult result;
  for (const std::vector<char>& z : enumerate_easy_points(g)) {
    ++result.enumerated;
    Rational value;
    for (int i = 0; i < g.n; ++i) {
      if (z[i]) value += exact(g.c[i]);
    }
    std::vector<Rational> u;
    if (g.num_u == 0) {
      bool ok = true;
      for (const ConstraintRow& row : g.h_rows) ok = ok && dot(row.z, z) <= exact(row.rhs);
      if (!ok) continue;
    } else {
      ExactLp lp;
      add_u_variables(g, &lp);
      for (const ConstraintRow& row : g.h_rows) {
        std::vector<ExactLp::Entry> entries;
        append_u(row, 0, &entries);
        lp.add_row(std::move(entries), ExactLp::Sense::kLessEqual, exact(row.rhs) - dot(row.z, z));
      }
      const ExactLp::Result r = lp.solve();
      if (r.status == ExactStatus::kInfeasible) continue;
      if (r.status == ExactStatus::kUnbounded) {
        throw std::domain_error("integer problem is unbounded in u");
      }
      value += r.objective;
      u = r.x;
    }
    if (!result.feasible || value > result.value) {
      result.feasible = true;
      result.value = value;
      result.selection = z;
      result.u = std::move(u);
    }
  }
  return result;
}

ExactBound exact_lp_bound(const GpcpInstance& g) {
  ExactLp lp;
  for (int i = 0; i < g.n; ++i) lp.add_variable(exact(g.c[i]), Rational(0), Rational(1));
  add_u_variables(g, &lp);
  for (const Fixing& f : g.bound_fixings) {
    lp.add_row({{f.index, Rational(1)}}, ExactLp::Sense::kEqual, Rational(f.value));
  }
  for (const auto& [i, j] : g.arcs) {
    lp.add_row({{i, Rational(1)}, {j, Rational(-1)}}, ExactLp::Sense::kLessEqual, Rational(0));
  }
  auto add = [&](const ConstraintRow& row) {
    std::vector<ExactLp::Entry> entries;
    for (const SparseEntry& e : row.z) entries.push_back({e.index, exact(e.value)});
    append_u(row, g.n, &entries);
    lp.add_row(std::move(entries), exact_sense(row.sense), exact(row.rhs));
  };
  for (const ConstraintRow& row : g.a_rows) add(row);
  for (const ConstraintRow& row : g.h_rows) add(row);
  return from_result(lp.solve());
}

namespace {

double float_value(const LpSolution& sol) {
  switch (sol.status) {
    case LpStatus::kOptimal: return sol.objective;
    case LpStatus::kInfeasible: return -kInfinity;
    case LpStatus::kUnbounded: return kInfinity;
    default: throw std::runtime_error(std::string("direct LP ") + to_string(sol.status));
  }
}

}  // namespace

double direct_lp_bound(const GpcpInstance& g) {
  LpProblem lp;
  for (int i = 0; i < g.n; ++i) lp.add_variable(g.c[i], 0.0, 1.0);
  for (int j = 0; j < g.num_u; ++j) lp.add_variable(g.d[j], -kInfinity, kInfinity);
  for (const Fixing& f : g.bound_fixings) lp.set_bounds(f.index, f.value, f.value);
  for (const auto& [i, j] : g.arcs) lp.add_row({{i, 1.0}, {j, -1.0}}, LpSense::kLessEqual, 0.0);
  auto add = [&](const ConstraintRow& row) {
    std::vector<LpEntry> entries;
    for (const SparseEntry& e : row.z) entries.push_back({e.index, e.value});
    for (const SparseEntry& e : row.u) entries.push_back({g.n + e.index, e.value});
    lp.add_row(std::move(entries),
               row.sense == RowSense::kEqual ? LpSense::kEqual : LpSense::kLessEqual, row.rhs);
  };
  for (const ConstraintRow& row : g.a_rows) add(row);
  for (const ConstraintRow& row : g.h_rows) add(row);
  return float_value(solve_lp(lp));
}

double direct_lp_bound(const GpspInstance& inst) {
  if (auto diagnostics = validate_instance(inst); !diagnostics.empty()) {
    throw std::invalid_argument(format_diagnostics(diagnostics));
  }
  const int horizon = inst.horizon();
  LpProblem lp;
  // x[c][t-1]
  std::vector<std::vector<int>> x(inst.num_clusters());
  for (int c = 0; c < inst.num_clusters(); ++c) {
    for (int t = 1; t <= horizon; ++t) x[c].push_back(lp.add_variable(0.0, 0.0, 1.0));
  }
  // y[a][(m-1)*T + t-1]
  std::vector<std::vector<int>> y(inst.num_activities());
  for (int a = 0; a < inst.num_activities(); ++a) {
    const Activity& act = inst.activity(a);
    for (int m = 1; m <= act.num_modes(); ++m) {
      for (int t = 1; t <= horizon; ++t) {
        bool allowed = t >= act.release;
        if (act.has_due_date()) allowed = allowed && t + inst.duration(a, m) - 1 <= act.due;
        y[a].push_back(lp.add_variable(inst.profit(a, m, t), 0.0, allowed ? 1.0 : 0.0));
      }
    }
  }
  auto yv = [&](int a, int m, int t) { return y[a][static_cast<size_t>(m - 1) * horizon + t - 1]; };

  for (int c = 0; c < inst.num_clusters(); ++c) {
    std::vector<LpEntry> once;
    for (int t = 1; t <= horizon; ++t) once.push_back({x[c][t - 1], 1.0});
    lp.add_row(std::move(once), LpSense::kLessEqual, 1.0);
  }
  for (int a = 0; a < inst.num_activities(); ++a) {
    const Activity& act = inst.activity(a);
    for (int t = 1; t <= horizon; ++t) {
      std::vector<LpEntry> link = {{x[act.cluster][t - 1], -1.0}};
      for (int m = 1; m <= act.num_modes(); ++m) link.push_back({yv(a, m, t), 1.0});
      lp.add_row(std::move(link), LpSense::kEqual, 0.0);
    }
    if (act.has_due_date()) {
      std::vector<LpEntry> all;
      for (int m = 1; m <= act.num_modes(); ++m) {
        for (int t = 1; t <= horizon; ++t) all.push_back({yv(a, m, t), 1.0});
      }
      lp.add_row(std::move(all), LpSense::kEqual, 1.0);
    }
  }
  for (int c2 = 0; c2 < inst.num_clusters(); ++c2) {
    for (const Precedence& p : inst.predecessors(c2)) {
      for (int t = 1; t <= horizon; ++t) {
        std::vector<LpEntry> row;
        for (int s = 1; s <= t; ++s) row.push_back({x[c2][s - 1], 1.0});
        for (int s = 1; s <= t - p.lag; ++s) row.push_back({x[p.predecessor][s - 1], -1.0});
        lp.add_row(std::move(row), LpSense::kLessEqual, 0.0);
      }
    }
  }
  for (int r = 0; r < inst.num_resources(); ++r) {
    for (int t = 1; t <= horizon; ++t) {
      std::vector<LpEntry> row;
      for (int a = 0; a < inst.num_activities(); ++a) {
        for (int m = 1; m <= inst.activity(a).num_modes(); ++m) {
          const double q = inst.usage(r, a, m);
          if (q == 0.0) continue;
          for (int s = std::max(1, t - inst.duration(a, m) + 1); s <= t; ++s) {
            row.push_back({yv(a, m, s), q});
          }
        }
      }
      lp.add_row(std::move(row), LpSense::kLessEqual, inst.capacity(r, t));
    }
  }
  return float_value(solve_lp(lp));
}

ExactBound zlin_bound(const GpcpInstance& g, bool include_bounds) {
  const std::vector<std::vector<char>> points = enumerate_easy_points(g);
  if (points.empty()) return {};
  // Incremental elimination keeps the reduced rows with their pivot columns.
  std::vector<std::vector<char>> basis;
  std::vector<std::vector<Rational>> reduced;
  std::vector<int> pivots;
  for (const auto& p : points) {
    std::vector<Rational> v(p.begin(), p.end());
    for (size_t k = 0; k < reduced.size(); ++k) {
      if (v[pivots[k]] == 0) continue;
      const Rational f = v[pivots[k]] / reduced[k][pivots[k]];
      for (int i = 0; i < g.n; ++i) v[i] -= f * reduced[k][i];
    }
    const auto nz = std::find_if(v.begin(), v.end(), [](const Rational& x) { return x != 0; });
    if (nz == v.end()) continue;
    pivots.push_back(static_cast<int>(nz - v.begin()));
    reduced.push_back(std::move(v));
    basis.push_back(p);
  }

  ExactLp lp;
  const int k = static_cast<int>(basis.size());
  for (const auto& v : basis) {
    Rational obj;
    for (int i = 0; i < g.n; ++i) {
      if (v[i]) obj += exact(g.c[i]);
    }
    lp.add_variable(obj, std::nullopt, std::nullopt);
  }
  add_u_variables(g, &lp);
  auto add = [&](const ConstraintRow& row, bool with_u, ExactLp::Sense sense) {
    std::vector<ExactLp::Entry> entries;
    for (int q = 0; q < k; ++q) {
      Rational a = dot(row.z, basis[q]);
      if (a != 0) entries.push_back({q, std::move(a)});
    }
    if (with_u) append_u(row, k, &entries);
    lp.add_row(std::move(entries), sense, exact(row.rhs));
  };
  for (const ConstraintRow& row : easy_block_rows(g, include_bounds)) {
    add(row, false, exact_sense(row.sense));
  }
  for (const ConstraintRow& row : g.h_rows) add(row, true, ExactLp::Sense::kLessEqual);
  return from_result(lp.solve());
}

ExactBound zdw_bound(const GpcpInstance& g) {
  const std::vector<std::vector<char>> points = enumerate_easy_points(g);
  if (points.empty()) return {};
  ExactLp lp;
  const int k = static_cast<int>(points.size());
  for (const auto& v : points) {
    Rational obj;
    for (int i = 0; i < g.n; ++i) {
      if (v[i]) obj += exact(g.c[i]);
    }
    lp.add_variable(obj);
  }
  add_u_variables(g, &lp);
  std::vector<ExactLp::Entry> convexity;
  for (int q = 0; q < k; ++q) convexity.push_back({q, Rational(1)});
  lp.add_row(std::move(convexity), ExactLp::Sense::kEqual, Rational(1));
  for (const ConstraintRow& row : g.h_rows) {
    std::vector<ExactLp::Entry> entries;
    for (int q = 0; q < k; ++q) {
      Rational a = dot(row.z, points[q]);
      if (a != 0) entries.push_back({q, std::move(a)});
    }
    append_u(row, k, &entries);
    lp.add_row(std::move(entries), ExactLp::Sense::kLessEqual, exact(row.rhs));
  }
  return from_result(lp.solve());
}

bool BoundChain::ordered() const {
  return ip.feasible && dw.optimal() && lin.optimal() && lp.optimal() && ip.value <= dw.value &&
         dw.value <= lin.value && lin.value <= lp.value;
}

BoundChain bound_chain(const GpcpInstance& g) {
  return {enumerate_zip(g), zdw_bound(g), zlin_bound(g), exact_lp_bound(g)};
}

IdentityCheckResult resource_row_identity_check(const GpspInstance& inst, int trials,
                                                std::uint64_t seed, const ResourceRowFn& row) {
  const VarIndex index(inst);
  const int horizon = inst.horizon();
  const ResourceRowFn provider =
      row ? row : [&inst](int r, int t, const VarIndex& idx) {
        return tilde_resource_row(inst, r, t, idx);
      };
  std::vector<std::vector<ConstraintRow>> rows(inst.num_resources());
  for (int r = 0; r < inst.num_resources(); ++r) {
    for (int t = 1; t <= horizon; ++t) rows[r].push_back(provider(r, t, index));
  }
  const auto members = inst.cluster_members();
  std::mt19937_64 rng(seed);
  IdentityCheckResult result;
  for (int trial = 0; trial < trials; ++trial) {
    Schedule schedule;
    schedule.activities.resize(inst.num_activities());
    for (int c = 0; c < inst.num_clusters(); ++c) {
      const bool executed = std::uniform_int_distribution<int>(0, 3)(rng) != 0;
      const int start = std::uniform_int_distribution<int>(1, horizon)(rng);
      for (int a : members[c]) {
        ScheduledActivity& s = schedule.activities[a];
        s.executed = executed;
        s.start = start;
        s.mode = std::uniform_int_distribution<int>(1, inst.activity(a).num_modes())(rng);
      }
    }
    const XySolution xy = schedule_to_xy(inst, schedule);
    const std::vector<double> zd = schedule_to_z(inst, index, schedule);
    std::vector<char> z(zd.size());
    for (size_t i = 0; i < zd.size(); ++i) z[i] = zd[i] != 0.0;
    ++result.trials;
    for (int r = 0; r < inst.num_resources(); ++r) {
      for (int t = 1; t <= horizon; ++t) {
        Rational load;
        for (int a = 0; a < inst.num_activities(); ++a) {
          for (int m = 1; m <= inst.activity(a).num_modes(); ++m) {
            const Rational q = exact(inst.usage(r, a, m));
            for (int s = std::max(1, t - inst.duration(a, m) + 1); s <= t; ++s) {
              if (xy.y[a][static_cast<size_t>(m - 1) * horizon + s - 1] != 0.0) load += q;
            }
          }
        }
        const Rational cumulative = dot(rows[r][t - 1].z, z);
        if (load != cumulative) {
          result.passed = false;
          result.trial = trial;
          result.resource = r;
          result.period = t;
          result.message = "resource " + std::to_string(r + 1) + " period " + std::to_string(t) +
                           " trial " + std::to_string(trial) + ": load " + load.get_str() +
                           " != row " + cumulative.get_str();
          return result;
        }
      }
    }
  }
  return result;
}

FractionalCheck fractional_values_check(std::span<const double> z, int r2, int m,
                                        double tolerance) {
  FractionalCheck check;
  check.count = count_fractional_values(z, tolerance);
  check.limit = r2 - m;
  check.passed = check.count <= check.limit;
  return check;
}

}  // namespace schedbound
