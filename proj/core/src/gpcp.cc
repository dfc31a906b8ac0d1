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

#include "schedbound/gpcp.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "schedbound/io.h"

namespace schedbound {

namespace {

// Sorts by index, merges duplicates and drops exact zeros.
std::vector<SparseEntry> canonical(std::vector<SparseEntry> entries) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
  std::vector<SparseEntry> out;
  for (const SparseEntry& e : entries) {
    if (!out.empty() && out.back().index == e.index) {
      out.back().value += e.value;
    } else {
      out.push_back(e);
    }
  }
  std::erase_if(out, [](const SparseEntry& e) { return e.value == 0.0; });
  return out;
}

}  // namespace

std::vector<Diagnostic> validate_gpcp(const GpcpInstance& g) {
  std::vector<Diagnostic> out;
  if (g.n < 0) out.push_back({"n", "negative variable count"});
  if (static_cast<int>(g.c.size()) != g.n) out.push_back({"c", "length differs from n"});
  if (static_cast<int>(g.d.size()) != g.num_u) out.push_back({"d", "length differs from u"});
  for (double v : g.c) {
    if (!std::isfinite(v)) out.push_back({"c", "non-finite objective"});
  }
  for (size_t k = 0; k < g.arcs.size(); ++k) {
    const auto [i, j] = g.arcs[k];
    if (i < 0 || i >= g.n || j < 0 || j >= g.n) {
      out.push_back({"arc " + std::to_string(k + 1), "endpoint out of range"});
    }
  }
  for (const Fixing& f : g.bound_fixings) {
    if (f.index < 0 || f.index >= g.n) out.push_back({"fix", "index out of range"});
    if (f.value != 0 && f.value != 1) out.push_back({"fix", "value must be 0 or 1"});
  }
  auto check_rows = [&](const std::vector<ConstraintRow>& rows, const char* block) {
    for (size_t k = 0; k < rows.size(); ++k) {
      const std::string where = std::string(block) + " row " + std::to_string(k + 1);
      for (const SparseEntry& e : rows[k].z) {
        if (e.index < 0 || e.index >= g.n) out.push_back({where, "z index out of range"});
        if (!std::isfinite(e.value)) out.push_back({where, "non-finite coefficient"});
      }
      for (const SparseEntry& e : rows[k].u) {
        if (e.index < 0 || e.index >= g.num_u) out.push_back({where, "u index out of range"});
        if (!std::isfinite(e.value)) out.push_back({where, "non-finite coefficient"});
      }
      if (!std::isfinite(rows[k].rhs)) out.push_back({where, "non-finite rhs"});
    }
  };
  check_rows(g.a_rows, "A");
  check_rows(g.h_rows, "H");
  for (const ConstraintRow& row : g.a_rows) {
    if (!row.u.empty()) out.push_back({"A", "general rows may not involve u"});
  }
  for (const ConstraintRow& row : g.h_rows) {
    if (row.sense != RowSense::kLessEqual) out.push_back({"H", "side rows must be <="});
  }
  return out;
}

VarIndex::VarIndex(const GpspInstance& inst) : horizon_(inst.horizon()) {
  for (int a = 0; a < inst.num_activities(); ++a) {
    offsets_.push_back(size_);
    modes_.push_back(inst.activity(a).num_modes());
    size_ += modes_.back() * horizon_;
  }
}

VarIndex::Key VarIndex::decode(int index) const {
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), index);
  const int a = static_cast<int>(it - offsets_.begin()) - 1;
  const int local = index - offsets_[a];
  return {a, local % modes_[a] + 1, local / modes_[a] + 1};
}

std::vector<double> tilde_profit(const GpspInstance& inst, const VarIndex& idx) {
  std::vector<double> c(idx.size(), 0.0);
  const int horizon = inst.horizon();
  for (int a = 0; a < inst.num_activities(); ++a) {
    const int modes = inst.activity(a).num_modes();
    for (int t = 1; t <= horizon; ++t) {
      for (int m = 1; m <= modes; ++m) {
        double value = inst.profit(a, m, t);
        if (m < modes) {
          value -= inst.profit(a, m + 1, t);
        } else if (t < horizon) {
          value -= inst.profit(a, 1, t + 1);
        }
        c[idx(a, m, t)] = value;
      }
    }
  }
  return c;
}

ConstraintRow tilde_resource_row(const GpspInstance& inst, int r, int t,
                                 const VarIndex& idx) {
  ConstraintRow row;
  row.rhs = inst.capacity(r, t);
  const int horizon = inst.horizon();
  auto add_window = [&](int a, int m, int lo, int hi, double coef) {
    if (coef == 0.0) return;
    for (int s = std::max(lo, 1); s <= std::min(hi, horizon); ++s) {
      row.z.push_back({idx(a, m, s), coef});
    }
  };
  for (int a = 0; a < inst.num_activities(); ++a) {
    const int modes = inst.activity(a).num_modes();
    for (int m = 1; m <= modes; ++m) {
      const int d = inst.duration(a, m);
      add_window(a, m, t - d + 1, t, inst.usage(r, a, m));
      if (m < modes) {
        const int d_next = inst.duration(a, m + 1);
        add_window(a, m, t - d_next + 1, t, -inst.usage(r, a, m + 1));
      } else {
        const int d_first = inst.duration(a, 1);
        add_window(a, m, t - d_first, t - 1, -inst.usage(r, a, 1));
      }
    }
  }
  row.z = canonical(std::move(row.z));
  return row;
}

GpcpModel build_gpcp(const GpspInstance& inst, const GpcpBuildOptions& options) {
  if (auto diagnostics = validate_instance(inst); !diagnostics.empty()) {
    throw InvalidInstanceError(std::move(diagnostics));
  }
  GpcpModel model;
  model.index = VarIndex(inst);
  const VarIndex& idx = model.index;
  GpcpInstance& g = model.problem;
  const int horizon = inst.horizon();
  g.n = idx.size();
  g.c = tilde_profit(inst, idx);

  std::set<std::pair<int, int>> fixed;  // (index, value)
  auto equal = [&](int i, int j) {
    g.arcs.emplace_back(i, j);
    g.arcs.emplace_back(j, i);
  };

  for (int a = 0; a < inst.num_activities(); ++a) {
    const int modes = inst.activity(a).num_modes();
    for (int t = 1; t <= horizon; ++t) {
      for (int m = 1; m < modes; ++m) g.arcs.emplace_back(idx(a, m, t), idx(a, m + 1, t));
      if (t < horizon) g.arcs.emplace_back(idx(a, modes, t), idx(a, 1, t + 1));
    }
  }

  const auto members = inst.cluster_members();
  auto last_mode = [&](int a, int t) { return idx(a, inst.activity(a).num_modes(), t); };
  for (int c = 0; c < inst.num_clusters(); ++c) {
    for (size_t k = 1; k < members[c].size(); ++k) {
      for (int t = 1; t <= horizon; ++t) {
        equal(last_mode(members[c][k - 1], t), last_mode(members[c][k], t));
      }
    }
  }
  for (int c2 = 0; c2 < inst.num_clusters(); ++c2) {
    const int rep2 = members[c2].front();
    for (const Precedence& p : inst.predecessors(c2)) {
      const int rep1 = members[p.predecessor].front();
      for (int t = 1; t <= horizon; ++t) {
        if (t - p.lag >= 1) {
          g.arcs.emplace_back(last_mode(rep2, t), last_mode(rep1, t - p.lag));
        } else {
          fixed.insert({last_mode(rep2, t), 0});
        }
      }
    }
  }

  for (int a = 0; a < inst.num_activities(); ++a) {
    const Activity& act = inst.activity(a);
    const int modes = act.num_modes();
    for (int t = 1; t < std::min(act.release, horizon + 1); ++t) {
      for (int m = 1; m <= modes; ++m) fixed.insert({idx(a, m, t), 0});
    }
    if (!act.has_due_date()) continue;
    // Latest admissible start over all modes, and per mode.
    int latest = std::numeric_limits<int>::min();
    for (int m = 1; m <= modes; ++m) {
      latest = std::max(latest, act.due - inst.duration(a, m) + 1);
    }
    latest = std::min(latest, horizon);
    if (latest >= 1) fixed.insert({idx(a, modes, latest), 1});
    for (int t = std::max(latest + 1, 1); t <= horizon; ++t) {
      for (int m = 1; m <= modes; ++m) fixed.insert({idx(a, m, t), 1});
    }
    for (int m = 1; m <= modes; ++m) {
      const int mode_latest = act.due - inst.duration(a, m) + 1;
      // Mode m may not start in (mode_latest, latest].
      for (int t = std::max(mode_latest + 1, 1); t <= latest; ++t) {
        if (m > 1) {
          equal(idx(a, m, t), idx(a, m - 1, t));
        } else if (t > 1) {
          equal(idx(a, 1, t), idx(a, modes, t - 1));
        } else {
          fixed.insert({idx(a, 1, 1), 0});
        }
      }
    }
  }

  for (int r = 0; r < inst.num_resources(); ++r) {
    for (int t = 1; t <= horizon; ++t) {
      g.h_rows.push_back(tilde_resource_row(inst, r, t, idx));
    }
  }
  model.num_resource_rows = static_cast<int>(g.h_rows.size());
  for (const auto& [i, v] : fixed) {
    if (options.fixings == FixingPlacement::kBounds) {
      g.bound_fixings.push_back({i, v});
    } else if (v == 0) {
      g.h_rows.push_back({{{i, 1.0}}, {}, RowSense::kLessEqual, 0.0});
    } else {
      g.h_rows.push_back({{{i, -1.0}}, {}, RowSense::kLessEqual, -1.0});
    }
  }
  return model;
}

XySolution lift_solution(const GpspInstance& inst, const VarIndex& idx,
                         const std::vector<double>& z, double tolerance) {
  if (static_cast<int>(z.size()) != idx.size()) {
    throw std::invalid_argument("z has wrong dimension");
  }
  const int horizon = inst.horizon();
  XySolution xy;
  xy.y.resize(inst.num_activities());
  for (int a = 0; a < inst.num_activities(); ++a) {
    const int modes = inst.activity(a).num_modes();
    auto& y = xy.y[a];
    y.assign(static_cast<size_t>(modes) * horizon, 0.0);
    for (int t = 1; t <= horizon; ++t) {
      for (int m = 1; m <= modes; ++m) {
        double value = z[idx(a, m, t)];
        if (m > 1) {
          value -= z[idx(a, m - 1, t)];
        } else if (t > 1) {
          value -= z[idx(a, modes, t - 1)];
        }
        if (value < -tolerance) {
          throw std::invalid_argument("z decreases along activity " +
                                      std::to_string(a + 1) + " at period " +
                                      std::to_string(t));
        }
        y[static_cast<size_t>(m - 1) * horizon + (t - 1)] = value;
      }
    }
    if (z[idx(a, modes, horizon)] > 1.0 + tolerance) {
      throw std::invalid_argument("z exceeds one for activity " + std::to_string(a + 1));
    }
  }
  const auto members = inst.cluster_members();
  xy.x.resize(inst.num_clusters());
  for (int c = 0; c < inst.num_clusters(); ++c) {
    xy.x[c].assign(horizon, 0.0);
    if (members[c].empty()) continue;
    const int rep = members[c].front();
    const int rep_modes = inst.activity(rep).num_modes();
    for (int a : members[c]) {
      const int modes = inst.activity(a).num_modes();
      for (int t = 1; t <= horizon; ++t) {
        if (std::abs(z[idx(a, modes, t)] - z[idx(rep, rep_modes, t)]) > tolerance) {
          throw std::invalid_argument("cluster " + std::to_string(c + 1) +
                                      " members disagree at period " + std::to_string(t));
        }
      }
    }
    double previous = 0.0;
    for (int t = 1; t <= horizon; ++t) {
      const double w = z[idx(rep, rep_modes, t)];
      xy.x[c][t - 1] = w - previous;
      previous = w;
    }
  }
  return xy;
}

std::vector<double> project_solution(const GpspInstance& inst, const VarIndex& idx,
                                     const XySolution& xy, double tolerance) {
  const int horizon = inst.horizon();
  const auto members = inst.cluster_members();
  for (int c = 0; c < inst.num_clusters(); ++c) {
    for (int a : members[c]) {
      for (int t = 1; t <= horizon; ++t) {
        double started = 0.0;
        for (int m = 1; m <= inst.activity(a).num_modes(); ++m) {
          started += xy.y[a][static_cast<size_t>(m - 1) * horizon + (t - 1)];
        }
        if (std::abs(started - xy.x[c][t - 1]) > tolerance) {
          throw std::invalid_argument("activity " + std::to_string(a + 1) +
                                      " disagrees with its cluster at period " +
                                      std::to_string(t));
        }
      }
    }
  }
  std::vector<double> z(idx.size(), 0.0);
  for (int a = 0; a < inst.num_activities(); ++a) {
    const int modes = inst.activity(a).num_modes();
    double cumulative = 0.0;
    for (int t = 1; t <= horizon; ++t) {
      for (int m = 1; m <= modes; ++m) {
        cumulative += xy.y[a][static_cast<size_t>(m - 1) * horizon + (t - 1)];
        z[idx(a, m, t)] = cumulative;
      }
    }
  }
  return z;
}

XySolution schedule_to_xy(const GpspInstance& inst, const Schedule& schedule) {
  const int horizon = inst.horizon();
  XySolution xy;
  xy.x.assign(inst.num_clusters(), std::vector<double>(horizon, 0.0));
  xy.y.resize(inst.num_activities());
  for (int a = 0; a < inst.num_activities(); ++a) {
    xy.y[a].assign(static_cast<size_t>(inst.activity(a).num_modes()) * horizon, 0.0);
    const ScheduledActivity& s = schedule.activities[a];
    if (!s.executed) continue;
    xy.y[a][static_cast<size_t>(s.mode - 1) * horizon + (s.start - 1)] = 1.0;
    xy.x[inst.activity(a).cluster][s.start - 1] = 1.0;
  }
  return xy;
}

std::vector<double> schedule_to_z(const GpspInstance& inst, const VarIndex& idx,
                                  const Schedule& schedule) {
  std::vector<double> z(idx.size(), 0.0);
  for (int a = 0; a < inst.num_activities(); ++a) {
    const ScheduledActivity& s = schedule.activities[a];
    if (!s.executed) continue;
    const int modes = inst.activity(a).num_modes();
    for (int m = s.mode; m <= modes; ++m) z[idx(a, m, s.start)] = 1.0;
    for (int t = s.start + 1; t <= inst.horizon(); ++t) {
      for (int m = 1; m <= modes; ++m) z[idx(a, m, t)] = 1.0;
    }
  }
  return z;
}

double xy_objective(const GpspInstance& inst, const XySolution& xy) {
  const int horizon = inst.horizon();
  double total = 0.0;
  for (int a = 0; a < inst.num_activities(); ++a) {
    for (int m = 1; m <= inst.activity(a).num_modes(); ++m) {
      for (int t = 1; t <= horizon; ++t) {
        total += inst.profit(a, m, t) * xy.y[a][static_cast<size_t>(m - 1) * horizon + (t - 1)];
      }
    }
  }
  return total;
}

GpcpInstance with_general_rows_as_side(const GpcpInstance& g) {
  GpcpInstance out = g;
  out.a_rows.clear();
  for (const ConstraintRow& row : g.a_rows) {
    ConstraintRow upper = row;
    upper.sense = RowSense::kLessEqual;
    out.h_rows.push_back(upper);
    if (row.sense == RowSense::kEqual) {
      ConstraintRow lower = upper;
      for (SparseEntry& e : lower.z) e.value = -e.value;
      lower.rhs = -lower.rhs;
      out.h_rows.push_back(std::move(lower));
    }
  }
  return out;
}

double gpcp_objective(const GpcpInstance& g, const std::vector<double>& z,
                      const std::vector<double>& u) {
  double total = 0.0;
  for (int i = 0; i < g.n; ++i) total += g.c[i] * z[i];
  for (int k = 0; k < g.num_u && k < static_cast<int>(u.size()); ++k) total += g.d[k] * u[k];
  return total;
}

namespace {

void write_row(std::ostream& out, const char* block, const ConstraintRow& row) {
  out << block << ' ' << (row.sense == RowSense::kEqual ? "=" : "<=") << ' '
      << format_double(row.rhs);
  for (const SparseEntry& e : row.z) out << ' ' << e.index + 1 << ':' << format_double(e.value);
  for (const SparseEntry& e : row.u) out << " u" << e.index + 1 << ':' << format_double(e.value);
  out << '\n';
}

double parse_number(const std::string& tok, int line) {
  try {
    size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used == tok.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError(line, "expected number, got '" + tok + "'");
}

int parse_id(const std::string& tok, int line) {
  try {
    size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used == tok.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError(line, "expected integer, got '" + tok + "'");
}

}  // namespace

std::string write_gpcp(const GpcpInstance& g) {
  std::ostringstream out;
  out << "n " << g.n << '\n' << "u " << g.num_u << '\n' << 'c';
  for (double v : g.c) out << ' ' << format_double(v);
  out << "\nd";
  for (double v : g.d) out << ' ' << format_double(v);
  out << '\n';
  for (const auto& [i, j] : g.arcs) out << "arc " << i + 1 << ' ' << j + 1 << '\n';
  for (const Fixing& f : g.bound_fixings) out << "fix " << f.index + 1 << ' ' << f.value << '\n';
  for (const ConstraintRow& row : g.a_rows) write_row(out, "A", row);
  for (const ConstraintRow& row : g.h_rows) write_row(out, "H", row);
  return out.str();
}

GpcpInstance parse_gpcp(std::istream& in) {
  GpcpInstance g;
  bool have_n = false;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream fields(raw);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(std::move(t));
    if (tok.empty()) continue;
    const std::string& key = tok[0];
    if (key != "n" && !have_n) throw ParseError(number, "'n' must come first");
    if (key == "n") {
      if (tok.size() != 2) throw ParseError(number, "n takes one value");
      g.n = parse_id(tok[1], number);
      if (g.n < 0) throw ParseError(number, "n must be nonnegative");
      g.c.assign(g.n, 0.0);
      have_n = true;
    } else if (key == "u") {
      if (tok.size() != 2) throw ParseError(number, "u takes one value");
      g.num_u = parse_id(tok[1], number);
      if (g.num_u < 0) throw ParseError(number, "u must be nonnegative");
      g.d.assign(g.num_u, 0.0);
    } else if (key == "c" || key == "d") {
      std::vector<double>& target = key == "c" ? g.c : g.d;
      if (tok.size() - 1 != target.size()) {
        throw ParseError(number, key + " needs " + std::to_string(target.size()) + " values");
      }
      for (size_t k = 1; k < tok.size(); ++k) target[k - 1] = parse_number(tok[k], number);
    } else if (key == "arc") {
      if (tok.size() != 3) throw ParseError(number, "arc takes two ids");
      const int i = parse_id(tok[1], number), j = parse_id(tok[2], number);
      if (i < 1 || i > g.n || j < 1 || j > g.n) throw ParseError(number, "arc id out of range");
      g.arcs.emplace_back(i - 1, j - 1);
    } else if (key == "fix") {
      if (tok.size() != 3) throw ParseError(number, "fix takes an id and a value");
      const int i = parse_id(tok[1], number), v = parse_id(tok[2], number);
      if (i < 1 || i > g.n) throw ParseError(number, "fix id out of range");
      if (v != 0 && v != 1) throw ParseError(number, "fix value must be 0 or 1");
      g.bound_fixings.push_back({i - 1, v});
    } else if (key == "A" || key == "H") {
      if (tok.size() < 3) throw ParseError(number, "row needs a sense and a rhs");
      ConstraintRow row;
      double sign = 1.0;
      if (tok[1] == "<=") {
        row.sense = RowSense::kLessEqual;
      } else if (tok[1] == "=" && key == "A") {
        row.sense = RowSense::kEqual;
      } else if (tok[1] == ">=") {
        sign = -1.0;
      } else {
        throw ParseError(number, "bad row sense '" + tok[1] + "'");
      }
      row.rhs = sign * parse_number(tok[2], number);
      for (size_t k = 3; k < tok.size(); ++k) {
        const auto colon = tok[k].find(':');
        if (colon == std::string::npos) throw ParseError(number, "expected id:coef");
        std::string id = tok[k].substr(0, colon);
        const double coef = sign * parse_number(tok[k].substr(colon + 1), number);
        if (!id.empty() && id[0] == 'u') {
          if (key == "A") throw ParseError(number, "general rows may not involve u");
          const int j = parse_id(id.substr(1), number);
          if (j < 1 || j > g.num_u) throw ParseError(number, "u id out of range");
          row.u.push_back({j - 1, coef});
        } else {
          const int j = parse_id(id, number);
          if (j < 1 || j > g.n) throw ParseError(number, "z id out of range");
          row.z.push_back({j - 1, coef});
        }
      }
      row.z = canonical(std::move(row.z));
      row.u = canonical(std::move(row.u));
      (key == "A" ? g.a_rows : g.h_rows).push_back(std::move(row));
    } else {
      throw ParseError(number, "unknown keyword '" + key + "'");
    }
  }
  if (!have_n) throw ParseError(number, "missing 'n'");
  if (auto diagnostics = validate_gpcp(g); !diagnostics.empty()) {
    throw InvalidInstanceError(std::move(diagnostics));
  }
  return g;
}

GpcpInstance parse_gpcp(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_gpcp(in);
}

GpcpInstance load_gpcp_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_gpcp(in);
}

}  // namespace schedbound
