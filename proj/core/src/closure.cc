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

#include "schedbound/closure.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "schedbound/io.h"

namespace schedbound {

namespace {

std::atomic<std::uint64_t> next_graph_id{1};

// Iterative Tarjan; returns component ids in reverse topological order.
std::vector<int> strongly_connected(int n, const std::vector<std::vector<int>>& out,
                                    int* num_components) {
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1), stack;
  std::vector<std::pair<int, size_t>> frames;
  int counter = 0;
  int components = 0;
  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    frames.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    while (!frames.empty()) {
      auto& [v, next] = frames.back();
      if (next < out[v].size()) {
        const int w = out[v][next++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          frames.emplace_back(w, 0);
        } else if (comp[w] < 0) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const int done = v;
      frames.pop_back();
      if (!frames.empty()) {
        const int parent = frames.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
      if (low[done] == index[done]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          comp[w] = components;
        } while (w != done);
        ++components;
      }
    }
  }
  *num_components = components;
  return comp;
}

void sort_unique(std::vector<std::pair<int, int>>* arcs) {
  std::sort(arcs->begin(), arcs->end());
  arcs->erase(std::unique(arcs->begin(), arcs->end()), arcs->end());
}

}  // namespace

ClosureGraph build_closure_graph(int num_vars, std::span<const std::pair<int, int>> arcs,
                                 std::span<const Fixing> fixings) {
  ClosureGraph graph;
  graph.num_vars = num_vars;
  std::vector<std::vector<int>> out(num_vars);
  for (const auto& [i, j] : arcs) {
    if (i < 0 || j < 0 || i >= num_vars || j >= num_vars) {
      throw std::invalid_argument("closure arc references a missing variable");
    }
    out[i].push_back(j);
  }
  int num_comp = 0;
  const std::vector<int> comp = strongly_connected(num_vars, out, &num_comp);

  std::vector<std::pair<int, int>> comp_arcs;
  for (const auto& [i, j] : arcs) {
    if (comp[i] != comp[j]) comp_arcs.emplace_back(comp[i], comp[j]);
  }
  sort_unique(&comp_arcs);
  std::vector<std::vector<int>> succ(num_comp), pred(num_comp);
  for (const auto& [a, b] : comp_arcs) {
    succ[a].push_back(b);
    pred[b].push_back(a);
  }

  // Forced ones close forward, forced zeros close backward.
  std::vector<signed char> comp_forced(num_comp, -1);
  std::deque<int> ones, zeros;
  for (const Fixing& f : fixings) {
    if (f.index < 0 || f.index >= num_vars) {
      throw std::invalid_argument("fixing references a missing variable");
    }
    const int c = comp[f.index];
    const signed char value = f.value != 0 ? 1 : 0;
    if (comp_forced[c] >= 0 && comp_forced[c] != value) graph.infeasible = true;
    if (comp_forced[c] < 0) {
      comp_forced[c] = value;
      (value ? ones : zeros).push_back(c);
    }
  }
  const auto propagate = [&](std::deque<int>& queue, const std::vector<std::vector<int>>& next,
                             signed char value) {
    while (!queue.empty()) {
      const int c = queue.front();
      queue.pop_front();
      for (int d : next[c]) {
        if (comp_forced[d] == value) continue;
        if (comp_forced[d] >= 0) {
          graph.infeasible = true;
          continue;
        }
        comp_forced[d] = value;
        queue.push_back(d);
      }
    }
  };
  propagate(ones, succ, 1);
  propagate(zeros, pred, 0);

  // Free components become nodes, numbered by their smallest variable.
  std::vector<int> comp_node(num_comp, -1);
  graph.node_of.assign(num_vars, -1);
  graph.forced.assign(num_vars, -1);
  for (int v = 0; v < num_vars; ++v) {
    const int c = comp[v];
    if (comp_forced[c] >= 0) {
      graph.forced[v] = comp_forced[c];
      continue;
    }
    if (comp_node[c] < 0) {
      comp_node[c] = graph.num_nodes++;
      graph.members.emplace_back();
    }
    graph.node_of[v] = comp_node[c];
    graph.members[comp_node[c]].push_back(v);
  }
  for (const auto& [a, b] : comp_arcs) {
    if (comp_node[a] >= 0 && comp_node[b] >= 0) {
      graph.arcs.emplace_back(comp_node[a], comp_node[b]);
    }
  }
  sort_unique(&graph.arcs);
  return graph;
}

ClosureGraph build_closure_graph(const GpcpInstance& g) {
  std::vector<std::pair<int, int>> arcs = g.arcs;
  return build_closure_graph(g.n, arcs, g.bound_fixings);
}

ContractedGraph::ContractedGraph(ClosureGraph graph, bool contract)
    : base_(std::move(graph)), id_(next_graph_id.fetch_add(1)) {
  const int n = base_.num_nodes;
  std::vector<int> indeg(n, 0), outdeg(n, 0);
  std::vector<int> next(n, -1);
  for (const auto& [a, b] : base_.arcs) {
    ++outdeg[a];
    ++indeg[b];
    next[a] = b;
  }
  std::vector<char> simple(n, 0);
  if (contract) {
    for (int v = 0; v < n; ++v) simple[v] = indeg[v] == 1 && outdeg[v] == 1;
  }
  // In a DAG every simple node hangs on exactly one chain between two
  // non-simple nodes, so walking from each non-simple tail finds all paths.
  for (const auto& [a, b] : base_.arcs) {
    if (simple[a] || !simple[b]) continue;
    ContractedPath path;
    path.first = a;
    int v = b;
    while (simple[v]) {
      path.internal.push_back(v);
      v = next[v];
    }
    path.last = v;
    paths_.push_back(std::move(path));
  }
  reduced_of_.assign(n, -1);
  for (int v = 0; v < n; ++v) {
    if (simple[v]) continue;
    reduced_of_[v] = static_cast<int>(base_of_.size());
    base_of_.push_back(v);
  }
  for (const auto& [a, b] : base_.arcs) {
    if (!simple[a] && !simple[b]) arcs_.emplace_back(reduced_of_[a], reduced_of_[b]);
  }
  for (const ContractedPath& p : paths_) {
    arcs_.emplace_back(reduced_of_[p.first], reduced_of_[p.last]);
  }
  sort_unique(&arcs_);
  update_weights(std::vector<double>(base_.num_vars, 0.0));
}

void ContractedGraph::update_weights(std::span<const double> var_weights) {
  if (static_cast<int>(var_weights.size()) != base_.num_vars) {
    throw std::invalid_argument("closure weights have size " +
                                std::to_string(var_weights.size()) + ", expected " +
                                std::to_string(base_.num_vars));
  }
  var_weights_.assign(var_weights.begin(), var_weights.end());
  constant_ = 0.0;
  node_weights_.assign(base_.num_nodes, 0.0);
  for (int v = 0; v < base_.num_vars; ++v) {
    if (base_.node_of[v] >= 0) {
      node_weights_[base_.node_of[v]] += var_weights[v];
    } else if (base_.forced[v] == 1) {
      constant_ += var_weights[v];
    }
  }
  reduced_weights_.resize(base_of_.size());
  for (size_t r = 0; r < base_of_.size(); ++r) reduced_weights_[r] = node_weights_[base_of_[r]];

  for (ContractedPath& p : paths_) {
    const int k = static_cast<int>(p.internal.size()) + 2;
    p.weights.resize(k);
    p.weights[0] = node_weights_[p.first];
    p.weights[k - 1] = node_weights_[p.last];
    double total = 0.0;
    for (int i = 0; i + 2 < k; ++i) {
      p.weights[i + 1] = node_weights_[p.internal[i]];
      total += p.weights[i + 1];
    }
    // Best suffix of internals that may be selected without v(1): positions
    // j..k-1 for j in 2..k, where j = k is the empty suffix. Ties go to the
    // smallest j.
    double best = 0.0;
    double running = 0.0;
    int split = k;
    for (int j = k - 1; j >= 2; --j) {
      running += p.weights[j - 1];
      if (running >= best) {
        best = running;
        split = j;
      }
    }
    p.split = split;
    p.suffix_gain = best;
    reduced_weights_[reduced_of_[p.last]] += best;
    reduced_weights_[reduced_of_[p.first]] += total - best;
  }
}

std::vector<char> ContractedGraph::expand(const std::vector<char>& reduced_selection) const {
  std::vector<char> node_sel(base_.num_nodes, 0);
  for (size_t r = 0; r < base_of_.size(); ++r) node_sel[base_of_[r]] = reduced_selection[r];
  for (const ContractedPath& p : paths_) {
    int from = static_cast<int>(p.internal.size()) + 2;  // past the end
    if (node_sel[p.first]) {
      from = 2;
    } else if (node_sel[p.last]) {
      from = p.split;
    }
    for (int j = from; j < static_cast<int>(p.internal.size()) + 2; ++j) {
      node_sel[p.internal[j - 2]] = 1;
    }
  }
  std::vector<char> selection(base_.num_vars, 0);
  for (int v = 0; v < base_.num_vars; ++v) {
    selection[v] = base_.node_of[v] >= 0 ? node_sel[base_.node_of[v]] : base_.forced[v] == 1;
  }
  return selection;
}

ContractedGraph contract_paths(ClosureGraph graph) {
  return ContractedGraph(std::move(graph), true);
}

void update_contracted_weights(ContractedGraph& cg, std::span<const double> var_weights) {
  cg.update_weights(var_weights);
}

ClosureResult max_closure(const ContractedGraph& cg, WarmState* warm) {
  ClosureResult result;
  if (cg.base().infeasible) {
    result.feasible = false;
    result.value = -std::numeric_limits<double>::infinity();
    return result;
  }
  const std::vector<double>& w = cg.reduced_weights();
  const int n = cg.num_nodes();
  std::vector<double> source_cap(n), sink_cap(n);
  for (int i = 0; i < n; ++i) {
    source_cap[i] = std::max(w[i], 0.0);
    sink_cap[i] = std::max(-w[i], 0.0);
  }
  std::unique_ptr<MinCutSolver> local;
  MinCutSolver* solver = nullptr;
  bool reuse = false;
  if (warm != nullptr) {
    reuse = warm->attached_to(cg);
    if (!reuse) {
      warm->solver_ = std::make_unique<MinCutSolver>(n, cg.arcs());
      warm->graph_id_ = cg.id();
    }
    solver = warm->solver_.get();
  } else {
    local = std::make_unique<MinCutSolver>(n, cg.arcs());
    solver = local.get();
  }
  std::vector<char> reduced;
  solver->solve(source_cap, sink_cap, reuse, &reduced);
  result.selection = cg.expand(reduced);
  const std::vector<double>& vw = cg.variable_weights();
  for (int v = 0; v < cg.base().num_vars; ++v) {
    if (result.selection[v]) result.value += vw[v];
  }
  return result;
}

void write_dimacs(const ContractedGraph& cg, std::ostream& out) {
  const int n = cg.num_nodes();
  const std::vector<double>& w = cg.reduced_weights();
  double big = 1.0;
  for (double x : w) big += std::abs(x);
  int terminal_arcs = 0;
  for (double x : w) terminal_arcs += x != 0.0;
  out << "c max closure cut network, nodes 1.." << n << " plus terminals\n";
  out << "p max " << n + 2 << ' ' << cg.arcs().size() + terminal_arcs << '\n';
  out << "n " << n + 1 << " s\n";
  out << "n " << n + 2 << " t\n";
  for (int i = 0; i < n; ++i) {
    if (w[i] > 0) out << "a " << n + 1 << ' ' << i + 1 << ' ' << format_double(w[i]) << '\n';
    if (w[i] < 0) out << "a " << i + 1 << ' ' << n + 2 << ' ' << format_double(-w[i]) << '\n';
  }
  for (const auto& [a, b] : cg.arcs()) {
    out << "a " << a + 1 << ' ' << b + 1 << ' ' << format_double(big) << '\n';
  }
}

ClosurePricer::ClosurePricer(const GpcpInstance& g, ClosurePricerOptions options)
    : graph_(build_closure_graph(g), options.contract_paths), options_(options) {}

ClosureResult ClosurePricer::price(std::span<const double> var_weights) {
  graph_.update_weights(var_weights);
  return max_closure(graph_, options_.warm_start ? &warm_ : nullptr);
}

}  // namespace schedbound
