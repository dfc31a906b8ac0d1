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

#ifndef SCHEDBOUND_CLOSURE_H_
#define SCHEDBOUND_CLOSURE_H_

// Maximum weight closure over the precedence arcs of a 0-1 program:
//
//   max w'z  s.t.  z_i <= z_j for every arc (i, j),  z in {0,1}^n.
//
// A selection is a closure when every selected node has all of its arc heads
// selected. Solved as a minimum cut with optional path contraction and
// warm-started flows.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "schedbound/gpcp.h"
#include "schedbound/maxflow.h"

namespace schedbound {

// Precedence graph after merging strongly connected components and removing
// nodes whose value is forced by fixings. Invariant: the arcs among free
// nodes form a DAG without duplicates or self loops.
struct ClosureGraph {
  int num_vars = 0;
  int num_nodes = 0;
  std::vector<int> node_of;            // variable -> node, -1 when forced
  std::vector<signed char> forced;     // variable -> -1 free, 0 or 1 forced
  std::vector<std::vector<int>> members;  // node -> variables, ascending
  std::vector<std::pair<int, int>> arcs;  // between nodes, sorted
  bool infeasible = false;             // fixings contradict the arcs
};

ClosureGraph build_closure_graph(int num_vars, std::span<const std::pair<int, int>> arcs,
                                 std::span<const Fixing> fixings = {});
// Uses the arcs and bound fixings of `g`; general rows are ignored.
ClosureGraph build_closure_graph(const GpcpInstance& g);

// A maximal path v(1) -> ... -> v(k), k >= 3, whose internal vertices have in-
// and out-degree one. Only v(1) and v(k) remain in the reduced graph.
struct ContractedPath {
  int first = 0;
  int last = 0;
  std::vector<int> internal;        // v(2) .. v(k-1)
  std::vector<double> weights;      // current weights of v(1) .. v(k)
  int split = 0;                    // position in 2..k of the best suffix start
  double suffix_gain = 0.0;         // sum of internal weights from `split` on
};

class ContractedGraph {
 public:
  ContractedGraph() = default;
  // With `contract` unset the reduced graph equals the closure graph.
  ContractedGraph(ClosureGraph graph, bool contract);

  const ClosureGraph& base() const { return base_; }
  int num_nodes() const { return static_cast<int>(base_of_.size()); }
  const std::vector<std::pair<int, int>>& arcs() const { return arcs_; }
  const std::vector<ContractedPath>& paths() const { return paths_; }
  // Base node -> reduced node, -1 for path internals.
  const std::vector<int>& reduced_of() const { return reduced_of_; }
  const std::vector<double>& reduced_weights() const { return reduced_weights_; }
  const std::vector<double>& variable_weights() const { return var_weights_; }
  double constant() const { return constant_; }
  std::uint64_t id() const { return id_; }

  // Recomputes node weights, splits and endpoint adjustments; the structure is
  // kept. Throws std::invalid_argument when the size differs from num_vars.
  void update_weights(std::span<const double> var_weights);

  // Expands a reduced selection into one over variables.
  std::vector<char> expand(const std::vector<char>& reduced_selection) const;

 private:
  ClosureGraph base_;
  std::vector<int> reduced_of_;
  std::vector<int> base_of_;  // reduced node -> base node
  std::vector<std::pair<int, int>> arcs_;
  std::vector<ContractedPath> paths_;
  std::vector<double> var_weights_;
  std::vector<double> node_weights_;
  std::vector<double> reduced_weights_;
  double constant_ = 0.0;
  std::uint64_t id_ = 0;
};

ContractedGraph contract_paths(ClosureGraph graph);
void update_contracted_weights(ContractedGraph& cg, std::span<const double> var_weights);

struct ClosureResult {
  std::vector<char> selection;  // per variable
  double value = 0.0;           // sum of selected variable weights
  bool feasible = true;
};

// Cut solver retained between calls on the same contracted graph. Using it or
// not never changes the returned closure, only the work.
class WarmState {
 public:
  bool attached_to(const ContractedGraph& cg) const { return solver_ && graph_id_ == cg.id(); }
  const MinCutStats* stats() const { return solver_ ? &solver_->stats() : nullptr; }

 private:
  friend ClosureResult max_closure(const ContractedGraph&, WarmState*);
  std::unique_ptr<MinCutSolver> solver_;
  std::uint64_t graph_id_ = 0;
};

// Maximum closure of the current weights; the maximal optimal closure is
// returned, so the result does not depend on `warm`.
ClosureResult max_closure(const ContractedGraph& cg, WarmState* warm = nullptr);

// DIMACS max-flow dump of the cut network of the reduced graph.
void write_dimacs(const ContractedGraph& cg, std::ostream& out);

struct ClosurePricerOptions {
  bool contract_paths = true;
  bool warm_start = true;
};

// Pricing context for one program: structure once, weights per call.
class ClosurePricer {
 public:
  ClosurePricer(const GpcpInstance& g, ClosurePricerOptions options = {});
  ClosureResult price(std::span<const double> var_weights);
  const ContractedGraph& graph() const { return graph_; }
  const WarmState& warm_state() const { return warm_; }

 private:
  ContractedGraph graph_;
  WarmState warm_;
  ClosurePricerOptions options_;
};

}  // namespace schedbound

#endif  // SCHEDBOUND_CLOSURE_H_
