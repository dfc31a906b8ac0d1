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

#ifndef SCHEDBOUND_MAXFLOW_H_
#define SCHEDBOUND_MAXFLOW_H_

// Highest-label push-relabel minimum cut on a network whose internal arcs
// have infinite capacity and whose terminal capacities change between calls.
// Only the first phase runs: the result is a maximum preflow, which already
// determines the minimum cut.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace schedbound {

struct MinCutStats {
  std::int64_t pushes = 0;
  std::int64_t relabels = 0;
  std::int64_t global_relabels = 0;
};

class MinCutSolver {
 public:
  // Internal arcs (i, j) are infinite: cutting them is never optimal.
  MinCutSolver(int num_nodes, std::span<const std::pair<int, int>> arcs);

  // Computes a minimum s-t cut for the given terminal capacities. With
  // `warm` the preflow of the previous call is kept: s-i-t flow is
  // cancelled and any remaining overflow is absorbed by raising both
  // terminal capacities of a node by the same amount, which shifts every
  // cut by a constant and therefore preserves the minimum cuts.
  // source_side[i] is set iff node i cannot reach the sink in the residual
  // network; this maximal source side is the same for every maximum flow.
  void solve(std::span<const double> source_capacity, std::span<const double> sink_capacity,
             bool warm, std::vector<char>* source_side);

  int num_nodes() const { return n_; }
  const MinCutStats& stats() const { return stats_; }

 private:
  struct Edge {
    int to;
    int rev;  // index of the paired edge in adj_[to]
    double residual;
  };

  void add_edge(int from, int to, double capacity);
  void global_relabel();
  void push(int v, Edge& e, double amount);
  void relabel(int v);
  void gap(int label);
  void activate(int v);
  void discharge(int v);

  int n_;           // internal nodes
  int source_, sink_;
  double eps_ = 1e-12;
  std::vector<std::vector<Edge>> adj_;
  std::vector<int> source_edge_;  // index into adj_[source_]
  std::vector<int> sink_edge_;    // index into adj_[i]
  std::vector<double> source_flow_, sink_flow_;
  std::vector<double> source_cap_, sink_cap_;
  std::vector<double> excess_;
  std::vector<int> label_;
  std::vector<int> label_count_;
  std::vector<std::vector<int>> buckets_;
  std::vector<size_t> current_;
  std::vector<char> in_bucket_;
  int highest_ = 0;
  std::int64_t work_since_global_ = 0;
  bool has_flow_ = false;
  MinCutStats stats_;
};

}  // namespace schedbound

#endif  // SCHEDBOUND_MAXFLOW_H_
