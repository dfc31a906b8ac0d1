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

#include "schedbound/maxflow.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace schedbound {

namespace {
constexpr double kUnbounded = std::numeric_limits<double>::infinity();
}

MinCutSolver::MinCutSolver(int num_nodes, std::span<const std::pair<int, int>> arcs)
    : n_(num_nodes), source_(num_nodes), sink_(num_nodes + 1), adj_(num_nodes + 2) {
  for (const auto& [i, j] : arcs) add_edge(i, j, kUnbounded);
  source_edge_.resize(n_);
  sink_edge_.resize(n_);
  for (int i = 0; i < n_; ++i) {
    source_edge_[i] = static_cast<int>(adj_[source_].size());
    add_edge(source_, i, 0.0);
    sink_edge_[i] = static_cast<int>(adj_[i].size());
    add_edge(i, sink_, 0.0);
  }
  source_flow_.assign(n_, 0.0);
  sink_flow_.assign(n_, 0.0);
  source_cap_.assign(n_, 0.0);
  sink_cap_.assign(n_, 0.0);
  excess_.assign(n_ + 2, 0.0);
  label_.assign(n_ + 2, 0);
  label_count_.assign(n_ + 3, 0);
  buckets_.assign(n_ + 2, {});
  current_.assign(n_ + 2, 0);
  in_bucket_.assign(n_ + 2, 0);
}

void MinCutSolver::add_edge(int from, int to, double capacity) {
  const int forward = static_cast<int>(adj_[from].size());
  const int backward = static_cast<int>(adj_[to].size()) + (from == to ? 1 : 0);
  adj_[from].push_back({to, backward, capacity});
  adj_[to].push_back({from, forward, 0.0});
}

void MinCutSolver::activate(int v) {
  if (v >= n_ || in_bucket_[v] || excess_[v] <= eps_) return;
  const int top = n_ + 2;
  if (label_[v] >= top) return;
  buckets_[label_[v]].push_back(v);
  in_bucket_[v] = 1;
  highest_ = std::max(highest_, label_[v]);
}

void MinCutSolver::global_relabel() {
  ++stats_.global_relabels;
  work_since_global_ = 0;
  const int top = n_ + 2;
  std::fill(label_.begin(), label_.end(), top);
  std::fill(label_count_.begin(), label_count_.end(), 0);
  label_[sink_] = 0;
  std::deque<int> queue{sink_};
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (const Edge& e : adj_[v]) {
      const int u = e.to;
      if (u == source_ || label_[u] != top) continue;
      if (adj_[u][e.rev].residual > eps_) {
        label_[u] = label_[v] + 1;
        queue.push_back(u);
      }
    }
  }
  label_[source_] = top;
  for (auto& bucket : buckets_) bucket.clear();
  std::fill(in_bucket_.begin(), in_bucket_.end(), 0);
  highest_ = 0;
  for (int v = 0; v < n_; ++v) {
    if (label_[v] < top) ++label_count_[label_[v]];
    current_[v] = 0;
    activate(v);
  }
}

void MinCutSolver::push(int v, Edge& e, double amount) {
  ++stats_.pushes;
  e.residual -= amount;
  adj_[e.to][e.rev].residual += amount;
  excess_[v] -= amount;
  excess_[e.to] += amount;
  activate(e.to);
}

void MinCutSolver::gap(int label) {
  const int top = n_ + 2;
  for (int v = 0; v < n_; ++v) {
    if (label_[v] > label && label_[v] < top) {
      --label_count_[label_[v]];
      label_[v] = top;
    }
  }
}

void MinCutSolver::relabel(int v) {
  ++stats_.relabels;
  const int top = n_ + 2;
  const int old = label_[v];
  int lowest = top;
  for (const Edge& e : adj_[v]) {
    if (e.residual > eps_) lowest = std::min(lowest, label_[e.to] + 1);
  }
  --label_count_[old];
  label_[v] = std::min(lowest, top);
  if (label_[v] < top) ++label_count_[label_[v]];
  current_[v] = 0;
  work_since_global_ += static_cast<std::int64_t>(adj_[v].size()) + 12;
  if (label_count_[old] == 0 && old < top) gap(old);
}

void MinCutSolver::discharge(int v) {
  const int top = n_ + 2;
  while (excess_[v] > eps_ && label_[v] < top) {
    if (current_[v] == adj_[v].size()) {
      relabel(v);
      continue;
    }
    Edge& e = adj_[v][current_[v]];
    if (e.residual > eps_ && label_[v] == label_[e.to] + 1) {
      push(v, e, std::min(excess_[v], e.residual));
    } else {
      ++current_[v];
    }
  }
}

void MinCutSolver::solve(std::span<const double> source_capacity,
                         std::span<const double> sink_capacity, bool warm,
                         std::vector<char>* source_side) {
  if (!warm || !has_flow_) {
    for (int v = 0; v < n_ + 2; ++v) {
      for (Edge& e : adj_[v]) {
        // Forward internal arcs stay unbounded; everything else starts empty.
        if (!std::isinf(e.residual)) e.residual = 0.0;
      }
    }
    std::fill(excess_.begin(), excess_.end(), 0.0);
    std::fill(source_flow_.begin(), source_flow_.end(), 0.0);
    std::fill(sink_flow_.begin(), sink_flow_.end(), 0.0);
  }
  double scale = 0.0;
  for (int i = 0; i < n_; ++i) {
    scale = std::max({scale, source_capacity[i], sink_capacity[i]});
  }
  for (int i = 0; i < n_; ++i) {
    Edge& se = adj_[source_][source_edge_[i]];
    Edge& te = adj_[i][sink_edge_[i]];
    double fs = adj_[i][se.rev].residual;
    double ft = adj_[sink_][te.rev].residual;
    const double through = std::min(fs, ft);
    fs -= through;
    ft -= through;
    const double shift =
        std::max({0.0, fs - source_capacity[i], ft - sink_capacity[i]});
    source_cap_[i] = source_capacity[i] + shift;
    sink_cap_[i] = sink_capacity[i] + shift;
    scale = std::max(scale, source_cap_[i]);
    // Saturate the source arc; the surplus becomes excess at i.
    excess_[i] += source_cap_[i] - fs;
    se.residual = 0.0;
    adj_[i][se.rev].residual = source_cap_[i];
    te.residual = sink_cap_[i] - ft;
    adj_[sink_][te.rev].residual = ft;
  }
  eps_ = 1e-11 * std::max(scale, std::numeric_limits<double>::min());
  has_flow_ = true;

  global_relabel();
  const std::int64_t budget = 6 * static_cast<std::int64_t>(n_ + 2) +
                              static_cast<std::int64_t>(adj_.size()) * 2;
  while (true) {
    while (highest_ >= 0 && buckets_[highest_].empty()) --highest_;
    if (highest_ < 0) break;
    const int v = buckets_[highest_].back();
    buckets_[highest_].pop_back();
    in_bucket_[v] = 0;
    if (label_[v] != highest_) {
      activate(v);
      continue;
    }
    discharge(v);
    if (work_since_global_ > budget) global_relabel();
  }
  global_relabel();
  source_side->assign(n_, 0);
  for (int i = 0; i < n_; ++i) (*source_side)[i] = label_[i] >= n_ + 2 ? 1 : 0;
  for (int i = 0; i < n_; ++i) {
    source_flow_[i] = source_cap_[i];
    sink_flow_[i] = adj_[sink_][adj_[i][sink_edge_[i]].rev].residual;
  }
}

}  // namespace schedbound
