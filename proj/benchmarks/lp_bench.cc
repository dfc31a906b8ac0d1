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

// Simplex on covering LPs (dual feasible slack basis) and on a scheduling
// relaxation, with and without the dual start.

#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "schedbound/generators.h"
#include "schedbound/gpcp.h"
#include "schedbound/lp.h"
#include "schedbound/oracle.h"

namespace {

using namespace schedbound;

LpProblem covering_problem(int n, int m) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> cost(1, 9), var(0, n - 1);
  std::bernoulli_distribution coin(4.0 / n);
  LpProblem p;
  for (int j = 0; j < n; ++j) p.add_variable(-cost(rng), 0.0, kInfinity);
  for (int i = 0; i < m; ++i) {
    std::vector<LpEntry> entries = {{var(rng), 1.0}};
    for (int j = 0; j < n; ++j) {
      if (j != entries[0].var && coin(rng)) entries.push_back({j, 1.0});
    }
    p.add_row(std::move(entries), LpSense::kGreaterEqual, 1.0);
  }
  return p;
}

void BM_CoveringLp(benchmark::State& state) {
  const LpProblem p = covering_problem(static_cast<int>(state.range(0)),
                                       static_cast<int>(state.range(0) * 3 / 2));
  LpOptions options;
  options.dual_start = state.range(1) != 0;
  std::int64_t iterations = 0;
  for (auto _ : state) {
    const LpSolution s = solve_lp(p, options);
    iterations = s.iterations;
    benchmark::DoNotOptimize(s.objective);
  }
  state.counters["pivots"] = static_cast<double>(iterations);
}
BENCHMARK(BM_CoveringLp)
    ->ArgNames({"n", "dual"})
    ->ArgsProduct({{100, 400}, {0, 1}})
    ->Unit(benchmark::kMillisecond);

void BM_DirectLpBound(benchmark::State& state) {
  RandomGpspOptions o;
  o.min_activities = o.max_activities = 12;
  o.min_horizon = o.max_horizon = 14;
  const GpcpInstance g = build_gpcp(random_gpsp(5, o)).problem;
  for (auto _ : state) benchmark::DoNotOptimize(direct_lp_bound(g));
  state.counters["vars"] = g.n;
}
BENCHMARK(BM_DirectLpBound)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
