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

// Bound engines end to end, and the effect of individual speed-ups on BZ.

#include <benchmark/benchmark.h>

#include <string>

#include "schedbound/colgen.h"
#include "schedbound/generators.h"
#include "schedbound/gpcp.h"
#include "schedbound/io.h"

namespace {

using namespace schedbound;

const GpspInstance& schedule() {
  static const GpspInstance inst =
      load_instance_file(std::string(SCHEDBOUND_DATA_DIR) + "/j30gen/j30gen_04.sm");
  return inst;
}

const GpcpModel& model() {
  static const GpcpModel m = build_gpcp(schedule());
  return m;
}

// Bit 0: PHS, bit 1: PC, bit 2: MHS, bit 3: starting columns.
ColgenOptions options_from(std::int64_t mask, int k_step) {
  ColgenOptions o;
  o.pricing_hot_start = mask & 1;
  o.path_contraction = mask & 2;
  o.master_hot_start = mask & 4;
  if (mask & 8) {
    o.start_columns = partition_columns(starting_columns(schedule(), model().index),
                                        model().problem.n);
  }
  o.k_step = k_step;
  return o;
}

void BM_BzSolve(benchmark::State& state) {
  const ColgenOptions o = options_from(state.range(0), static_cast<int>(state.range(1)));
  int iterations = 0;
  for (auto _ : state) {
    const BoundReport r = bz_solve(model().problem, o);
    iterations = r.iterations;
    benchmark::DoNotOptimize(r.bound);
  }
  state.counters["iterations"] = iterations;
}
BENCHMARK(BM_BzSolve)
    ->ArgNames({"speedups", "k"})
    ->Args({0b1001, 10})  // PSPLIB defaults: PHS, STCOL, k = 10
    ->Args({0b0111, 1})   // native defaults: PHS, PC, MHS
    ->Args({0b1111, 1})
    ->Args({0b1101, 1})
    ->Args({0b0000, 1})
    ->Unit(benchmark::kMillisecond);

void BM_SmallInstanceEngines(benchmark::State& state) {
  const GpcpInstance g = random_gpcp(static_cast<std::uint64_t>(state.range(1)));
  const auto engine = state.range(0);
  for (auto _ : state) {
    const BoundReport r = engine == 0   ? bz_solve(with_general_rows_as_side(g))
                          : engine == 1 ? dw_solve(g)
                                        : gcg_solve(g);
    benchmark::DoNotOptimize(r.bound);
  }
}
BENCHMARK(BM_SmallInstanceEngines)
    ->ArgNames({"engine", "seed"})
    ->ArgsProduct({{0, 1, 2}, {3, 11}})
    ->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
