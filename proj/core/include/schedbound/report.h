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

#ifndef SCHEDBOUND_REPORT_H_
#define SCHEDBOUND_REPORT_H_

// Benchmark result rows, their CSV form and normalized geometric-mean
// summaries.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "schedbound/colgen.h"

namespace schedbound {

inline constexpr const char* kBenchCsvHeader = "instance,alg,status,bound,iterations,columns,time_ms";

struct BenchRow {
  std::string instance;
  std::string alg;
  std::string status;
  double bound = 0.0;
  int iterations = 0;
  int columns = 0;  // peak column count
  double time_ms = 0.0;
};

// `columns` is the peak column count; time is zeroed unless `with_time`.
BenchRow make_row(const std::string& instance, const std::string& alg, const BoundReport& report,
                  bool with_time = true);

// Header line followed by one line per row, in the given order. Bounds use
// the shortest round-trip decimal form and times three decimals.
void write_bench_csv(std::span<const BenchRow> rows, std::ostream& out);

// exp(mean(log(x + shift))) - shift; 0 for an empty input.
double shifted_geometric_mean(std::span<const double> values, double shift = 1.0);

struct NormalizedMeans {
  std::string alg;
  int instances = 0;  // instances shared with the baseline
  double time = 0.0;
  double iterations = 0.0;
  double columns = 0.0;
};

// For every algorithm, the shifted geometric mean (shift 1) of each metric
// over the instances it shares with `baseline`, divided by the baseline's
// mean over the same instances. Algorithms appear in first-seen order.
std::vector<NormalizedMeans> normalized_means(std::span<const BenchRow> rows,
                                              const std::string& baseline);

void write_summary(std::span<const NormalizedMeans> means, const std::string& baseline,
                   std::ostream& out);

}  // namespace schedbound

#endif  // SCHEDBOUND_REPORT_H_
