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

#include "schedbound/report.h"

#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

#include "schedbound/io.h"

namespace schedbound {

namespace {

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

// Instance names may contain commas or quotes only in pathological cases.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

}  // namespace

BenchRow make_row(const std::string& instance, const std::string& alg, const BoundReport& report,
                  bool with_time) {
  BenchRow row;
  row.instance = instance;
  row.alg = alg;
  row.status = to_string(report.status);
  row.bound = report.bound;
  row.iterations = report.iterations;
  row.columns = report.peak_columns;
  row.time_ms = with_time ? report.time_ms : 0.0;
  return row;
}

void write_bench_csv(std::span<const BenchRow> rows, std::ostream& out) {
  out << kBenchCsvHeader << '\n';
  for (const BenchRow& r : rows) {
    out << csv_field(r.instance) << ',' << r.alg << ',' << r.status << ','
        << format_double(r.bound) << ',' << r.iterations << ',' << r.columns << ','
        << fixed3(r.time_ms) << '\n';
  }
}

double shifted_geometric_mean(std::span<const double> values, double shift) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += std::log(v + shift);
  return std::exp(sum / static_cast<double>(values.size())) - shift;
}

std::vector<NormalizedMeans> normalized_means(std::span<const BenchRow> rows,
                                              const std::string& baseline) {
  std::map<std::string, const BenchRow*> base;
  for (const BenchRow& r : rows) {
    if (r.alg == baseline) base.emplace(r.instance, &r);
  }
  std::vector<std::string> order;
  std::map<std::string, std::vector<const BenchRow*>> by_alg;
  for (const BenchRow& r : rows) {
    if (!by_alg.count(r.alg)) order.push_back(r.alg);
    by_alg[r.alg].push_back(&r);
  }
  std::vector<NormalizedMeans> out;
  for (const std::string& alg : order) {
    std::vector<double> t, it, col, bt, bit, bcol;
    for (const BenchRow* r : by_alg[alg]) {
      const auto b = base.find(r->instance);
      if (b == base.end()) continue;
      t.push_back(r->time_ms);
      it.push_back(r->iterations);
      col.push_back(r->columns);
      bt.push_back(b->second->time_ms);
      bit.push_back(b->second->iterations);
      bcol.push_back(b->second->columns);
    }
    NormalizedMeans m;
    m.alg = alg;
    m.instances = static_cast<int>(t.size());
    auto ratio = [](std::span<const double> a, std::span<const double> b) {
      const double denom = shifted_geometric_mean(b);
      return denom > 0.0 ? shifted_geometric_mean(a) / denom : 0.0;
    };
    if (m.instances > 0) {
      m.time = ratio(t, bt);
      m.iterations = ratio(it, bit);
      m.columns = ratio(col, bcol);
    }
    out.push_back(m);
  }
  return out;
}

void write_summary(std::span<const NormalizedMeans> means, const std::string& baseline,
                   std::ostream& out) {
  out << "# normalized shifted geometric means (baseline " << baseline << ")\n";
  out << "alg,instances,time,iterations,columns\n";
  for (const NormalizedMeans& m : means) {
    out << m.alg << ',' << m.instances << ',' << fixed3(m.time) << ',' << fixed3(m.iterations)
        << ',' << fixed3(m.columns) << '\n';
  }
}

}  // namespace schedbound
