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

#include "schedbound/partition.h"

#include <algorithm>
#include <cmath>

namespace schedbound {

Partition refine(const Partition& partition, std::span<const char> column) {
  Partition out;
  std::vector<char> covered(column.size(), 0);
  for (const std::vector<int>& cls : partition.classes) {
    std::vector<int> inside, outside;
    for (int i : cls) {
      covered[i] = 1;
      (column[i] ? inside : outside).push_back(i);
    }
    if (!inside.empty()) out.classes.push_back(std::move(inside));
    if (!outside.empty()) out.classes.push_back(std::move(outside));
  }
  std::vector<int> rest;
  for (size_t i = 0; i < column.size(); ++i) {
    if (column[i] && !covered[i]) rest.push_back(static_cast<int>(i));
  }
  if (!rest.empty()) out.classes.push_back(std::move(rest));
  return out;
}

Partition elementary_basis(std::span<const double> z, double tolerance) {
  std::vector<int> order;
  for (size_t i = 0; i < z.size(); ++i) {
    if (std::abs(z[i]) > tolerance) order.push_back(static_cast<int>(i));
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return z[a] > z[b]; });
  Partition out;
  for (size_t k = 0; k < order.size();) {
    const double head = z[order[k]];
    std::vector<int> cls;
    while (k < order.size() && head - z[order[k]] <= tolerance) cls.push_back(order[k++]);
    std::sort(cls.begin(), cls.end());
    out.classes.push_back(std::move(cls));
    out.values.push_back(head);
  }
  return out;
}

Partition coarsify_kstep(std::span<const double> anchor,
                         std::span<const std::vector<char>> columns, double tolerance) {
  Partition out = elementary_basis(anchor, tolerance);
  const std::vector<double> values = out.values;
  const bool keep_values = columns.empty();
  for (const std::vector<char>& column : columns) out = refine(out, column);
  if (keep_values) out.values = values;
  return out;
}

std::vector<double> assemble(const Partition& partition, std::span<const double> values, int n) {
  std::vector<double> z(n, 0.0);
  for (size_t q = 0; q < partition.classes.size(); ++q) {
    for (int i : partition.classes[q]) z[i] += values[q];
  }
  return z;
}

bool is_orthogonal(const Partition& partition, int n) {
  std::vector<char> seen(n, 0);
  for (const std::vector<int>& cls : partition.classes) {
    if (cls.empty() || !std::is_sorted(cls.begin(), cls.end())) return false;
    for (int i : cls) {
      if (i < 0 || i >= n || seen[i]) return false;
      seen[i] = 1;
    }
  }
  return true;
}

int count_fractional_values(std::span<const double> z, double tolerance) {
  std::vector<double> inner;
  for (double v : z) {
    if (v > tolerance && v < 1.0 - tolerance) inner.push_back(v);
  }
  std::sort(inner.begin(), inner.end(), std::greater<>());
  int count = 0;
  for (size_t k = 0; k < inner.size();) {
    const double head = inner[k];
    while (k < inner.size() && head - inner[k] <= tolerance) ++k;
    ++count;
  }
  return count;
}

}  // namespace schedbound
