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

#ifndef SCHEDBOUND_PARTITION_H_
#define SCHEDBOUND_PARTITION_H_

// Families of orthogonal 0-1 columns, stored by their supports, and the
// operations that grow (refine) or shrink (elementary basis) them.

#include <span>
#include <vector>

namespace schedbound {

// Invariant: classes are nonempty, sorted ascending and pairwise disjoint.
// `values` is either empty or holds one coefficient per class.
struct Partition {
  std::vector<std::vector<int>> classes;
  std::vector<double> values;

  int size() const { return static_cast<int>(classes.size()); }
  bool empty() const { return classes.empty(); }
};

// Splits every class against the support of `column` and appends the part of
// the support not yet covered. The span only grows and at most 2r+1 classes
// result from r classes.
Partition refine(const Partition& partition, std::span<const char> column);

// Level sets of the distinct nonzero values of `z`, largest value first.
// Entries within `tolerance` of each other share a class whose value is the
// first (largest) entry of the group; |z_i| <= tolerance counts as zero.
Partition elementary_basis(std::span<const double> z, double tolerance = 1e-9);

// Elementary basis of `anchor` refined in order by each of `columns`.
Partition coarsify_kstep(std::span<const double> anchor,
                         std::span<const std::vector<char>> columns,
                         double tolerance = 1e-9);

// Sum of value * indicator over the classes, length n.
std::vector<double> assemble(const Partition& partition, std::span<const double> values, int n);

// True iff classes are nonempty, in range, sorted and pairwise disjoint.
bool is_orthogonal(const Partition& partition, int n);

// Number of distinct values of z strictly inside (0, 1), grouped as above.
int count_fractional_values(std::span<const double> z, double tolerance = 1e-9);

}  // namespace schedbound

#endif  // SCHEDBOUND_PARTITION_H_
