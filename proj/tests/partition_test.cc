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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

namespace schedbound {
namespace {

using Matrix = std::vector<std::vector<double>>;

// Row rank by Gaussian elimination with partial pivoting.
int rank_of(Matrix rows) {
  if (rows.empty()) return 0;
  const size_t n = rows.front().size();
  int rank = 0;
  for (size_t col = 0; col < n && rank < static_cast<int>(rows.size()); ++col) {
    size_t pivot = rank;
    for (size_t r = rank; r < rows.size(); ++r) {
      if (std::abs(rows[r][col]) > std::abs(rows[pivot][col])) pivot = r;
    }
    if (std::abs(rows[pivot][col]) < 1e-9) continue;
    std::swap(rows[pivot], rows[rank]);
    for (size_t r = 0; r < rows.size(); ++r) {
      if (r == static_cast<size_t>(rank)) continue;
      const double f = rows[r][col] / rows[rank][col];
      for (size_t k = col; k < n; ++k) rows[r][k] -= f * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

Matrix indicator_rows(const Partition& p, int n) {
  Matrix rows;
  for (const auto& cls : p.classes) {
    std::vector<double> row(n, 0.0);
    for (int i : cls) row[i] = 1.0;
    rows.push_back(std::move(row));
  }
  return rows;
}

// True iff every vector lies in the span of the partition's indicators.
bool spans(const Partition& p, int n, const Matrix& vectors) {
  Matrix base = indicator_rows(p, n);
  Matrix joined = base;
  joined.insert(joined.end(), vectors.begin(), vectors.end());
  return rank_of(joined) == rank_of(base);
}

std::vector<double> as_double(const std::vector<char>& v) {
  return std::vector<double>(v.begin(), v.end());
}

Partition from_columns(const std::vector<std::vector<char>>& cols) {
  Partition p;
  for (const auto& c : cols) p = refine(p, c);
  return p;
}

TEST(Refine, SplitsClassesAndAppendsRemainder) {
  Partition p;
  p.classes = {{0, 1}, {2}};
  const std::vector<char> v = {1, 0, 1, 1};
  const Partition out = refine(p, v);
  const std::vector<std::vector<int>> expected = {{0}, {1}, {2}, {3}};
  EXPECT_EQ(out.classes, expected);
}

TEST(Refine, ColumnCoveringWholeClassesLeavesThemIntact) {
  Partition p;
  p.classes = {{0, 1}, {2, 3}};
  const Partition out = refine(p, std::vector<char>{1, 1, 0, 0});
  EXPECT_EQ(out.classes, p.classes);
}

TEST(Refine, EmptyColumnIsNoOp) {
  Partition p;
  p.classes = {{0, 2}};
  EXPECT_EQ(refine(p, std::vector<char>{0, 0, 0}).classes, p.classes);
}

TEST(ElementaryBasis, GroupsEqualValuesLargestFirst) {
  const std::vector<double> z = {0.5, 1.0, 0.5, 0.0};
  const Partition p = elementary_basis(z);
  ASSERT_EQ(p.size(), 2);
  EXPECT_EQ(p.classes[0], std::vector<int>{1});
  EXPECT_EQ(p.classes[1], (std::vector<int>{0, 2}));
  EXPECT_DOUBLE_EQ(p.values[0], 1.0);
  EXPECT_DOUBLE_EQ(p.values[1], 0.5);
  EXPECT_EQ(assemble(p, p.values, 4), z);
}

TEST(ElementaryBasis, ZeroVectorIsEmpty) {
  EXPECT_TRUE(elementary_basis(std::vector<double>(5, 0.0)).empty());
}

TEST(ElementaryBasis, NegativeValuesFormTheirOwnClasses) {
  const std::vector<double> z = {-0.25, 0.75, -0.25};
  const Partition p = elementary_basis(z);
  ASSERT_EQ(p.size(), 2);
  EXPECT_EQ(assemble(p, p.values, 3), z);
}

TEST(FractionalValues, CountsDistinctInteriorValues) {
  EXPECT_EQ(count_fractional_values(std::vector<double>{0.5, 1.0, 0.5, 0.0, 0.25}), 2);
  EXPECT_EQ(count_fractional_values(std::vector<double>{0.0, 1.0}), 0);
  EXPECT_EQ(count_fractional_values(std::vector<double>{1.0 - 1e-12, 1e-12}), 0);
}

TEST(IsOrthogonal, DetectsOverlapOrderAndRange) {
  Partition p;
  p.classes = {{0, 1}, {2}};
  EXPECT_TRUE(is_orthogonal(p, 3));
  p.classes = {{0, 1}, {1}};
  EXPECT_FALSE(is_orthogonal(p, 3));
  p.classes = {{1, 0}};
  EXPECT_FALSE(is_orthogonal(p, 3));
  p.classes = {{3}};
  EXPECT_FALSE(is_orthogonal(p, 3));
  p.classes = {{}};
  EXPECT_FALSE(is_orthogonal(p, 3));
}

std::vector<char> random_column(std::mt19937& rng, int n, double density) {
  std::bernoulli_distribution bit(density);
  std::vector<char> v(n);
  for (auto& x : v) x = bit(rng);
  return v;
}

TEST(Refine, RandomTrialsKeepOrthogonalityBoundAndSpan) {
  std::mt19937 rng(7);
  constexpr int n = 20;
  for (int trial = 0; trial < 1000; ++trial) {
    std::uniform_int_distribution<int> count(0, 6);
    std::vector<std::vector<char>> cols;
    const int k = count(rng);
    for (int i = 0; i < k; ++i) cols.push_back(random_column(rng, n, 0.3));
    const Partition p = from_columns(cols);
    const std::vector<char> v = random_column(rng, n, 0.4);
    const Partition out = refine(p, v);
    ASSERT_TRUE(is_orthogonal(out, n));
    ASSERT_LE(out.size(), 2 * p.size() + 1);
    Matrix old_and_new = indicator_rows(p, n);
    old_and_new.push_back(as_double(v));
    ASSERT_TRUE(spans(out, n, old_and_new));
    // Refining again by the same column changes nothing.
    ASSERT_EQ(refine(out, v).classes, out.classes);
  }
}

TEST(ElementaryBasis, RandomVectorsAreReassembledExactly) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> level(0, 4);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> z(20);
    for (auto& x : z) x = level(rng) / 4.0;
    const Partition p = elementary_basis(z);
    ASSERT_TRUE(is_orthogonal(p, 20));
    ASSERT_EQ(assemble(p, p.values, 20), z);
    for (size_t q = 1; q < p.values.size(); ++q) ASSERT_GT(p.values[q - 1], p.values[q]);
  }
}

TEST(CoarsifyKStep, SpansAnchorAndColumns) {
  std::mt19937 rng(13);
  constexpr int n = 20;
  for (int trial = 0; trial < 1000; ++trial) {
    // Anchor is a combination of random 0-1 columns.
    std::vector<double> anchor(n, 0.0);
    for (int j = 0; j < 3; ++j) {
      const std::vector<char> v = random_column(rng, n, 0.3);
      const double weight = 0.25 * (j + 1);
      for (int i = 0; i < n; ++i) anchor[i] += weight * v[i];
    }
    const int k = 1 + trial % 3;  // k in {1, 2, 3}
    std::vector<std::vector<char>> later;
    for (int j = 0; j + 1 < k; ++j) later.push_back(random_column(rng, n, 0.3));
    const Partition p = coarsify_kstep(anchor, later);
    ASSERT_TRUE(is_orthogonal(p, n));
    Matrix targets = {anchor};
    for (const auto& v : later) targets.push_back(as_double(v));
    ASSERT_TRUE(spans(p, n, targets));
    if (k == 1) ASSERT_EQ(p.size(), elementary_basis(anchor).size());
  }
}

TEST(Assemble, UncoveredEntriesAreZero) {
  Partition p;
  p.classes = {{1, 3}};
  const std::vector<double> values = {0.5};
  EXPECT_EQ(assemble(p, values, 4), (std::vector<double>{0.0, 0.5, 0.0, 0.5}));
}

}  // namespace
}  // namespace schedbound
