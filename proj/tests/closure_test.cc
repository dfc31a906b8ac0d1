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

#include "schedbound/closure.h"

#include <gtest/gtest.h>

#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <utility>
#include <vector>

#include "schedbound/generators.h"
#include "schedbound/gpcp.h"
#include "schedbound/maxflow.h"

namespace schedbound {
namespace {

using Arcs = std::vector<std::pair<int, int>>;

bool is_closure(const std::vector<char>& sel, const Arcs& arcs) {
  for (const auto& [i, j] : arcs) {
    if (sel[i] && !sel[j]) return false;
  }
  return true;
}

// Brute force over all 2^n subsets, honouring fixings.
double brute_force_closure(int n, const Arcs& arcs, const std::vector<double>& w,
                           const std::vector<Fixing>& fixings = {}) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<char> sel(n);
    for (int i = 0; i < n; ++i) sel[i] = (mask >> i) & 1u;
    bool ok = is_closure(sel, arcs);
    for (const Fixing& f : fixings) ok = ok && sel[f.index] == f.value;
    if (!ok) continue;
    double value = 0.0;
    for (int i = 0; i < n; ++i) value += sel[i] ? w[i] : 0.0;
    best = std::max(best, value);
  }
  return best;
}

double selection_value(const std::vector<char>& sel, const std::vector<double>& w) {
  double value = 0.0;
  for (size_t i = 0; i < sel.size(); ++i) value += sel[i] ? w[i] : 0.0;
  return value;
}

// Arcs over a random permutation, so the graph is acyclic; with `cycles` a
// few back arcs create equality classes.
Arcs random_arcs(std::mt19937_64& rng, int n, double density, bool cycles) {
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::bernoulli_distribution coin(density);
  std::bernoulli_distribution back(0.04);
  Arcs arcs;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (coin(rng)) arcs.emplace_back(order[a], order[b]);
      if (cycles && back(rng)) arcs.emplace_back(order[b], order[a]);
    }
  }
  return arcs;
}

// Half-integral weights keep every sum exact in double precision.
std::vector<double> random_weights(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> dist(-12, 12);
  std::vector<double> w(n);
  for (double& x : w) x = dist(rng) / 2.0;
  return w;
}

TEST(BuildClosureGraph, TwoVariablesOneArc) {
  const Arcs arcs{{0, 1}};
  const ClosureGraph g = build_closure_graph(2, arcs);
  EXPECT_EQ(g.num_nodes, 2);
  ASSERT_EQ(g.arcs.size(), 1u);
  EXPECT_EQ(g.arcs[0], std::make_pair(0, 1));
  EXPECT_FALSE(g.infeasible);
}

TEST(BuildClosureGraph, EqualityPairMerges) {
  const Arcs arcs{{0, 1}, {1, 0}};
  const ClosureGraph g = build_closure_graph(2, arcs);
  EXPECT_EQ(g.num_nodes, 1);
  EXPECT_TRUE(g.arcs.empty());
  EXPECT_EQ(g.members[0], (std::vector<int>{0, 1}));

  ContractedGraph cg(g, false);
  const std::vector<double> w{2.0, -0.5};
  cg.update_weights(w);
  ASSERT_EQ(cg.reduced_weights().size(), 1u);
  EXPECT_DOUBLE_EQ(cg.reduced_weights()[0], 1.5);
}

TEST(BuildClosureGraph, OneActivityTwoModesTwoPeriods) {
  GpspInstance inst(2, 1, 1);
  inst.set_capacity(0, 1, 1.0);
  inst.set_capacity(0, 2, 1.0);
  Activity act;
  act.modes.push_back({1, {1.0}});
  act.modes.push_back({1, {1.0}});
  inst.add_activity(std::move(act));
  const GpcpModel model = build_gpcp(inst);
  const ClosureGraph g = build_closure_graph(model.problem);
  EXPECT_EQ(g.num_nodes, 4);
  EXPECT_EQ(g.arcs.size(), 3u);
}

TEST(BuildClosureGraph, FixingsPropagateAlongArcs) {
  // 0 -> 1 -> 2, 3 -> 2; z_1 = 1 forces z_2, z_3 = 0 forces nothing upstream.
  const Arcs arcs{{0, 1}, {1, 2}, {3, 2}};
  const std::vector<Fixing> fixings{{1, 1}, {3, 0}};
  const ClosureGraph g = build_closure_graph(4, arcs, fixings);
  EXPECT_FALSE(g.infeasible);
  EXPECT_EQ(g.forced, (std::vector<signed char>{-1, 1, 1, 0}));
  EXPECT_EQ(g.num_nodes, 1);
  EXPECT_TRUE(g.arcs.empty());
}

TEST(BuildClosureGraph, ConflictingFixingsAreInfeasible) {
  const Arcs arcs{{0, 1}};
  const std::vector<Fixing> fixings{{0, 1}, {1, 0}};
  const ClosureGraph g = build_closure_graph(2, arcs, fixings);
  EXPECT_TRUE(g.infeasible);
  const ContractedGraph cg(g, true);
  const ClosureResult r = max_closure(cg);
  EXPECT_FALSE(r.feasible);
}

// a -> b -> c is contractible once a and c carry extra arcs.
ContractedGraph three_path(const std::vector<double>& abc) {
  // a=0 b=1 c=2 d=3 e=4
  const Arcs arcs{{0, 1}, {1, 2}, {0, 3}, {4, 2}};
  ContractedGraph cg = contract_paths(build_closure_graph(5, arcs));
  cg.update_weights(std::vector<double>{abc[0], abc[1], abc[2], 0.0, 0.0});
  return cg;
}

TEST(ContractPaths, ThreePathPositiveTail) {
  const ContractedGraph cg = three_path({2, -1, 3});
  ASSERT_EQ(cg.paths().size(), 1u);
  const ContractedPath& p = cg.paths()[0];
  EXPECT_EQ(p.first, 0);
  EXPECT_EQ(p.last, 2);
  EXPECT_EQ(p.internal, (std::vector<int>{1}));
  // Suffixes that exclude v(1): {-1 + 3, 3}; the best starts at position 3.
  EXPECT_EQ(p.split, 3);
  EXPECT_EQ(cg.num_nodes(), 4);
  EXPECT_DOUBLE_EQ(cg.reduced_weights()[cg.reduced_of()[2]], 3.0);
  EXPECT_DOUBLE_EQ(cg.reduced_weights()[cg.reduced_of()[0]], 1.0);
}

TEST(ContractPaths, ThreePathNegativeHead) {
  const ContractedGraph cg = three_path({-5, -1, 3});
  const ContractedPath& p = cg.paths()[0];
  EXPECT_EQ(p.split, 3);
  EXPECT_DOUBLE_EQ(cg.reduced_weights()[cg.reduced_of()[2]], 3.0);
  EXPECT_DOUBLE_EQ(cg.reduced_weights()[cg.reduced_of()[0]], -6.0);
}

TEST(ContractPaths, WholePathGainStaysWithHead) {
  // Selecting the tail alone must not earn v(1)'s weight: v(1) may have
  // other successors that would then be skipped.
  const Arcs arcs{{0, 1}, {1, 2}, {0, 3}, {4, 2}};
  ContractedGraph cg = contract_paths(build_closure_graph(5, arcs));
  const std::vector<double> w{10.0, -1.0, 3.0, -20.0, 0.0};
  cg.update_weights(w);
  const ClosureResult r = max_closure(cg);
  EXPECT_DOUBLE_EQ(r.value, brute_force_closure(5, arcs, w));
  EXPECT_DOUBLE_EQ(r.value, 3.0);
}

TEST(ContractPaths, LongerPathSplit) {
  // a=0 -> b=1 -> c=2 -> d=3 with extra arcs on a and d.
  const Arcs arcs{{0, 1}, {1, 2}, {2, 3}, {0, 4}, {5, 3}};
  ContractedGraph cg = contract_paths(build_closure_graph(6, arcs));
  cg.update_weights(std::vector<double>{1, -2, 5, 3, 0, 0});
  const ContractedPath& p = cg.paths()[0];
  EXPECT_EQ(p.internal, (std::vector<int>{1, 2}));
  EXPECT_EQ(p.split, 3);
  EXPECT_DOUBLE_EQ(p.suffix_gain, 5.0);
  EXPECT_DOUBLE_EQ(cg.reduced_weights()[cg.reduced_of()[3]], 8.0);
  EXPECT_DOUBLE_EQ(cg.reduced_weights()[cg.reduced_of()[0]], -1.0);
}

TEST(ContractPaths, NoSimpleVerticesLeavesGraphUnchanged) {
  const Arcs arcs{{0, 2}, {0, 3}, {1, 2}, {1, 3}};
  const ContractedGraph cg = contract_paths(build_closure_graph(4, arcs));
  EXPECT_TRUE(cg.paths().empty());
  EXPECT_EQ(cg.num_nodes(), 4);
  EXPECT_EQ(cg.arcs(), cg.base().arcs);
}

TEST(ContractPaths, UnchangedWeightsGiveIdenticalSplits) {
  ContractedGraph cg = three_path({2, -1, 3});
  const auto before = cg.paths();
  cg.update_weights(std::vector<double>(cg.variable_weights()));
  ASSERT_EQ(cg.paths().size(), before.size());
  EXPECT_EQ(cg.paths()[0].split, before[0].split);
  EXPECT_EQ(cg.paths()[0].suffix_gain, before[0].suffix_gain);
}

TEST(ContractPaths, AllZeroWeightsTieToLowestSplit) {
  const Arcs arcs{{0, 1}, {1, 2}, {2, 3}, {0, 4}, {5, 3}};
  ContractedGraph cg = contract_paths(build_closure_graph(6, arcs));
  cg.update_weights(std::vector<double>(6, 0.0));
  EXPECT_EQ(cg.paths()[0].split, 2);
  EXPECT_DOUBLE_EQ(cg.reduced_weights()[cg.reduced_of()[0]], 0.0);
  EXPECT_DOUBLE_EQ(cg.reduced_weights()[cg.reduced_of()[3]], 0.0);
}

TEST(ContractPaths, NegatedWeightsRecomputeSplitByDirectScan) {
  std::mt19937_64 rng(7);
  // Long chain 0 -> 1 -> ... -> 9 with a fan at both ends.
  Arcs arcs;
  for (int i = 0; i + 1 < 10; ++i) arcs.emplace_back(i, i + 1);
  arcs.emplace_back(0, 10);
  arcs.emplace_back(11, 9);
  ContractedGraph cg = contract_paths(build_closure_graph(12, arcs));
  ASSERT_EQ(cg.paths().size(), 1u);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> w = random_weights(rng, 12);
    for (int pass = 0; pass < 2; ++pass) {
      if (pass == 1) {
        for (int i = 0; i < 10; ++i) w[i] = -w[i];
      }
      cg.update_weights(w);
      int expected_split = 10;
      double best = 0.0;
      for (int j = 2; j <= 9; ++j) {  // positions are 1-based, v(j) = node j-1
        double sum = 0.0;
        for (int i = j; i <= 9; ++i) sum += w[i - 1];
        if (sum > best || (sum == best && j < expected_split)) {
          best = sum;
          expected_split = j;
        }
      }
      EXPECT_EQ(cg.paths()[0].split, expected_split);
      EXPECT_DOUBLE_EQ(cg.paths()[0].suffix_gain, best);
    }
  }
}

TEST(ContractPaths, WeightSizeMismatchThrows) {
  ContractedGraph cg = three_path({1, 1, 1});
  EXPECT_THROW(cg.update_weights(std::vector<double>(3, 0.0)), std::invalid_argument);
}

TEST(MaxClosure, PositiveTailPullsWholeArc) {
  const Arcs arcs{{0, 1}};
  ContractedGraph cg = contract_paths(build_closure_graph(2, arcs));
  cg.update_weights(std::vector<double>{1.0, -0.5});
  const ClosureResult r = max_closure(cg);
  EXPECT_EQ(r.selection, (std::vector<char>{1, 1}));
  EXPECT_DOUBLE_EQ(r.value, 0.5);
}

TEST(MaxClosure, AllNegativeGivesEmptyClosure) {
  const Arcs arcs{{0, 1}, {1, 2}};
  ContractedGraph cg = contract_paths(build_closure_graph(3, arcs));
  cg.update_weights(std::vector<double>{-1.0, -2.0, -0.25});
  const ClosureResult r = max_closure(cg);
  EXPECT_EQ(r.selection, (std::vector<char>{0, 0, 0}));
  EXPECT_DOUBLE_EQ(r.value, 0.0);
}

TEST(MaxClosure, ForcedNodesContributeConstant) {
  const Arcs arcs{{0, 1}, {1, 2}};
  const std::vector<Fixing> fixings{{1, 1}};
  ContractedGraph cg = contract_paths(build_closure_graph(3, arcs, fixings));
  const std::vector<double> w{-1.0, -2.0, -0.25};
  cg.update_weights(w);
  const ClosureResult r = max_closure(cg);
  EXPECT_EQ(r.selection, (std::vector<char>{0, 1, 1}));
  EXPECT_DOUBLE_EQ(r.value, brute_force_closure(3, arcs, w, fixings));
}

TEST(MaxClosure, RandomTwelveNodeGraphsMatchBruteForce) {
  std::mt19937_64 rng(20240607);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 12;
    const bool cycles = trial % 4 == 0;
    const Arcs arcs = random_arcs(rng, n, trial % 3 == 0 ? 0.12 : 0.25, cycles);
    std::vector<Fixing> fixings;
    if (trial % 5 == 0) fixings.push_back({static_cast<int>(rng() % n), static_cast<int>(rng() % 2)});
    const ClosureGraph base = build_closure_graph(n, arcs, fixings);
    ContractedGraph plain(base, false);
    ContractedGraph contracted(base, true);
    WarmState warm;
    for (int round = 0; round < 3; ++round) {
      const std::vector<double> w = random_weights(rng, n);
      const double expected = brute_force_closure(n, arcs, w, fixings);
      plain.update_weights(w);
      contracted.update_weights(w);
      const ClosureResult a = max_closure(plain);
      const ClosureResult b = max_closure(contracted);
      const ClosureResult c = max_closure(contracted, &warm);
      if (base.infeasible) {
        EXPECT_EQ(expected, -std::numeric_limits<double>::infinity());
        EXPECT_FALSE(a.feasible);
        continue;
      }
      for (const ClosureResult* r : {&a, &b, &c}) {
        ASSERT_TRUE(is_closure(r->selection, arcs)) << "trial " << trial;
        for (const Fixing& f : fixings) EXPECT_EQ(r->selection[f.index], f.value);
        EXPECT_EQ(r->value, expected) << "trial " << trial;
        EXPECT_EQ(r->value, selection_value(r->selection, w));
      }
      EXPECT_EQ(b.selection, c.selection);
    }
  }
}

TEST(MaxClosure, WarmAndColdAgreeOverWeightSequences) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 150 + trial * 10;
    const Arcs arcs = random_arcs(rng, n, 3.0 / n, trial % 2 == 0);
    ContractedGraph cg = contract_paths(build_closure_graph(n, arcs));
    WarmState warm;
    std::vector<double> w = random_weights(rng, n);
    for (int round = 0; round < 30; ++round) {
      // Small drifts mimic successive dual updates.
      for (int k = 0; k < n / 5; ++k) w[rng() % n] = random_weights(rng, 1)[0];
      cg.update_weights(w);
      const ClosureResult cold = max_closure(cg);
      const ClosureResult hot = max_closure(cg, &warm);
      ASSERT_EQ(cold.value, hot.value) << "trial " << trial << " round " << round;
      EXPECT_EQ(cold.selection, hot.selection);
      EXPECT_TRUE(is_closure(hot.selection, arcs));
    }
    EXPECT_TRUE(warm.attached_to(cg));
  }
}

TEST(MaxClosure, WarmStateReattachesToNewGraph) {
  const Arcs first{{0, 1}};
  const Arcs second{{1, 0}};
  ContractedGraph a = contract_paths(build_closure_graph(2, first));
  ContractedGraph b = contract_paths(build_closure_graph(2, second));
  const std::vector<double> w{1.0, -0.5};
  a.update_weights(w);
  b.update_weights(w);
  WarmState warm;
  EXPECT_DOUBLE_EQ(max_closure(a, &warm).value, 0.5);
  EXPECT_DOUBLE_EQ(max_closure(b, &warm).value, 1.0);
  EXPECT_TRUE(warm.attached_to(b));
}

TEST(MaxClosure, FractionalWeightsStayConsistent) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 10;
    const Arcs arcs = random_arcs(rng, n, 0.3, false);
    ContractedGraph cg = contract_paths(build_closure_graph(n, arcs));
    WarmState warm;
    for (int round = 0; round < 3; ++round) {
      std::vector<double> w(n);
      for (double& x : w) x = dist(rng);
      cg.update_weights(w);
      const ClosureResult r = max_closure(cg, &warm);
      EXPECT_TRUE(is_closure(r.selection, arcs));
      EXPECT_NEAR(r.value, brute_force_closure(n, arcs, w), 1e-9);
    }
  }
}

TEST(MaxClosure, PricerMatchesBruteForceOnPrograms) {
  std::mt19937_64 rng(17);
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    RandomGpcpOptions opt;
    opt.max_general_rows = 0;
    const GpcpInstance g = random_gpcp(seed, opt);
    for (const bool contract : {false, true}) {
      ClosurePricer pricer(g, {contract, true});
      for (int round = 0; round < 3; ++round) {
        const std::vector<double> w = random_weights(rng, g.n);
        const ClosureResult r = pricer.price(w);
        EXPECT_EQ(r.value, brute_force_closure(g.n, g.arcs, w, g.bound_fixings));
      }
    }
  }
}

TEST(MaxClosure, DimacsDumpListsTerminalAndInternalArcs) {
  const Arcs arcs{{0, 1}};
  ContractedGraph cg = contract_paths(build_closure_graph(2, arcs));
  cg.update_weights(std::vector<double>{1.0, -0.5});
  std::ostringstream out;
  write_dimacs(cg, out);
  const std::string text = out.str();
  EXPECT_NE(text.find("p max 4 3"), std::string::npos);
  EXPECT_NE(text.find("a 3 1 1"), std::string::npos);
  EXPECT_NE(text.find("a 2 4 0.5"), std::string::npos);
  EXPECT_NE(text.find("a 1 2 "), std::string::npos);
}

TEST(MinCutSolver, ZeroCapacitiesGiveMaximalSourceSide) {
  const std::vector<std::pair<int, int>> arcs{{0, 1}};
  MinCutSolver solver(2, arcs);
  std::vector<char> side;
  const std::vector<double> zero(2, 0.0);
  solver.solve(zero, zero, false, &side);
  EXPECT_EQ(side, (std::vector<char>{1, 1}));
}

}  // namespace
}  // namespace schedbound
