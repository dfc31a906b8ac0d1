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

#include "schedbound/io.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "schedbound/generators.h"
#include "test_util.h"

namespace schedbound {
namespace {

constexpr const char* kMinimal = R"(# one activity
HEADER
1 1 1 1
CAPACITY
1 * 2
ACTIVITY
1 1 1 inf 1
1 1
PROFIT
1 1 1 3.5
PRECEDENCE
)";

TEST(ParseNative, MinimalFile) {
  const GpspInstance inst = parse_native(kMinimal);
  EXPECT_EQ(inst.num_activities(), 1);
  EXPECT_EQ(inst.horizon(), 1);
  EXPECT_EQ(inst.num_resources(), 1);
  EXPECT_EQ(inst.profit(0, 1, 1), 3.5);
  EXPECT_FALSE(inst.activity(0).has_due_date());
}

TEST(ParseNative, PrecedenceListsAndDefaultProfits) {
  const GpspInstance inst = parse_native(R"(HEADER
4 1 2 2
CAPACITY
1 * 1
1 3 0.5
ACTIVITY
1 1 1 4 1
2 1
2 2 2 inf 2
1 1
3 0.5
PROFIT
2 2 3 -1
PRECEDENCE
1 2 2
)");
  ASSERT_EQ(inst.num_clusters(), 2);
  EXPECT_EQ(inst.predecessors(0).size(), 0u);
  ASSERT_EQ(inst.predecessors(1).size(), 1u);
  EXPECT_EQ(inst.predecessors(1)[0].predecessor, 0);
  EXPECT_EQ(inst.predecessors(1)[0].lag, 2);
  EXPECT_EQ(inst.capacity(0, 3), 0.5);
  EXPECT_EQ(inst.capacity(0, 4), 1.0);
  EXPECT_EQ(inst.activity(1).num_modes(), 2);
  EXPECT_EQ(inst.duration(1, 2), 3);
  EXPECT_EQ(inst.profit(1, 2, 3), -1.0);
  EXPECT_EQ(inst.profit(1, 1, 3), 0.0);
  EXPECT_EQ(inst.profit(0, 1, 1), 0.0);
}

TEST(ParseNative, SyntaxErrorCarriesLine) {
  try {
    parse_native("HEADER\n1 1 1 1\nCAPACITY\n1 * two\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4);
  }
}

TEST(ParseNative, MissingModeLineIsSyntaxError) {
  EXPECT_THROW(parse_native("HEADER\n1 1 1 1\nCAPACITY\n1 * 1\nACTIVITY\n1 1 1 inf 2\n1 1\n"),
               ParseError);
}

TEST(ParseNative, SemanticErrorsBecomeDiagnostics) {
  try {
    parse_native("HEADER\n6 1 1 2\nCAPACITY\n1 * 1\nACTIVITY\n1 1 5 3 1\n1 1\n");
    FAIL() << "expected InvalidInstanceError";
  } catch (const InvalidInstanceError& e) {
    EXPECT_TRUE(testing::has_message(e.diagnostics(), "window inverted"));
    EXPECT_TRUE(testing::has_message(e.diagnostics(), "empty cluster"));
  }
}

TEST(ParseNative, UnsetCapacityIsDiagnosed) {
  EXPECT_THROW(parse_native("HEADER\n2 1 1 1\nCAPACITY\n1 1 1\nACTIVITY\n1 1 1 inf 1\n1 1\n"),
               InvalidInstanceError);
}

TEST(WriteNative, RoundTripIsIdentityOnCanonicalText) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const GpspInstance inst = random_gpsp(seed);
    const std::string text = write_native(inst);
    const GpspInstance back = parse_native(text);
    EXPECT_EQ(write_native(back), text) << "seed " << seed;
    ASSERT_EQ(back.num_activities(), inst.num_activities());
    for (int a = 0; a < inst.num_activities(); ++a) {
      for (int m = 1; m <= inst.activity(a).num_modes(); ++m) {
        for (int t = 1; t <= inst.horizon(); ++t) {
          EXPECT_EQ(back.profit(a, m, t), inst.profit(a, m, t));
        }
      }
    }
  }
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(5.0), "5");
  EXPECT_EQ(format_double(-0.25), "-0.25");
  EXPECT_EQ(format_double(0.1), "0.1");
}

constexpr const char* kSmallSm = R"(************************************************************************
file with basedata            : tiny.bas
initial value random generator: 1
************************************************************************
projects                      :  1
jobs (incl. supersource/sink ):  4
horizon                       :  7
RESOURCES
  - renewable                 :  1   R
  - nonrenewable              :  0   N
  - doubly constrained        :  0   D
************************************************************************
PROJECT INFORMATION:
pronr.  #jobs rel.date duedate tardcost  MPM-Time
    1      2      0        3        1        3
************************************************************************
PRECEDENCE RELATIONS:
jobnr.    #modes  #successors   successors
   1        1          2           2   3
   2        1          1           4
   3        1          1           4
   4        1          0
************************************************************************
REQUESTS/DURATIONS:
jobnr. mode duration  R 1
------------------------------------------------------------------------
  1      1     0       0
  2      1     3       2
  3      1     2       2
  4      1     0       0
************************************************************************
RESOURCEAVAILABILITIES:
  R 1
    3
************************************************************************
)";

TEST(ParsePsplib, SmallProject) {
  const GpspInstance inst = parse_psplib_sm(kSmallSm);
  ASSERT_EQ(inst.num_activities(), 4);
  EXPECT_EQ(inst.num_resources(), 1);
  // Jobs 2 and 3 cannot overlap: serial makespan 5, sink starts in period 6.
  EXPECT_EQ(inst.horizon(), 6);
  EXPECT_EQ(inst.duration(0, 1), 0);
  EXPECT_EQ(inst.usage(0, 3, 1), 0.0);
  ASSERT_EQ(inst.predecessors(3).size(), 2u);
  EXPECT_EQ(inst.predecessors(3)[0].lag, 3);
  EXPECT_EQ(inst.predecessors(3)[1].lag, 2);
  for (int a = 0; a < 4; ++a) EXPECT_EQ(inst.activity(a).due, inst.horizon());
  EXPECT_EQ(inst.profit(3, 1, 1), 0.0);
  EXPECT_EQ(inst.profit(3, 1, 6), -5.0);
  EXPECT_EQ(inst.profit(1, 1, 6), 0.0);
  EXPECT_TRUE(validate_instance(inst).empty());
}

TEST(ParsePsplib, MalformedRowReportsLine) {
  std::string broken = kSmallSm;
  broken.replace(broken.find("  3      1     2       2"), 24, "  3      1     x       2");
  try {
    parse_psplib_sm(broken);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 29);
  }
}

// Counts read with a regex scanner that shares no code with the parser.
struct ScannedSm {
  int jobs = 0;
  int renewable = 0;
  std::vector<int> durations;
  std::vector<std::vector<int>> requests;
  std::vector<std::vector<int>> successors;
};

ScannedSm scan_sm(const std::string& text) {
  ScannedSm s;
  std::smatch m;
  std::regex jobs_re(R"(jobs \(incl\. supersource/sink \)\s*:\s*(\d+))");
  std::regex res_re(R"(- renewable\s*:\s*(\d+))");
  if (std::regex_search(text, m, jobs_re)) s.jobs = std::stoi(m[1]);
  if (std::regex_search(text, m, res_re)) s.renewable = std::stoi(m[1]);
  std::istringstream in(text);
  std::string line;
  int mode = 0;
  while (std::getline(in, line)) {
    if (line.rfind("PRECEDENCE RELATIONS", 0) == 0) mode = 1;
    else if (line.rfind("REQUESTS/DURATIONS", 0) == 0) mode = 2;
    else if (line.rfind("RESOURCEAVAILABILITIES", 0) == 0) mode = 3;
    const auto first = line.find_first_not_of(' ');
    if (first == std::string::npos || !std::isdigit(static_cast<unsigned char>(line[first]))) {
      continue;
    }
    std::istringstream f(line);
    std::vector<int> v;
    for (int x; f >> x;) v.push_back(x);
    if (mode == 1) s.successors.emplace_back(v.begin() + 3, v.end());
    if (mode == 2) {
      s.durations.push_back(v[2]);
      s.requests.emplace_back(v.begin() + 3, v.end());
    }
  }
  return s;
}

TEST(ParsePsplib, GeneratedFilesMatchIndependentScanner) {
  std::vector<std::string> texts;
  const std::filesystem::path dir = testing::data_path("j30gen");
  if (std::filesystem::exists(dir)) {
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (entry.path().extension() != ".sm") continue;
      std::ifstream in(entry.path());
      texts.emplace_back(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
  }
  for (std::uint64_t seed = 1; seed <= 5; ++seed) texts.push_back(generate_psplib_sm(seed));
  for (const std::string& text : texts) {
    const ScannedSm scanned = scan_sm(text);
    const GpspInstance inst = parse_psplib_sm(text);
    EXPECT_EQ(scanned.jobs, 32);
    EXPECT_EQ(scanned.renewable, 4);
    ASSERT_EQ(inst.num_activities(), scanned.jobs);
    EXPECT_EQ(inst.num_clusters(), scanned.jobs);
    EXPECT_EQ(inst.num_resources(), scanned.renewable);
    for (int a : {0, scanned.jobs - 1}) {
      EXPECT_EQ(inst.duration(a, 1), 0);
      for (int r = 0; r < inst.num_resources(); ++r) EXPECT_EQ(inst.usage(r, a, 1), 0.0);
    }
    for (int a = 0; a < scanned.jobs; ++a) {
      EXPECT_EQ(inst.duration(a, 1), scanned.durations[a]);
      for (int r = 0; r < scanned.renewable; ++r) {
        EXPECT_EQ(inst.usage(r, a, 1), scanned.requests[a][r]);
      }
    }
    size_t arcs = 0;
    for (int c = 0; c < inst.num_clusters(); ++c) {
      for (const Precedence& p : inst.predecessors(c)) {
        EXPECT_EQ(p.lag, scanned.durations[p.predecessor]);
        ++arcs;
      }
    }
    size_t scanned_arcs = 0;
    for (const auto& s : scanned.successors) scanned_arcs += s.size();
    EXPECT_EQ(arcs, scanned_arcs);
    EXPECT_TRUE(validate_instance(inst).empty());
    const GreedyResult g = greedy_toposort_schedule(inst);
    ASSERT_TRUE(g.feasible);
    EXPECT_EQ(g.completion, inst.horizon());
  }
}

}  // namespace
}  // namespace schedbound
