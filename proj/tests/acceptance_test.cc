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

// Acceptance suite: one PASS/FAIL line per criterion AC1..AC9. Arguments
// restrict the run to the named criteria; AC6 and AC7 then aggregate over
// whichever engine runs took place.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cli.h"
#include "schedbound/closure.h"
#include "schedbound/colgen.h"
#include "schedbound/generators.h"
#include "schedbound/gpcp.h"
#include "schedbound/io.h"
#include "schedbound/oracle.h"
#include "schedbound/report.h"

namespace {

namespace fs = std::filesystem;
using namespace schedbound;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string data_path(const std::string& name) {
  return std::string(SCHEDBOUND_DATA_DIR) + "/" + name;
}

double relative_error(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

double geometric_mean(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += std::log(v);
  return values.empty() ? 0.0 : std::exp(sum / static_cast<double>(values.size()));
}

// First failure wins; later checks still run so counters stay complete.
class Verdict {
 public:
  void require(bool ok, const std::string& why) {
    if (!ok && failure_.empty()) failure_ = why;
  }
  bool passed() const { return failure_.empty(); }
  const std::string& failure() const { return failure_; }

 private:
  std::string failure_;
};

struct InvariantTotals {
  InvariantCounters counters;
  int runs = 0;
  std::vector<std::string> fractional_failures;  // from the final master points

  void add(const BoundReport& r) {
    InvariantCounters& c = counters;
    const InvariantCounters& d = r.invariants;
    c.refine_checks += d.refine_checks;
    c.refine_violations += d.refine_violations;
    c.removal_checks += d.removal_checks;
    c.removal_violations += d.removal_violations;
    c.coarsify_checks += d.coarsify_checks;
    c.coarsify_violations += d.coarsify_violations;
    c.fractional_checks += d.fractional_checks;
    c.fractional_violations += d.fractional_violations;
    c.monotone_checks += d.monotone_checks;
    c.monotone_violations += d.monotone_violations;
    c.span_checks += d.span_checks;
    c.span_violations += d.span_violations;
    ++runs;
  }
};

struct Context {
  InvariantTotals bz;      // BZ runs of AC1 and AC2, for AC6
  InvariantTotals engines; // every engine run of AC1 to AC3, for AC7
  int fractional_final_checks = 0;
  std::vector<std::pair<std::string, int>> bz_iterations;  // AC2 instances
};

// The instance BZ actually solves: general easy-block rows become side rows.
GpcpInstance bz_view(const GpcpInstance& g) {
  return g.precedence_only() ? g : with_general_rows_as_side(g);
}

void record_bz(Context* ctx, const GpcpInstance& solved, const BoundReport& r,
               const std::string& tag) {
  ctx->bz.add(r);
  ctx->engines.add(r);
  if (r.z.empty()) return;
  ++ctx->fractional_final_checks;
  const FractionalCheck f = fractional_values_check(r.z, solved.r2(), solved.num_u);
  if (!f.passed) {
    ctx->bz.fractional_failures.push_back(tag + ": " + std::to_string(f.count) + " > " +
                                          std::to_string(f.limit));
  }
}

struct Outcome {
  bool passed = false;
  std::string detail;
};

// ---------------------------------------------------------------------------

double cli_bound(const std::vector<std::string>& args, Verdict* v) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  v->require(code == 0, "cli " + args[2] + " " + args[3] + " exit " + std::to_string(code));
  std::istringstream in(out.str());
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("bound: ", 0) == 0) return std::stod(line.substr(7));
  }
  v->require(false, "cli printed no bound");
  return std::nan("");
}

Outcome ac1_worked_example(Context* ctx) {
  Verdict v;
  const auto start = Clock::now();
  const std::string file = data_path("example.gpcp");

  // Exact oracles.
  const GpcpInstance g = load_gpcp_file(file);
  const BoundChain chain = bound_chain(g);
  v.require(chain.ip.feasible && chain.ip.value == 0, "Z^IP != 0");
  v.require(chain.dw.optimal() && chain.dw.value == Rational(5, 4), "Z^DW != 5/4");
  v.require(chain.lin.optimal() && chain.lin.value == Rational(3, 2), "Z^LIN != 3/2");
  v.require(zlin_bound(g).value == Rational(3, 2), "zlin_bound != 3/2");
  v.require(chain.lp.optimal() && chain.lp.value == 2, "Z^LP != 2");

  // Floating engines through the command line.
  const double dw = cli_bound({"solve", file, "--alg", "dw"}, &v);
  const double lin = cli_bound({"solve", file, "--alg", "gcg", "--no-early-stop"}, &v);
  const double lp = cli_bound({"solve", file, "--alg", "lp"}, &v);
  const double bz = cli_bound({"solve", file, "--alg", "bz"}, &v);
  v.require(std::abs(dw - 1.25) <= 1e-9, "dw " + fmt(dw, 17));
  v.require(std::abs(lin - 1.5) <= 1e-9, "gcg " + fmt(lin, 17));
  v.require(std::abs(lp - 2.0) <= 1e-9, "lp " + fmt(lp, 17));
  v.require(std::abs(bz - 2.0) <= 1e-9, "bz " + fmt(bz, 17));
  std::ostringstream out, err;
  v.require(cli::run({"verify", "--example"}, out, err) == 0, "verify --example failed");

  // Engine runs feeding the invariant sweeps.
  ColgenOptions lin_options;
  lin_options.stop_on_crossing = false;
  ctx->engines.add(dw_solve(g));
  ctx->engines.add(gcg_solve(g, lin_options));
  ctx->engines.add(gcg_solve(g));
  const GpcpInstance solved = bz_view(g);
  record_bz(ctx, solved, bz_solve(solved), "example");

  const double elapsed = seconds_since(start);
  v.require(elapsed < 1.0, "took " + fmt(elapsed) + " s");
  return {v.passed(), v.passed() ? "IP 0, DW 1.25, LIN 1.5, LP 2 exact; engines within 1e-9; " +
                                       fmt(elapsed * 1e3, 3) + " ms"
                                 : v.failure()};
}

Outcome ac2_bz_equals_lp(Context* ctx) {
  Verdict v;
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(data_path("j30gen"))) {
    if (entry.path().extension() == ".sm") files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  v.require(files.size() >= 20, "only " + std::to_string(files.size()) + " instances");
  double worst_error = 0.0, slowest = 0.0;
  for (const std::string& file : files) {
    const auto start = Clock::now();
    const cli::LoadedProblem p = cli::load_problem(file);
    cli::RunConfig config;
    config.alg = "bz";
    const BoundReport bz = cli::run_algorithm(config, p);
    const double lp = direct_lp_bound(p.model.problem);
    const double elapsed = seconds_since(start);
    slowest = std::max(slowest, elapsed);
    record_bz(ctx, bz_view(p.model.problem), bz, p.name);
    ctx->bz_iterations.emplace_back(file, bz.iterations);
    const double error = relative_error(bz.bound, lp);
    worst_error = std::max(worst_error, error);
    v.require(bz.status == SolveStatus::kConverged, p.name + " bz " + to_string(bz.status));
    v.require(error <= 1e-6, p.name + " relative error " + fmt(error));
    v.require(elapsed <= 300.0, p.name + " took " + fmt(elapsed) + " s");
    std::cout << "  " << p.name << " bz " << format_double(bz.bound) << " lp "
              << format_double(lp) << " its " << bz.iterations << " " << fmt(elapsed, 3)
              << " s\n"
              << std::flush;
  }
  return {v.passed(), v.passed() ? std::to_string(files.size()) +
                                       " instances; worst relative error " + fmt(worst_error) +
                                       "; slowest " + fmt(slowest, 3) + " s"
                                 : v.failure()};
}

Outcome ac3_bound_chain(Context* ctx) {
  Verdict v;
  int checked = 0, skipped = 0;
  ColgenOptions lin_options;
  lin_options.stop_on_crossing = false;
  for (std::uint64_t seed = 1; checked < 200; ++seed) {
    const GpcpInstance g = random_gpcp(seed);
    v.require(g.n <= 16, "seed " + std::to_string(seed) + " has n " + std::to_string(g.n));
    const BoundChain chain = bound_chain(g);
    if (!chain.ip.feasible) {
      ++skipped;
      continue;
    }
    ++checked;
    const std::string tag = "seed " + std::to_string(seed);
    v.require(chain.ordered(), tag + " chain " + chain.ip.value.get_str() + " " +
                                   chain.dw.value.get_str() + " " + chain.lin.value.get_str() +
                                   " " + chain.lp.value.get_str());
    // Engine runs feed the invariant sweep; they must also match the oracles.
    const double scale = 1e-7 * std::max(1.0, std::abs(chain.lp.approx()));
    const BoundReport dw = dw_solve(g);
    const BoundReport lin = gcg_solve(g, lin_options);
    const GpcpInstance solved = bz_view(g);
    const BoundReport bz = bz_solve(solved);
    ctx->engines.add(dw);
    ctx->engines.add(lin);
    ctx->engines.add(bz);
    v.require(std::abs(dw.bound - chain.dw.approx()) <= scale, tag + " dw_solve off oracle");
    v.require(std::abs(lin.bound - chain.lin.approx()) <= scale, tag + " gcg_solve off oracle");
    v.require(std::abs(bz.bound - chain.lp.approx()) <= scale, tag + " bz_solve off oracle");
  }
  return {v.passed(), v.passed() ? std::to_string(checked) +
                                       " instances ordered exactly (" + std::to_string(skipped) +
                                       " seeds skipped: integer problem infeasible)"
                                 : v.failure()};
}

using Arcs = std::vector<std::pair<int, int>>;

// Arcs along a random topological order.
Arcs random_dag(std::mt19937_64& rng, int n, double density) {
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::bernoulli_distribution coin(density);
  Arcs arcs;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (coin(rng)) arcs.emplace_back(order[a], order[b]);
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

Outcome ac4_closure_engines() {
  Verdict v;
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> size(1, 12);
  std::uniform_real_distribution<double> density(0.05, 0.5);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = size(rng);
    const ClosureGraph base = build_closure_graph(n, random_dag(rng, n, density(rng)));
    ContractedGraph plain(base, false), contracted(base, true);
    WarmState warm;
    for (int round = 0; round < 3; ++round) {
      const std::vector<double> w = random_weights(rng, n);
      plain.update_weights(w);
      contracted.update_weights(w);
      const OracleResult oracle = enumerate_closures(base, w);
      const ClosureResult cold = max_closure(contracted);
      const ClosureResult hot = max_closure(contracted, &warm);
      const ClosureResult flat = max_closure(plain);
      const std::string tag = "dag " + std::to_string(trial) + " round " + std::to_string(round);
      v.require(Rational(cold.value) == oracle.value, tag + " max_closure != enumeration");
      v.require(hot.value == cold.value && hot.selection == cold.selection,
                tag + " warm != cold");
      v.require(flat.value == cold.value, tag + " contracted != uncontracted");
    }
  }
  // Weight refreshes on larger graphs, as successive pricing rounds see them.
  for (int graph = 0; graph < 5; ++graph) {
    const int n = 200 + 50 * graph;
    const ClosureGraph base = build_closure_graph(n, random_dag(rng, n, 3.0 / n));
    ContractedGraph plain(base, false), contracted(base, true);
    WarmState warm;
    std::vector<double> w = random_weights(rng, n);
    for (int refresh = 0; refresh < 100; ++refresh) {
      for (int k = 0; k < n / 5; ++k) w[rng() % n] = random_weights(rng, 1)[0];
      plain.update_weights(w);
      contracted.update_weights(w);
      const ClosureResult cold = max_closure(contracted);
      const ClosureResult hot = max_closure(contracted, &warm);
      const ClosureResult flat = max_closure(plain);
      const std::string tag = "graph " + std::to_string(graph) + " refresh " +
                              std::to_string(refresh);
      v.require(hot.value == cold.value && hot.selection == cold.selection,
                tag + " warm != cold");
      v.require(flat.value == cold.value, tag + " contracted != uncontracted");
    }
  }
  return {v.passed(), v.passed() ? "1000 DAGs (n <= 12) exact against enumeration; warm = cold "
                                   "and contracted = uncontracted over 5 x 100 refreshes"
                                 : v.failure()};
}

Outcome ac5_identity() {
  Verdict v;
  int trials = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const IdentityCheckResult r = resource_row_identity_check(random_gpsp(seed), 50, seed);
    trials += r.trials;
    v.require(r.passed, "seed " + std::to_string(seed) + ": " + r.message);
    v.require(r.trials == 50, "seed " + std::to_string(seed) + " ran " +
                                  std::to_string(r.trials) + " trials");
  }
  return {v.passed(), v.passed() ? "100 instances x 50 samples, " + std::to_string(trials) +
                                       " exact comparisons"
                                 : v.failure()};
}

Outcome ac6_fractional(const Context& ctx) {
  Verdict v;
  const InvariantCounters& c = ctx.bz.counters;
  v.require(ctx.bz.runs > 0, "no BZ runs recorded");
  v.require(c.fractional_checks > 0, "no master optimum was checked");
  v.require(c.fractional_violations == 0,
            std::to_string(c.fractional_violations) + " master optima over the limit");
  if (!ctx.bz.fractional_failures.empty()) v.require(false, ctx.bz.fractional_failures.front());
  return {v.passed(), v.passed() ? std::to_string(c.fractional_checks) + " master optima over " +
                                       std::to_string(ctx.bz.runs) + " BZ runs, " +
                                       std::to_string(ctx.fractional_final_checks) +
                                       " final points rechecked; 0 violations"
                                 : v.failure()};
}

Outcome ac7_structure(const Context& ctx) {
  Verdict v;
  const InvariantCounters& c = ctx.engines.counters;
  v.require(c.refine_checks > 0, "no refine checked");
  v.require(c.removal_checks > 0, "no DW removal checked");
  v.require(c.refine_violations == 0, std::to_string(c.refine_violations) + " refine violations");
  v.require(c.removal_violations == 0,
            std::to_string(c.removal_violations) + " removal violations");
  v.require(c.coarsify_violations == 0,
            std::to_string(c.coarsify_violations) + " coarsification violations");
  v.require(c.span_violations == 0, std::to_string(c.span_violations) + " span violations");
  v.require(c.monotone_violations == 0,
            std::to_string(c.monotone_violations) + " monotonicity violations");
  return {v.passed(), v.passed() ? std::to_string(c.refine_checks) + " refines, " +
                                       std::to_string(c.removal_checks) + " DW removals, " +
                                       std::to_string(ctx.engines.runs) +
                                       " engine runs; 0 violations"
                                 : v.failure()};
}

// A DW run stopped at the cap needed at least `cap` iterations, so the capped
// counts bound the true geometric mean from below.
constexpr int kDwIterationCap = 2000;

Outcome ac8_iterations(Context* ctx) {
  Verdict v;
  if (ctx->bz_iterations.empty()) {
    return {false, "needs the AC2 runs"};
  }
  std::vector<double> bz, dw;
  int capped = 0;
  for (const auto& [file, bz_its] : ctx->bz_iterations) {
    const cli::LoadedProblem p = cli::load_problem(file);
    cli::RunConfig config;
    config.alg = "dw";
    config.max_iterations = kDwIterationCap;
    const BoundReport r = cli::run_algorithm(config, p);
    v.require(r.status == SolveStatus::kConverged || r.status == SolveStatus::kIterationLimit,
              p.name + " dw " + to_string(r.status));
    if (r.status == SolveStatus::kIterationLimit) ++capped;
    bz.push_back(bz_its);
    dw.push_back(r.iterations);
    std::cout << "  " << p.name << " bz " << bz_its << " dw " << r.iterations
              << (r.status == SolveStatus::kIterationLimit ? " (capped)" : "") << '\n'
              << std::flush;
  }
  const double bz_mean = geometric_mean(bz), dw_mean = geometric_mean(dw);
  v.require(dw_mean >= bz_mean, "dw " + fmt(dw_mean) + " < bz " + fmt(bz_mean));
  return {v.passed(), "geometric means: dw >= " + fmt(dw_mean) + ", bz " + fmt(bz_mean) +
                          ", ratio >= " + fmt(dw_mean / bz_mean) + " (" + std::to_string(capped) +
                          " of " + std::to_string(dw.size()) + " dw runs capped at " +
                          std::to_string(kDwIterationCap) + ")"};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome ac9_determinism() {
  Verdict v;
  const fs::path root = fs::temp_directory_path() / "schedbound_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  std::ostringstream sink, err;
  const auto run = [&](std::vector<std::string> args) {
    const int code = schedbound::cli::run(args, sink, err);
    v.require(code == 0, args[0] + " exit " + std::to_string(code) + ": " + err.str());
  };

  // Same seed twice: identical instance files.
  for (const std::string dir : {"gen_a", "gen_b"}) {
    run({"generate", "--kind", "gpsp", "--count", "3", "--seed", "17", "--out-dir",
         (root / dir).string()});
    run({"generate", "--kind", "sm", "--count", "1", "--seed", "17", "--jobs", "12",
         "--out-dir", (root / dir).string()});
  }
  for (const char* name : {"random_01.gpsp", "random_02.gpsp", "random_03.gpsp", "j30gen_01.sm"}) {
    v.require(slurp(root / "gen_a" / name) == slurp(root / "gen_b" / name),
              std::string(name) + " differs between runs");
  }

  // Same inputs and config twice, serial and concurrent: identical CSV.
  const std::vector<std::string> inputs = {
      data_path("example.gpcp"), data_path("tiny.gpsp"), (root / "gen_a").string(),
      data_path("j30gen/j30gen_04.sm")};
  std::vector<std::string> csvs;
  for (const auto& [name, jobs] : {std::pair{"a.csv", "1"}, std::pair{"b.csv", "2"},
                                   std::pair{"c.csv", "1"}}) {
    std::vector<std::string> args = {"bench", "--alg", "bz,lp,dw", "--max-iters", "500",
                                     "--no-time", "--jobs", jobs, "--out",
                                     (root / name).string()};
    args.insert(args.end(), inputs.begin(), inputs.end());
    run(args);
    csvs.push_back(slurp(root / name));
  }
  v.require(!csvs[0].empty(), "empty CSV");
  v.require(csvs[0] == csvs[1] && csvs[0] == csvs[2], "bench CSV differs between runs");

  // Per-iteration logs as well.
  for (const char* name : {"log_a.csv", "log_b.csv"}) {
    run({"solve", data_path("j30gen/j30gen_04.sm"), "--no-time", "--log", (root / name).string()});
  }
  v.require(slurp(root / "log_a.csv") == slurp(root / "log_b.csv"), "iteration log differs");

  int rows = -1;
  std::istringstream lines(csvs[0]);
  for (std::string line; std::getline(lines, line);) ++rows;
  fs::remove_all(root);
  return {v.passed(), v.passed() ? "generated files, 3 bench runs (" + std::to_string(rows) +
                                       " rows, serial and concurrent) and iteration logs "
                                       "byte-identical"
                                 : v.failure()};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<std::string> only(argv + 1, argv + argc);
  Context ctx;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1", [&] { return ac1_worked_example(&ctx); }},
      {"AC2", [&] { return ac2_bz_equals_lp(&ctx); }},
      {"AC3", [&] { return ac3_bound_chain(&ctx); }},
      {"AC4", [] { return ac4_closure_engines(); }},
      {"AC5", [] { return ac5_identity(); }},
      {"AC6", [&] { return ac6_fractional(ctx); }},
      {"AC7", [&] { return ac7_structure(ctx); }},
      {"AC8", [&] { return ac8_iterations(&ctx); }},
      {"AC9", [] { return ac9_determinism(); }},
  };
  int failed = 0, ran = 0;
  for (const auto& [id, check] : criteria) {
    if (!only.empty() && !only.count(id)) continue;
    ++ran;
    const auto start = Clock::now();
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.passed) ++failed;
    std::cout << id << ' ' << (outcome.passed ? "PASS" : "FAIL") << ' ' << outcome.detail << " ["
              << fmt(seconds_since(start), 3) << " s]\n"
              << std::flush;
  }
  std::cout << (ran - failed) << " of " << ran << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
