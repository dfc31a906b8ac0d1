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

#include "cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "schedbound/generators.h"
#include "schedbound/io.h"
#include "schedbound/oracle.h"
#include "schedbound/report.h"

namespace schedbound::cli {

namespace fs = std::filesystem;

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::set<std::string> split_list(const std::vector<std::string>& items) {
  std::set<std::string> out;
  for (const std::string& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.insert(part);
    }
  }
  return out;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("BZ_SEED"); env != nullptr && *env != '\0') {
    return std::stoull(env);
  }
  return 1;
}

void strip_times(BoundReport* report) {
  report->time_ms = report->master_ms = report->pricing_ms = 0.0;
  for (IterationRecord& r : report->log) r.master_ms = r.pricing_ms = 0.0;
}

std::string fixed3(double v) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(3);
  s << v;
  return s.str();
}

void print_report(const std::string& instance, const BoundReport& r, std::ostream& out) {
  out << "instance: " << instance << '\n'
      << "algorithm: " << r.algorithm << '\n'
      << "status: " << to_string(r.status) << '\n'
      << "bound: " << format_double(r.bound) << '\n'
      << "bound_type: " << to_string(r.bound_type) << '\n'
      << "iterations: " << r.iterations << '\n'
      << "columns: " << r.peak_columns << " peak, " << r.final_columns << " final\n"
      << "time_ms: " << fixed3(r.time_ms) << '\n';
  if (r.invariants.violations() > 0) {
    out << "invariant_violations: " << r.invariants.violations() << '\n';
  }
  if (!r.message.empty()) out << "message: " << r.message << '\n';
}

// Flags shared by solve and bench.
void add_run_flags(CLI::App* cmd, RunConfig* config, std::vector<std::string>* enable,
                   std::vector<std::string>* disable, std::string* fixings) {
  cmd->add_option("--tol", config->tolerance, "Relative termination tolerance")
      ->capture_default_str();
  cmd->add_option("--k-step", config->k_step, "Coarsification window (default per file type)");
  cmd->add_option("--enable", *enable, "Speed-ups to enable: phs,pc,mhs,stcol")
      ->delimiter(',');
  cmd->add_option("--disable", *disable, "Speed-ups to disable: phs,pc,mhs,stcol")
      ->delimiter(',');
  cmd->add_option("--max-iters", config->max_iterations, "Iteration cap")->capture_default_str();
  cmd->add_option("--time-limit-s", config->time_limit_s, "Wall-clock limit per solve (0: none)");
  cmd->add_flag("!--no-early-stop", config->early_stop,
                "gcg engines: continue past crossing bounds to the linear-hull value");
  cmd->add_option("--fixings", *fixings, "Where fixed variables go: sides or bounds")
      ->check(CLI::IsMember({"sides", "bounds"}))
      ->capture_default_str();
}

std::string finish_config(RunConfig* config, const std::vector<std::string>& enable,
                          const std::vector<std::string>& disable, const std::string& fixings) {
  config->enable = split_list(enable);
  config->disable = split_list(disable);
  config->fixings = fixings == "bounds" ? FixingPlacement::kBounds : FixingPlacement::kSideRows;
  return validate(*config);
}

std::vector<std::string> collect_instances(const std::vector<std::string>& inputs) {
  std::vector<std::string> files;
  for (const std::string& input : inputs) {
    if (fs::is_directory(input)) {
      std::vector<std::string> found;
      for (const auto& entry : fs::directory_iterator(input)) {
        const std::string p = entry.path().string();
        if (entry.is_regular_file() &&
            (ends_with(p, ".sm") || ends_with(p, ".gpsp") || ends_with(p, ".gpcp"))) {
          found.push_back(p);
        }
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(input);
    }
  }
  return files;
}

// ---------------------------------------------------------------------------
// verify

constexpr const char* kExample = R"(n 3
u 0
c -1 2 1
A <= 1.5 1:1 2:1
A <= 0.5 3:1
H <= 0.5 1:-1 2:1
)";

class Checks {
 public:
  explicit Checks(std::ostream& out) : out_(out) {}

  void expect(bool ok, const std::string& name, const std::string& detail = {}) {
    ++total_;
    if (ok) {
      out_ << "PASS " << name << '\n';
    } else {
      ++failed_;
      out_ << "FAIL " << name << (detail.empty() ? "" : ": " + detail) << '\n';
    }
  }
  void near(double value, double expected, double tol, const std::string& name) {
    expect(std::abs(value - expected) <= tol * std::max(1.0, std::abs(expected)), name,
           "got " + format_double(value) + ", expected " + format_double(expected));
  }
  void skip(const std::string& name) { out_ << "SKIP " << name << '\n'; }
  int failed() const { return failed_; }
  int total() const { return total_; }

 private:
  std::ostream& out_;
  int failed_ = 0, total_ = 0;
};

std::string rational_text(const Rational& q) { return q.get_str(); }

// Oracle chain plus engine agreement on an enumerable problem.
void verify_gpcp(const GpcpInstance& g, const std::string& tag, Checks* checks) {
  const BoundChain chain = bound_chain(g);
  if (!chain.ip.feasible) {
    checks->skip(tag + " chain: integer problem infeasible");
    return;
  }
  checks->expect(chain.ordered(), tag + " chain IP <= DW <= LIN <= LP",
                 rational_text(chain.ip.value) + " " + rational_text(chain.dw.value) + " " +
                     rational_text(chain.lin.value) + " " + rational_text(chain.lp.value));
  if (!chain.ordered()) return;
  const double scale = 1e-7;
  const BoundReport dw = dw_solve(g);
  checks->near(dw.bound, chain.dw.approx(), scale, tag + " dw_solve = convex-hull oracle");
  checks->expect(dw.invariants.violations() == 0, tag + " dw invariants");
  ColgenOptions lin;
  lin.stop_on_crossing = false;
  const BoundReport gcg = gcg_solve(g, lin);
  checks->near(gcg.bound, chain.lin.approx(), scale, tag + " gcg_solve = linear-hull oracle");
  const BoundReport early = gcg_solve(g);
  checks->expect(early.bound >= chain.ip.value.get_d() - 1e-7 &&
                     early.bound <= chain.lin.approx() + 1e-7 * std::max(1.0, chain.lin.approx()),
                 tag + " gcg early bound within [IP, LIN]", format_double(early.bound));
  const BoundReport bz = bz_solve(with_general_rows_as_side(g));
  checks->near(bz.bound, chain.lp.approx(), scale, tag + " bz_solve = LP oracle");
  checks->expect(bz.invariants.violations() == 0, tag + " bz invariants");
  checks->near(direct_lp_bound(g), chain.lp.approx(), scale, tag + " direct LP = exact LP");
}

void verify_schedule(const GpspInstance& inst, const std::string& tag, std::uint64_t seed,
                     Checks* checks) {
  const IdentityCheckResult id = resource_row_identity_check(inst, 50, seed);
  checks->expect(id.passed, tag + " resource-row identity", id.message);
  const GpcpModel model = build_gpcp(inst);
  const double xy = direct_lp_bound(inst);
  const double z = direct_lp_bound(model.problem);
  checks->expect(xy == z || std::abs(xy - z) <= 1e-7 * std::max(1.0, std::abs(z)),
                 tag + " assignment LP = cumulative LP",
                 format_double(xy) + " vs " + format_double(z));
  if (std::isfinite(z)) {
    const BoundReport bz = bz_solve(model.problem);
    checks->near(bz.bound, z, 1e-6, tag + " bz_solve = LP");
    checks->expect(bz.invariants.violations() == 0, tag + " bz invariants");
  }
  if (model.problem.n <= 16) verify_gpcp(model.problem, tag, checks);
}

int cmd_verify(bool example, int random_count, std::uint64_t seed,
               const std::vector<std::string>& files, std::ostream& out, std::ostream& err) {
  Checks checks(out);
  if (example) {
    const GpcpInstance g = parse_gpcp(std::string_view(kExample));
    const BoundChain chain = bound_chain(g);
    checks.expect(chain.ip.value == 0, "example Z^IP = 0", rational_text(chain.ip.value));
    checks.expect(chain.dw.value == Rational(5, 4), "example Z^DW = 5/4",
                  rational_text(chain.dw.value));
    checks.expect(chain.lin.value == Rational(3, 2), "example Z^LIN = 3/2",
                  rational_text(chain.lin.value));
    checks.expect(chain.lp.value == 2, "example Z^LP = 2", rational_text(chain.lp.value));
    verify_gpcp(g, "example", &checks);
  }
  for (int i = 0; i < random_count; ++i) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
    verify_gpcp(random_gpcp(s), "gpcp seed " + std::to_string(s), &checks);
    verify_schedule(random_gpsp(s), "gpsp seed " + std::to_string(s), s, &checks);
  }
  for (const std::string& path : files) {
    const std::string tag = fs::path(path).filename().string();
    try {
      const LoadedProblem p = load_problem(path);
      if (p.schedule) {
        verify_schedule(*p.schedule, tag, seed, &checks);
      } else if (p.model.problem.n <= kOracleMaxVars) {
        verify_gpcp(p.model.problem, tag, &checks);
      } else {
        checks.near(bz_solve(with_general_rows_as_side(p.model.problem)).bound,
                    direct_lp_bound(p.model.problem), 1e-6, tag + " bz_solve = LP");
      }
    } catch (const InvalidInstanceError& e) {
      for (const Diagnostic& d : e.diagnostics()) {
        checks.expect(false, tag + " validate", d.location + ": " + d.message);
      }
    } catch (const ParseError& e) {
      checks.expect(false, tag + " parse", e.what());
    } catch (const std::exception& e) {
      err << "error: " << tag << ": " << e.what() << '\n';
      return kExitError;
    }
  }
  out << (checks.failed() == 0 ? "verify: all " : "verify: ")
      << (checks.failed() == 0 ? std::to_string(checks.total()) + " checks passed"
                               : std::to_string(checks.failed()) + " of " +
                                     std::to_string(checks.total()) + " checks failed")
      << '\n';
  return checks.failed() == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------

int cmd_bench(const RunConfig& base, const std::vector<std::string>& algs,
              const std::vector<std::string>& inputs, int jobs, const std::string& out_path,
              bool no_time, std::ostream& out, std::ostream& err) {
  const std::vector<std::string> files = collect_instances(inputs);
  if (files.empty()) {
    err << "error: no instances found\n";
    return kExitError;
  }
  struct Task {
    std::string file, alg;
  };
  std::vector<Task> tasks;
  for (const std::string& f : files) {
    for (const std::string& a : algs) tasks.push_back({f, a});
  }
  std::vector<BenchRow> rows(tasks.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < tasks.size(); i = next++) {
      const Task& task = tasks[i];
      const std::string name = fs::path(task.file).filename().string();
      RunConfig config = base;
      config.alg = task.alg;
      try {
        const LoadedProblem p = load_problem(task.file, config.fixings);
        rows[i] = make_row(name, task.alg, run_algorithm(config, p), !no_time);
      } catch (const std::exception& e) {
        rows[i] = {name, task.alg, "error", 0.0, 0, 0, 0.0};
      }
    }
  };
  std::vector<std::thread> pool;
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  std::ostringstream csv;
  write_bench_csv(rows, csv);
  if (out_path.empty()) {
    out << csv.str();
  } else {
    std::ofstream file(out_path, std::ios::binary);
    if (!file) {
      err << "error: cannot write " << out_path << '\n';
      return kExitError;
    }
    file << csv.str();
  }
  const std::string baseline = std::find(algs.begin(), algs.end(), "bz") != algs.end() ? "bz" : algs.front();
  write_summary(normalized_means(rows, baseline), baseline, out);
  const bool any_error = std::any_of(rows.begin(), rows.end(),
                                     [](const BenchRow& r) { return r.status == "error"; });
  return any_error ? kExitError : 0;
}

int cmd_generate(const std::string& kind, int count, std::uint64_t seed, int jobs,
                 const std::string& dir, std::ostream& out, std::ostream& err) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    err << "error: cannot create " << dir << ": " << ec.message() << '\n';
    return kExitError;
  }
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
    std::string text, ext;
    if (kind == "sm") {
      PsplibGeneratorOptions o;
      o.jobs = jobs;
      text = generate_psplib_sm(s, o);
      ext = ".sm";
    } else if (kind == "gpsp") {
      text = write_native(random_gpsp(s));
      ext = ".gpsp";
    } else {
      text = write_gpcp(random_gpcp(s));
      ext = ".gpcp";
    }
    char name[64];
    std::snprintf(name, sizeof name, "%s%02d%s", kind == "sm" ? "j30gen_" : "random_", i + 1,
                  ext.c_str());
    const fs::path path = fs::path(dir) / name;
    std::ofstream file(path, std::ios::binary);
    if (!file) {
      err << "error: cannot write " << path.string() << '\n';
      return kExitError;
    }
    file << text;
    out << path.string() << '\n';
  }
  return 0;
}

}  // namespace

FileKind file_kind(const std::string& path) {
  if (ends_with(path, ".sm")) return FileKind::kPsplib;
  if (ends_with(path, ".gpcp")) return FileKind::kGpcp;
  return FileKind::kNative;
}

LoadedProblem load_problem(const std::string& path, FixingPlacement fixings) {
  LoadedProblem p;
  p.name = fs::path(path).filename().string();
  p.kind = file_kind(path);
  if (p.kind == FileKind::kGpcp) {
    p.model.problem = load_gpcp_file(path);
    if (auto d = validate_gpcp(p.model.problem); !d.empty()) throw InvalidInstanceError(d);
    return p;
  }
  p.schedule = load_instance_file(path);
  p.model = build_gpcp(*p.schedule, {fixings});
  return p;
}

std::string validate(const RunConfig& config) {
  if (!kAlgorithms.count(config.alg)) return "unknown algorithm '" + config.alg + "'";
  if (!(config.tolerance > 0.0)) return "tolerance must be positive";
  if (config.k_step && *config.k_step < 1) return "k-step must be at least 1";
  for (const auto* set : {&config.enable, &config.disable}) {
    for (const std::string& name : *set) {
      if (!kToggles.count(name)) return "unknown speed-up '" + name + "'";
    }
  }
  for (const std::string& name : config.enable) {
    if (config.disable.count(name)) return "speed-up '" + name + "' both enabled and disabled";
  }
  if (config.max_iterations < 1) return "max-iters must be at least 1";
  return {};
}

ColgenOptions resolve_options(const RunConfig& config, const LoadedProblem& problem) {
  const bool psplib = problem.kind == FileKind::kPsplib;
  std::set<std::string> on = psplib ? std::set<std::string>{"phs", "stcol"}
                                    : std::set<std::string>{"phs", "mhs", "pc"};
  for (const std::string& name : config.enable) on.insert(name);
  for (const std::string& name : config.disable) on.erase(name);
  ColgenOptions o;
  o.tolerance = config.tolerance;
  o.k_step = config.k_step.value_or(psplib ? 10 : 1);
  o.pricing_hot_start = on.count("phs");
  o.path_contraction = on.count("pc");
  o.master_hot_start = on.count("mhs");
  o.stop_on_crossing = config.early_stop;
  o.max_iterations = config.max_iterations;
  o.time_limit_s = config.time_limit_s;
  if (on.count("stcol") && problem.schedule) {
    o.start_columns =
        partition_columns(starting_columns(*problem.schedule, problem.model.index),
                          problem.model.problem.n);
  }
  return o;
}

BoundReport run_algorithm(const RunConfig& config, const LoadedProblem& problem) {
  const GpcpInstance& g = problem.model.problem;
  if (config.alg == "lp") {
    BoundReport r;
    r.algorithm = "lp";
    const auto start = std::chrono::steady_clock::now();
    r.bound = direct_lp_bound(g);
    r.time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    r.iterations = 1;
    r.lower = r.upper = r.bound;
    r.status = std::isfinite(r.bound) ? SolveStatus::kConverged
               : r.bound < 0          ? SolveStatus::kInfeasible
                                      : SolveStatus::kFailed;
    if (r.status == SolveStatus::kFailed) r.message = "LP relaxation is unbounded";
    return r;
  }
  const ColgenOptions options = resolve_options(config, problem);
  if (config.alg == "bz") {
    return g.precedence_only() ? bz_solve(g, options) : bz_solve(with_general_rows_as_side(g), options);
  }
  if (config.alg == "dw") return dw_solve(g, options);
  if (config.alg == "gcg") return gcg_solve(g, options);
  return gcg_eq_solve(g, options);
}

int exit_code(const BoundReport& report) {
  switch (report.status) {
    case SolveStatus::kConverged: return kExitConverged;
    case SolveStatus::kIterationLimit:
    case SolveStatus::kTimeLimit: return kExitLimit;
    case SolveStatus::kInfeasible: return kExitInfeasible;
    case SolveStatus::kFailed: return kExitError;
  }
  return kExitError;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Column-generation bounds for time-indexed production scheduling", "schedbound"};
  app.require_subcommand(1);

  RunConfig config;
  std::vector<std::string> enable, disable;
  std::string fixings = "sides";
  std::string instance, log_path, out_path;
  bool no_time = false;

  CLI::App* solve = app.add_subcommand("solve", "Bound one instance");
  solve->add_option("instance", instance, "Instance file (.gpsp native, .sm PSPLIB, .gpcp)")
      ->required();
  solve->add_option("--alg", config.alg, "bz, dw, gcg, gcg-eq or lp")->capture_default_str();
  add_run_flags(solve, &config, &enable, &disable, &fixings);
  solve->add_option("--log", log_path, "Write the per-iteration log as CSV");
  solve->add_option("--out", out_path, "Write the result row as CSV");
  solve->add_flag("--no-time", no_time, "Report zero times for byte-stable output");

  RunConfig bench_config;
  std::vector<std::string> bench_enable, bench_disable, bench_inputs;
  std::string bench_fixings = "sides", algs_text = "bz,dw";
  int jobs = 1;
  bool bench_no_time = false;
  std::string bench_out;
  CLI::App* bench = app.add_subcommand("bench", "Run algorithms over instance files or directories");
  bench->add_option("inputs", bench_inputs, "Files or directories")->required();
  bench->add_option("--alg", algs_text, "Comma-separated algorithms")->capture_default_str();
  add_run_flags(bench, &bench_config, &bench_enable, &bench_disable, &bench_fixings);
  bench->add_option("--jobs", jobs, "Concurrent solves")->check(CLI::PositiveNumber);
  bench->add_option("--out", bench_out, "CSV destination (default stdout)");
  bench->add_flag("--no-time", bench_no_time, "Report zero times for byte-stable output");

  bool example = false;
  int random_count = 0;
  std::uint64_t seed = default_seed();
  std::vector<std::string> verify_files;
  CLI::App* verify = app.add_subcommand("verify", "Cross-check engines against exact oracles");
  verify->add_flag("--example", example, "Built-in three-variable example");
  verify->add_option("--random", random_count, "Number of seeded random instances");
  verify->add_option("--seed", seed, "First seed (default $BZ_SEED or 1)");
  verify->add_option("files", verify_files, "Instance files");

  std::string kind = "sm", dir = ".";
  int count = 20, gen_jobs = 30;
  std::uint64_t gen_seed = default_seed();
  CLI::App* generate = app.add_subcommand("generate", "Write seeded random instances");
  generate->add_option("--kind", kind, "sm, gpsp or gpcp")
      ->check(CLI::IsMember({"sm", "gpsp", "gpcp"}))
      ->capture_default_str();
  generate->add_option("--count", count, "Number of files")->capture_default_str();
  generate->add_option("--seed", gen_seed, "First seed (default $BZ_SEED or 1)");
  generate->add_option("--jobs", gen_jobs, "Jobs per PSPLIB instance")->capture_default_str();
  generate->add_option("--out-dir", dir, "Destination directory")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*solve) {
      if (const std::string problem = finish_config(&config, enable, disable, fixings);
          !problem.empty()) {
        err << "error: " << problem << '\n';
        return kExitError;
      }
      const LoadedProblem p = load_problem(instance, config.fixings);
      BoundReport report = run_algorithm(config, p);
      if (no_time) strip_times(&report);
      print_report(p.name, report, out);
      if (!log_path.empty()) {
        std::ofstream file(log_path, std::ios::binary);
        write_iteration_log(report, file);
      }
      if (!out_path.empty()) {
        std::ofstream file(out_path, std::ios::binary);
        const BenchRow row = make_row(p.name, config.alg, report, !no_time);
        write_bench_csv(std::span<const BenchRow>(&row, 1), file);
      }
      return exit_code(report);
    }
    if (*bench) {
      if (const std::string problem =
              finish_config(&bench_config, bench_enable, bench_disable, bench_fixings);
          !problem.empty()) {
        err << "error: " << problem << '\n';
        return kExitError;
      }
      std::vector<std::string> ordered;  // user order, duplicates dropped
      std::stringstream ss(algs_text);
      for (std::string a; std::getline(ss, a, ',');) {
        if (!a.empty() && std::find(ordered.begin(), ordered.end(), a) == ordered.end()) {
          ordered.push_back(a);
        }
      }
      for (const std::string& a : ordered) {
        if (!kAlgorithms.count(a)) {
          err << "error: unknown algorithm '" << a << "'\n";
          return kExitError;
        }
      }
      return cmd_bench(bench_config, ordered, bench_inputs, jobs, bench_out, bench_no_time, out,
                       err);
    }
    if (*verify) {
      if (!example && random_count == 0 && verify_files.empty()) example = true;
      return cmd_verify(example, random_count, seed, verify_files, out, err);
    }
    return cmd_generate(kind, count, gen_seed, gen_jobs, dir, out, err);
  } catch (const InvalidInstanceError& e) {
    err << "error: invalid instance\n" << format_diagnostics(e.diagnostics());
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitError;
}

}  // namespace schedbound::cli
