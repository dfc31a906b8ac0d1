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

#ifndef SCHEDBOUND_TOOLS_CLI_H_
#define SCHEDBOUND_TOOLS_CLI_H_

// Command-line front end: instance loading, run configuration and the
// solve / bench / verify / generate subcommands.

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "schedbound/colgen.h"
#include "schedbound/gpcp.h"
#include "schedbound/gpsp.h"

namespace schedbound::cli {

// Process exit codes.
enum ExitCode : int { kExitConverged = 0, kExitLimit = 1, kExitInfeasible = 2, kExitError = 3 };

enum class FileKind { kNative, kPsplib, kGpcp };
FileKind file_kind(const std::string& path);

struct LoadedProblem {
  std::string name;  // file name without directories
  FileKind kind = FileKind::kNative;
  std::optional<GpspInstance> schedule;  // absent for .gpcp files
  GpcpModel model;
};

// Throws ParseError, InvalidInstanceError or std::runtime_error.
LoadedProblem load_problem(const std::string& path,
                           FixingPlacement fixings = FixingPlacement::kSideRows);

inline const std::set<std::string> kToggles = {"phs", "pc", "mhs", "stcol"};
inline const std::set<std::string> kAlgorithms = {"bz", "dw", "gcg", "gcg-eq", "lp"};

struct RunConfig {
  std::string alg = "bz";
  double tolerance = 1e-6;
  std::optional<int> k_step;  // default depends on the file kind
  std::set<std::string> enable, disable;
  int max_iterations = 100000;
  double time_limit_s = 0.0;
  bool early_stop = true;  // gcg engines only
  FixingPlacement fixings = FixingPlacement::kSideRows;
};

// Empty when valid, else a message.
std::string validate(const RunConfig& config);

// Speed-up defaults: PSPLIB files use PHS and STCOL with k = 10; other files
// PHS, MHS and PC with k = 1. Explicit enables and disables apply on top.
ColgenOptions resolve_options(const RunConfig& config, const LoadedProblem& problem);

// Runs one algorithm; "lp" solves the relaxation directly. BZ moves general
// easy-block rows into the side system first.
BoundReport run_algorithm(const RunConfig& config, const LoadedProblem& problem);

int exit_code(const BoundReport& report);

// Entry point shared by the executable and the tests; `args` excludes the
// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace schedbound::cli

#endif  // SCHEDBOUND_TOOLS_CLI_H_
