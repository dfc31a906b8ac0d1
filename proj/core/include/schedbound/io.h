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

#ifndef SCHEDBOUND_IO_H_
#define SCHEDBOUND_IO_H_

// Text formats for scheduling instances.
//
// Native format: line oriented, '#' starts a comment, sections introduced by a
// keyword line. Ids in the file are 1-based.
//
//   HEADER      T R A C
//   CAPACITY    r t Q        (or "r * Q" for every period)
//   ACTIVITY    id cluster release due M
//               d q_1 .. q_R (one line per mode; due may be "inf")
//   PROFIT      a m t p      (unlisted entries are 0)
//   PRECEDENCE  c1 c2 lag    (cluster c2 starts at least lag after c1)
//
// PSPLIB single-mode .sm files are read only.

#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "schedbound/gpsp.h"

namespace schedbound {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

// Thrown when a file parses but describes an invalid instance.
class InvalidInstanceError : public std::runtime_error {
 public:
  explicit InvalidInstanceError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

GpspInstance parse_native(std::istream& in);
GpspInstance parse_native(std::string_view text);

// Canonical form: sections in the order above, capacities collapsed to
// "r * Q" when constant, profits listed only when nonzero, shortest
// round-trip decimal formatting.
std::string write_native(const GpspInstance& instance);

struct PsplibOptions {
  // Horizon override; 0 selects the greedy schedule's completion period.
  int horizon = 0;
};

// Each job becomes a singleton cluster with one mode; a finish-to-start
// successor gets lag equal to the predecessor's duration; every activity is
// due at T. The sink carries profit -(t-1) at period t, so the objective is
// minus the makespan in the file's time units.
GpspInstance parse_psplib_sm(std::istream& in, const PsplibOptions& options = {});
GpspInstance parse_psplib_sm(std::string_view text,
                             const PsplibOptions& options = {});

// Dispatch on extension: ".sm" is PSPLIB, anything else native.
GpspInstance load_instance_file(const std::string& path);

// Shortest decimal that parses back to the same double.
std::string format_double(double value);

}  // namespace schedbound

#endif  // SCHEDBOUND_IO_H_
