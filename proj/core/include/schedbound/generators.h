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

#ifndef SCHEDBOUND_GENERATORS_H_
#define SCHEDBOUND_GENERATORS_H_

// Seeded random instance generators. Equal seeds and options give equal
// instances on every platform (std::mt19937_64 with integer draws only).

#include <cstdint>
#include <string>

#include "schedbound/gpcp.h"
#include "schedbound/gpsp.h"

namespace schedbound {

struct RandomGpspOptions {
  int min_activities = 3, max_activities = 8;
  int min_horizon = 3, max_horizon = 6;
  int min_resources = 1, max_resources = 2;
  int max_modes = 3;
  int max_duration = 3;
  int max_lag = 2;
  bool due_dates = true;
  bool releases = true;
  // Upper bound on the number of z variables; activities are dropped until met.
  int max_variables = 1 << 20;
};

GpspInstance random_gpsp(std::uint64_t seed, const RandomGpspOptions& options = {});

struct RandomGpcpOptions {
  int min_vars = 3, max_vars = 12;
  int max_side_rows = 3;
  int max_general_rows = 2;  // general A rows make the linear and convex hulls differ
  int max_u = 1;
  double arc_density = 0.25;
};

// Arcs form a DAG over a random order; side rows have small integer data.
// Every instance has z = 0 feasible for the general rows, so the integer
// problem is nonempty whenever the side rows admit z = 0 with some u.
GpcpInstance random_gpcp(std::uint64_t seed, const RandomGpcpOptions& options = {});

struct PsplibGeneratorOptions {
  int jobs = 30;  // non-dummy jobs
  int resources = 4;
  int max_duration = 10;
  int max_successors = 3;
  double resource_factor = 0.5;    // share of resources a job requests
  double resource_strength = 0.3;  // 0 tight .. 1 loose capacities
};

// Text in the single-mode PSPLIB .sm layout.
std::string generate_psplib_sm(std::uint64_t seed, const PsplibGeneratorOptions& options = {});

}  // namespace schedbound

#endif  // SCHEDBOUND_GENERATORS_H_
