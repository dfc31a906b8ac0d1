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

#ifndef SCHEDBOUND_TESTS_TEST_UTIL_H_
#define SCHEDBOUND_TESTS_TEST_UTIL_H_

#include <string>
#include <vector>

#include "schedbound/gpsp.h"

namespace schedbound::testing {

// One resource with constant capacity, singleton clusters, single mode.
inline GpspInstance single_mode_instance(int horizon, double capacity,
                                         const std::vector<int>& durations,
                                         const std::vector<double>& usage) {
  GpspInstance inst(horizon, 1, static_cast<int>(durations.size()));
  for (int t = 1; t <= horizon; ++t) inst.set_capacity(0, t, capacity);
  for (size_t a = 0; a < durations.size(); ++a) {
    Activity act;
    act.cluster = static_cast<int>(a);
    act.modes.push_back({durations[a], {usage[a]}});
    inst.add_activity(std::move(act));
  }
  return inst;
}

inline bool has_message(const std::vector<Diagnostic>& diagnostics,
                        const std::string& needle) {
  for (const Diagnostic& d : diagnostics) {
    if (d.message.find(needle) != std::string::npos) return true;
  }
  return false;
}

inline std::string data_path(const std::string& name) {
  return std::string(SCHEDBOUND_DATA_DIR) + "/" + name;
}

}  // namespace schedbound::testing

#endif  // SCHEDBOUND_TESTS_TEST_UTIL_H_
