// Copyright 2026 The agvtwin Authors
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

#ifndef AGVTWIN_SIM_H_
#define AGVTWIN_SIM_H_

#include <optional>
#include <string>

#include "agvtwin/scenario.h"
#include "agvtwin/twin.h"

namespace agvtwin {

inline constexpr int kExitCompleted = 0;
inline constexpr int kExitUsage = 1;  // I/O and command-line errors
inline constexpr int kExitDeadlock = 2;
inline constexpr int kExitMaxSlots = 3;
inline constexpr int kExitInvalid = 4;
inline constexpr int kExitInternal = 5;  // internal invariant violated

int ExitCodeFor(RunOutcome outcome);

// Plain-text picture of the floor: '.' free, '#' occupied, 'C' station and
// the last digit of the AGV id where an AGV stands.
std::string RenderFrame(const Twin& twin);

struct RunOptions {
  std::string trace_path;
  std::string metrics_path;
  std::optional<std::string> render_dir;  // frame_NNNNNN.txt per slot
  std::optional<int> max_slots;           // overrides the scenario's cap
};

struct RunReport {
  MetricsReport metrics;
  int exit_code = kExitCompleted;
};

// Runs the scenario to completion, deadlock or the slot cap and writes the
// trace, metrics and optional frames. Throws kIoError naming the path that
// could not be written.
RunReport RunScenario(const Scenario& scenario, const RunOptions& options);

}  // namespace agvtwin

#endif  // AGVTWIN_SIM_H_
