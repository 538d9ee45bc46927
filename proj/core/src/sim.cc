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

#include "agvtwin/sim.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "agvtwin/error.h"

namespace agvtwin {

namespace {

std::ofstream OpenOutput(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  return out;
}

void WriteFrame(const std::string& dir, int slot, const std::string& frame) {
  char name[32];
  std::snprintf(name, sizeof(name), "frame_%06d.txt", slot);
  const std::string path = (std::filesystem::path(dir) / name).string();
  std::ofstream out = OpenOutput(path);
  out << frame;
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
}

}  // namespace

int ExitCodeFor(RunOutcome outcome) {
  switch (outcome) {
    case RunOutcome::kCompleted:
      return kExitCompleted;
    case RunOutcome::kDeadlock:
      return kExitDeadlock;
    case RunOutcome::kMaxSlots:
    case RunOutcome::kRunning:
      return kExitMaxSlots;
  }
  return kExitMaxSlots;
}

std::string RenderFrame(const Twin& twin) {
  const FloorGraph& graph = twin.graph();
  std::vector<std::string> rows(graph.m(), std::string(graph.n(), '.'));
  for (int b = 1; b <= graph.m(); ++b) {
    for (int a = 1; a <= graph.n(); ++a) {
      const ZoneId zone{a, b};
      if (graph.IsOccupied(zone)) {
        rows[b - 1][a - 1] = '#';
      } else if (twin.stations().contains(zone)) {
        rows[b - 1][a - 1] = 'C';
      }
    }
  }
  for (const AgvState& agv : twin.agv_states()) {
    rows[agv.zone.b - 1][agv.zone.a - 1] = static_cast<char>('0' + agv.agv_id % 10);
  }
  std::string frame;
  for (const std::string& row : rows) frame += row + '\n';
  return frame;
}

RunReport RunScenario(const Scenario& scenario, const RunOptions& options) {
  std::ofstream trace_file = OpenOutput(options.trace_path);
  // Fail on an unwritable metrics path before simulating.
  OpenOutput(options.metrics_path).close();
  if (options.render_dir) {
    std::error_code error;
    std::filesystem::create_directories(*options.render_dir, error);
    if (error) throw Error(ErrorCode::kIoError, "cannot create " + *options.render_dir);
  }

  TraceWriter trace(&trace_file);
  Twin twin(scenario.grid, scenario.config, scenario.agvs, scenario.missions,
            scenario.map_updates, &trace);
  const int max_slots = options.max_slots.value_or(scenario.max_slots);
  if (options.render_dir) WriteFrame(*options.render_dir, 0, RenderFrame(twin));
  while (!twin.Finished()) {
    if (twin.slot() >= max_slots) {
      twin.Run(max_slots);  // records the max_slots outcome
      break;
    }
    twin.RunSlotCycle();
    if (options.render_dir) {
      WriteFrame(*options.render_dir, twin.slot(), RenderFrame(twin));
    }
  }
  trace_file.flush();
  if (!trace_file) throw Error(ErrorCode::kIoError, "cannot write " + options.trace_path);

  std::ofstream metrics_file = OpenOutput(options.metrics_path);
  metrics_file << MetricsToJson(twin.metrics()).dump(2) << '\n';
  if (!metrics_file) throw Error(ErrorCode::kIoError, "cannot write " + options.metrics_path);

  RunReport report;
  report.metrics = twin.metrics();
  report.exit_code = ExitCodeFor(report.metrics.outcome);
  return report;
}

}  // namespace agvtwin
