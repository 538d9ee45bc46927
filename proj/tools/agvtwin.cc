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

// agvtwin: run, validate and inspect fleet scenarios.
//
//   agvtwin run <scenario> --trace <path> --metrics <path> [--render <dir>]
//                          [--max-slots N]
//   agvtwin validate <scenario>
//   agvtwin graph <scenario>

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "agvtwin/error.h"
#include "agvtwin/floor_model.h"
#include "agvtwin/scenario.h"
#include "agvtwin/sim.h"

namespace {

using agvtwin::Error;
using agvtwin::ErrorCode;

int Report(const Error& error) {
  std::cerr << "agvtwin: " << agvtwin::ToString(error.code()) << ": " << error.what()
            << '\n';
  switch (error.code()) {
    case ErrorCode::kIoError:
      return agvtwin::kExitUsage;
    case ErrorCode::kInvariantViolation:
      return agvtwin::kExitInternal;
    default:
      return agvtwin::kExitInvalid;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-AGV fleet control simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  agvtwin::RunOptions options;
  std::string render_dir;
  int max_slots = 0;

  CLI::App* run = app.add_subcommand("run", "Simulate a scenario");
  run->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  run->add_option("--trace", options.trace_path, "JSON Lines trace output")->required();
  run->add_option("--metrics", options.metrics_path, "Metrics JSON output")->required();
  run->add_option("--render", render_dir, "Directory for per-slot text frames");
  run->add_option("--max-slots", max_slots, "Override the scenario's slot cap")
      ->check(CLI::PositiveNumber);

  CLI::App* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("scenario", scenario_path, "Scenario JSON file")->required();

  CLI::App* graph = app.add_subcommand("graph", "Print the adjacency matrix as CSV");
  graph->add_option("scenario", scenario_path, "Scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error);
    return code == 0 ? 0 : agvtwin::kExitUsage;
  }

  agvtwin::Scenario scenario;
  try {
    scenario = agvtwin::LoadScenarioFile(scenario_path);
  } catch (const Error& error) {
    return Report(error);
  }

  try {
    if (*validate) {
      std::cout << "ok: " << scenario.grid.n << "x" << scenario.grid.m << " floor, "
                << scenario.agvs.size() << " AGVs, " << scenario.missions.size()
                << " missions\n";
      return agvtwin::kExitCompleted;
    }
    if (*graph) {
      const agvtwin::FloorGraph floor =
          agvtwin::BuildGraph(scenario.grid, scenario.config.wait_weight);
      agvtwin::WriteMatrixCsv(floor, std::cout);
      return agvtwin::kExitCompleted;
    }
    if (!render_dir.empty()) options.render_dir = render_dir;
    if (max_slots > 0) options.max_slots = max_slots;
    const agvtwin::RunReport report = agvtwin::RunScenario(scenario, options);
    std::cout << agvtwin::ToString(report.metrics.outcome) << ": "
              << report.metrics.makespan_slots << " slots, "
              << report.metrics.collision_count << " collisions\n";
    return report.exit_code;
  } catch (const Error& error) {
    return Report(error);
  }
}
