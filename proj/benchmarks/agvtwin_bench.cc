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


#include <random>

#include <benchmark/benchmark.h>

#include "agvtwin/floor_model.h"
#include "agvtwin/router.h"
#include "agvtwin/scenario.h"
#include "agvtwin/twin.h"

namespace agvtwin {
namespace {

// Square floor with ~15% shelves, corners kept free.
OccupancyGrid Floor(int side) {
  std::mt19937_64 rng(42);
  std::bernoulli_distribution shelf(0.15);
  OccupancyGrid grid{side, side, std::vector<bool>(side * side), {}};
  for (std::size_t i = 0; i < grid.occupied.size(); ++i) grid.occupied[i] = shelf(rng);
  grid.occupied.front() = false;
  grid.occupied.back() = false;
  return grid;
}

void BM_BuildGraph(benchmark::State& state) {
  const OccupancyGrid grid = Floor(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(BuildGraph(grid));
}
BENCHMARK(BM_BuildGraph)->RangeMultiplier(2)->Range(4, 32);

void BM_MarkOccupiedFree(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const FloorGraph graph = BuildGraph(Floor(side));
  const ZoneId zone{side / 2, side / 2};
  for (auto _ : state) benchmark::DoNotOptimize(MarkFree(MarkOccupied(graph, zone), zone));
}
BENCHMARK(BM_MarkOccupiedFree)->Arg(16)->Arg(32);

void BM_ShortestPath(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const FloorGraph graph = BuildGraph(Floor(side));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ShortestPath(graph, {1, 1}, {side, side}));
  }
}
BENCHMARK(BM_ShortestPath)->RangeMultiplier(2)->Range(4, 32);

// n AGVs on a free floor, each crossing to the opposite side through the
// middle rows, so every pair of routes conflicts.
void BM_ResolveWaiting(benchmark::State& state) {
  const int agvs = static_cast<int>(state.range(0));
  const int side = 2 * agvs + 2;
  const FloorGraph graph = BuildGraph(OccupancyGrid{side, side, std::vector<bool>(side * side), {}});
  std::vector<Route> routes;
  for (int i = 0; i < agvs; ++i) {
    routes.push_back(*ShortestPath(graph, {2 * i + 1, 1}, {side - 2 * i, side}, i + 1));
  }
  for (auto _ : state) benchmark::DoNotOptimize(ResolveWaiting(routes, graph, 256));
}
BENCHMARK(BM_ResolveWaiting)->Arg(2)->Arg(4)->Arg(8);

void BM_RunScenario(benchmark::State& state) {
  const Scenario s = LoadScenarioFile(AGVTWIN_SCENARIO_DIR "/warehouse.json");
  for (auto _ : state) {
    Twin twin(s.grid, s.config, s.agvs, s.missions, s.map_updates, nullptr);
    benchmark::DoNotOptimize(twin.Run(s.max_slots));
  }
}
BENCHMARK(BM_RunScenario)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace agvtwin

BENCHMARK_MAIN();
