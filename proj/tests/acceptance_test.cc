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

// Acceptance suite. Each criterion runs at its stated tolerance and time
// budget and prints one PASS/FAIL line; the exit status is nonzero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "agvtwin/error.h"
#include "agvtwin/floor_model.h"
#include "agvtwin/maneuver.h"
#include "agvtwin/plant.h"
#include "agvtwin/router.h"
#include "agvtwin/scenario.h"
#include "agvtwin/sim.h"
#include "agvtwin/trace.h"
#include "agvtwin/twin.h"
#include "testing/oracles.h"

namespace agvtwin {
namespace {

constexpr double kPi = std::numbers::pi;

// Collects the first failure message of a criterion.
class Check {
 public:
  void Expect(bool condition, const std::string& message) {
    if (!condition && failure_.empty()) failure_ = message;
  }
  bool ok() const { return failure_.empty(); }
  const std::string& failure() const { return failure_; }

 private:
  std::string failure_;
};

struct RunResult {
  MetricsReport metrics;
  std::vector<TraceEvent> events;
  std::string trace;
};

RunResult RunInMemory(const Scenario& s) {
  std::ostringstream text;
  TraceWriter trace(&text, true);
  Twin twin(s.grid, s.config, s.agvs, s.missions, s.map_updates, &trace);
  twin.Run(s.max_slots);
  return {twin.metrics(), trace.events(), text.str()};
}

std::vector<TraceEvent> OfType(const std::vector<TraceEvent>& events,
                               const std::string& type) {
  std::vector<TraceEvent> out;
  for (const TraceEvent& event : events) {
    if (event.type == type) out.push_back(event);
  }
  return out;
}

void GraphOracle(Check& check) {
  auto compare = [&](const OccupancyGrid& grid, double w) {
    const FloorGraph graph = BuildGraph(grid, w);
    check.Expect(graph.matrix() == testing::BruteForceAdjacency(grid, w),
                 "matrix mismatch on a " + std::to_string(grid.n) + "x" +
                     std::to_string(grid.m) + " grid");
  };
  for (int n = 1; n <= 3; ++n) {
    for (int m = 1; m <= 3; ++m) {
      for (unsigned mask = 0; mask < (1u << (n * m)); ++mask) {
        OccupancyGrid grid{n, m, std::vector<bool>(n * m), {}};
        for (int i = 0; i < n * m; ++i) grid.occupied[i] = (mask >> i) & 1u;
        compare(grid, 1.0);
        compare(grid, 2.5);
      }
    }
  }
  std::mt19937_64 rng(1);
  for (int k = 0; k < 200; ++k) {
    const int n = std::uniform_int_distribution<int>(1, 8)(rng);
    const int m = std::uniform_int_distribution<int>(1, 8)(rng);
    const double rate = std::uniform_real_distribution<double>(0.0, 0.6)(rng);
    compare(testing::RandomGrid(rng, n, m, rate), 1.0 + k % 3);
  }
}

void ShortestPathOracle(Check& check) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 100 && check.ok(); ++k) {
    const int n = std::uniform_int_distribution<int>(1, 8)(rng);
    const int m = std::uniform_int_distribution<int>(1, 8)(rng);
    const double rate = std::uniform_real_distribution<double>(0.0, 0.3)(rng);
    const OccupancyGrid grid = testing::RandomGrid(rng, n, m, rate);
    const FloorGraph graph = BuildGraph(grid);
    for (int p = 0; p < n * m; ++p) {
      for (int q = 0; q < n * m; ++q) {
        const ZoneId from{p % n + 1, p / n + 1}, to{q % n + 1, q / n + 1};
        if (grid.IsOccupied(from) || grid.IsOccupied(to)) continue;
        const int expected = testing::BfsDistance(grid, from, to);
        const std::optional<Route> route = ShortestPath(graph, from, to);
        if (expected < 0) {
          check.Expect(!route, "route found to an unreachable zone");
          continue;
        }
        check.Expect(route && static_cast<int>(route->Transitions()) == expected,
                     "length differs from BFS for " + ToString(from) + " -> " +
                         ToString(to));
        if (!route) continue;
        for (std::size_t i = 0; i + 1 < route->zones.size(); ++i) {
          check.Expect(AreFourNeighbors(route->zones[i], route->zones[i + 1]) &&
                           !grid.IsOccupied(route->zones[i + 1]),
                       "route steps off the free grid");
        }
      }
    }
  }
}

Scenario CrossingScenario() {
  return LoadScenario(R"({
    "map": ["....", "....", "....", "...."],
    "replan_interval_slots": 100,
    "agvs": [{"id": 1, "start_zone": [1, 2]},
             {"id": 2, "start_zone": [3, 4], "heading": 1.5707963267948966}],
    "missions": [{"id": 1, "agv": 1, "origin": [1, 2], "destination": [4, 2]},
                 {"id": 2, "agv": 2, "origin": [3, 4], "destination": [3, 1]}]
  })");
}

void CrossingReproduction(Check& check) {
  const Scenario s = CrossingScenario();
  const RunResult run = RunInMemory(s);
  const FloorGraph graph = BuildGraph(s.grid);
  const Route hi_alone = *ShortestPath(graph, {1, 2}, {4, 2}, 1, 0);
  const Route lo_alone = *ShortestPath(graph, {3, 4}, {3, 1}, 2, 0);

  const auto routes = OfType(run.events, "route_computed");
  const auto waits = OfType(run.events, "wait_assigned");
  check.Expect(routes.size() == 2, "expected one route per AGV");
  for (const TraceEvent& event : routes) {
    if (event.payload["agv"] == 1) {
      check.Expect(event.payload == [&] {
        Json expected = RouteToJson(hi_alone);
        expected["mission"] = 1;
        expected["held"] = false;
        return expected;
      }(), "high-priority route changed");
    }
  }
  check.Expect(waits.size() == 1, "expected exactly one wait_assigned event, got " +
                                      std::to_string(waits.size()));
  if (waits.size() == 1) {
    const Json& wait = waits[0].payload;
    check.Expect(wait["agv"] == 2 && wait["high_priority_agv"] == 1,
                 "the wait went to the wrong AGV");
    // The waiting zone is the last zone of AGV 2's route before the area.
    std::size_t first_in_area = lo_alone.zones.size();
    for (std::size_t i = 0; i < lo_alone.zones.size(); ++i) {
      for (const Json& zone : wait["area"]) {
        if (ZoneFromJson(zone) == lo_alone.zones[i]) first_in_area = std::min(first_in_area, i);
      }
    }
    check.Expect(first_in_area > 0 && first_in_area < lo_alone.zones.size() &&
                     ZoneFromJson(wait["zone"]) == lo_alone.zones[first_in_area - 1],
                 "the waiting zone is not the zone before the collision area");
  }
  check.Expect(run.metrics.collision_count == 0 &&
                   OfType(run.events, "collision_violation").empty(),
               "floor collision in the crossing scenario");
  check.Expect(run.metrics.outcome == RunOutcome::kCompleted, "crossing did not complete");
}

void FleetSafetySweep(Check& check) {
  for (std::uint64_t seed = 0; seed < 500 && check.ok(); ++seed) {
    const Scenario s = testing::RandomScenario(seed);
    try {
      const RunResult run = RunInMemory(s);
      check.Expect(run.metrics.collision_count == 0 || run.metrics.deadlock,
                   "collision without deadlock flag in seed " + std::to_string(seed));
    } catch (const Error& error) {
      check.Expect(false, "seed " + std::to_string(seed) + " aborted: " + error.what());
    }
  }
}

Point BorderPoint(Point origin, double s, Border border) {
  switch (border) {
    case Border::kNorth:
      return {origin.x + s / 2, origin.y + s};
    case Border::kEast:
      return {origin.x + s, origin.y + s / 2};
    case Border::kSouth:
      return {origin.x + s / 2, origin.y};
    case Border::kWest:
      return {origin.x, origin.y + s / 2};
  }
  return origin;
}

double Heading(Border outward) {
  switch (outward) {
    case Border::kNorth:
      return kPi / 2;
    case Border::kEast:
      return 0.0;
    case Border::kSouth:
      return -kPi / 2;
    case Border::kWest:
      return kPi;
  }
  return 0.0;
}

Border Flip(Border border) {
  return static_cast<Border>((static_cast<int>(border) + 2) % 4);
}

double AngleGap(double x, double y) {
  return std::abs(std::remainder(x - y, 2 * kPi));
}

void SampleInside(Check& check, const Trajectory& trajectory, Point origin, double s) {
  for (const Segment& segment : trajectory.segments) {
    const double length = SegmentLength(segment);
    for (int k = 0; k <= 64; ++k) {
      const Pose pose = SegmentPoseAt(segment, length * k / 64.0);
      const double tol = 1e-12 * s;
      check.Expect(pose.x >= origin.x - tol && pose.x <= origin.x + s + tol &&
                       pose.y >= origin.y - tol && pose.y <= origin.y + s + tol,
                   "trajectory leaves its zone");
    }
  }
}

void ManeuverGeometry(Check& check) {
  int legal = 0;
  for (double s : {0.5, 1.0, 2.0}) {
    const Point origin{3 * s, 2 * s};  // Z4,? of some floor; any offset works
    const ZoneId zone{4, 2};
    legal = 0;
    for (Border entry : kAllBorders) {
      for (Border exit : kAllBorders) {
        if (exit == entry) continue;
        ++legal;
        const Maneuver maneuver =
            SelectManeuver(entry, zone, Across(zone, exit));
        const Trajectory t = GenerateTrajectory(maneuver, s, origin);
        const Point from = BorderPoint(origin, s, entry);
        const Point to = BorderPoint(origin, s, exit);
        const Pose start = t.StartPose(), end = t.EndPose();
        check.Expect(std::hypot(start.x - from.x, start.y - from.y) <= 1e-9 &&
                         AngleGap(start.theta, Heading(Flip(entry))) <= 1e-9,
                     "maneuver start pose off");
        check.Expect(std::hypot(end.x - to.x, end.y - to.y) <= 1e-9 &&
                         AngleGap(end.theta, Heading(exit)) <= 1e-9,
                     "maneuver end pose off");
        const double expected = exit == Flip(entry) ? s : kPi * s / 4;
        check.Expect(std::abs(t.total_length - expected) <= 1e-12 * expected,
                     "maneuver length off");
        SampleInside(check, t, origin, s);
      }
      // Half-zone maneuvers into and out of the center.
      const Point center{origin.x + s / 2, origin.y + s / 2};
      Maneuver arrive = SelectManeuver(entry, zone, StopAtCenter{});
      const Trajectory in = GenerateTrajectory(arrive, s, origin);
      check.Expect(std::abs(in.total_length - s / 2) <= 1e-12 * s &&
                       std::hypot(in.EndPose().x - center.x, in.EndPose().y - center.y) <=
                           1e-9,
                   "arrive-center geometry off");
      SampleInside(check, in, origin, s);
      for (double heading : {0.0, 1.0, -2.5, kPi}) {
        Maneuver depart;
        depart.kind = ManeuverKind::kDepartCenter;
        depart.zone = zone;
        depart.exit = entry;
        depart.start_heading = heading;
        const Trajectory out = GenerateTrajectory(depart, s, origin);
        const Point edge = BorderPoint(origin, s, entry);
        check.Expect(std::abs(out.total_length - s / 2) <= 1e-12 * s &&
                         std::hypot(out.EndPose().x - edge.x, out.EndPose().y - edge.y) <=
                             1e-9 &&
                         AngleGap(out.EndPose().theta, Heading(entry)) <= 1e-9,
                     "depart-center geometry off");
        SampleInside(check, out, origin, s);
      }
    }
  }
  check.Expect(legal == 12, "expected 12 border-to-border maneuvers");
}

void PlantFidelity(Check& check) {
  const double s = 1.0, v = 1.0, tau = s / v, dt = tau / 100;
  const Route route{1, {{1, 1}, {2, 1}, {2, 2}, {3, 2}, {4, 2}, {4, 3}}, 0, {}};
  const FloorFrame frame(4, 3, s);
  const std::vector<Trajectory> plan = CompileRoute(route, {std::nullopt, kPi / 2}, frame);

  // Analytic length: half zones at both ends plus s per straight and
  // pi s / 4 per turn in between.
  double analytic = s;
  for (std::size_t i = 1; i + 1 < route.zones.size(); ++i) {
    const ZoneId& p = route.zones[i - 1];
    const ZoneId& q = route.zones[i + 1];
    analytic += (p.a == q.a || p.b == q.b) ? s : kPi * s / 4;
  }

  AgvState state;
  state.agv_id = 1;
  state.speed = v;
  state.zone = route.zones[0];
  const Point start = frame.ZoneCenter(route.zones[0]);
  state.pose = {start.x, start.y, kPi / 2};
  std::vector<ZoneId> crossed{state.zone};
  for (const Trajectory& trajectory : plan) {
    state.trajectory_ticks = 0;
    state.arc_position = 0.0;
    state.trajectory_done = false;
    for (int k = 0; k < 100; ++k) {
      StepResult step = Step(state, trajectory, dt);
      state = step.state;
      if (step.crossed) crossed.push_back(step.crossed->to);
      const ZoneId here = ZoneOfPose(state.pose, s, 4, 3, state.zone);
      check.Expect(std::find(route.zones.begin(), route.zones.end(), here) !=
                       route.zones.end(),
                   "pose left the route's zones");
    }
    check.Expect(state.trajectory_done, "a maneuver overran its slot");
  }
  const Point goal = frame.ZoneCenter(route.zones.back());
  check.Expect(std::hypot(state.pose.x - goal.x, state.pose.y - goal.y) <= 2 * v * dt,
               "final pose is not at the destination center");
  check.Expect(std::abs(state.odometer - analytic) <= 1e-6 * analytic,
               "odometer differs from the analytic length");
  check.Expect(crossed == route.zones, "BorderCrossed sequence differs from the route");
}

void ChargingService(Check& check) {
  const Scenario s = LoadScenario(R"({
    "map": ["C....", ".....", ".....", ".....", "....C"],
    "charge_distance_threshold": 3.0,
    "charge_duration_slots": 4,
    "agvs": [{"id": 1, "start_zone": [1, 3]}],
    "missions": [{"id": 1, "agv": 1, "origin": [1, 3], "destination": [5, 3]}]
  })");
  const RunResult run = RunInMemory(s);
  std::vector<std::string> order;
  for (const TraceEvent& event : run.events) {
    if (event.type.rfind("charging_", 0) == 0) order.push_back(event.type);
  }
  check.Expect(order == std::vector<std::string>{"charging_mission", "charging_started",
                                                 "charging_done"},
               "charging events out of order");
  const auto started = OfType(run.events, "charging_started");
  const auto done = OfType(run.events, "charging_done");
  if (started.size() == 1 && done.size() == 1) {
    const int from = started[0].payload["from_slot"];
    check.Expect(done[0].slot - from + 1 == s.config.charge_duration_slots,
                 "charging dwell is not charge_duration_slots");
    for (const TraceEvent& event : OfType(run.events, "border_crossed")) {
      check.Expect(event.slot < from || event.slot > done[0].slot,
                   "AGV moved while charging");
    }
    check.Expect(done[0].payload["odometer"] == 0.0 && done[0].payload["duty_time"] == 0.0,
                 "counters not reset by the charge");
  }
  bool resumed = false;
  for (const TraceEvent& event : OfType(run.events, "mission_done")) {
    if (event.payload["mission"] == 1 && ZoneFromJson(event.payload["destination"]) ==
                                             ZoneId{5, 3}) {
      resumed = !done.empty() && event.slot > done[0].slot;
    }
  }
  check.Expect(resumed, "suspended mission did not reach its destination after charging");
  check.Expect(run.metrics.charging_events == 1, "expected one charging event");
}

void DynamicReplanning(Check& check) {
  const Scenario s = LoadScenario(R"({
    "map": [".....", ".....", ".....", ".....", "....."],
    "agvs": [{"id": 1, "start_zone": [1, 1]}],
    "missions": [{"id": 1, "agv": 1, "origin": [1, 1], "destination": [5, 1]}],
    "map_updates": [{"slot": 2, "set_occupied": [[4, 1]]}]
  })");
  const RunResult run = RunInMemory(s);
  const ZoneId blocked{4, 1};
  std::optional<int> applied;
  bool on_route = false;
  bool entered = false;
  for (const TraceEvent& event : run.events) {
    if (event.type == "map_update_applied") applied = event.slot;
    if (event.type == "route_computed" && !applied) {
      for (const Json& zone : event.payload["zones"]) on_route |= ZoneFromJson(zone) == blocked;
    }
    if (event.type == "border_crossed" && applied &&
        ZoneFromJson(event.payload["to"]) == blocked) {
      entered = true;
    }
  }
  check.Expect(applied.has_value(), "map update not applied");
  check.Expect(on_route, "the blocked zone was not on the original route");
  check.Expect(!entered, "AGV entered a zone after it was marked occupied");
  check.Expect(run.metrics.outcome == RunOutcome::kCompleted &&
                   run.metrics.mission_travel_slots.contains(1),
               "mission did not complete over the alternative path");
}

void Determinism(Check& check) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Scenario s = testing::RandomScenario(seed);
    check.Expect(RunInMemory(s).trace == RunInMemory(s).trace,
                 "trace differs between runs of seed " + std::to_string(seed));
  }
}

void DeadlockDetection(Check& check) {
  const Scenario s = LoadScenario(R"({
    "map": ["..."],
    "agvs": [{"id": 1, "start_zone": [1, 1]},
             {"id": 2, "start_zone": [3, 1], "heading": 3.141592653589793}],
    "missions": [{"id": 1, "agv": 1, "origin": [1, 1], "destination": [3, 1]},
                 {"id": 2, "agv": 2, "origin": [3, 1], "destination": [1, 1]}]
  })");
  const RunResult run = RunInMemory(s);
  check.Expect(run.metrics.deadlock, "deadlock not flagged");
  check.Expect(ExitCodeFor(run.metrics.outcome) == kExitDeadlock, "wrong exit code");
  check.Expect(run.metrics.makespan_slots <= s.config.stall_slots_for_deadlock + 10,
               "deadlock detected too late");
  check.Expect(OfType(run.events, "deadlock").size() == 1, "expected one deadlock event");
}

struct Criterion {
  int number;
  const char* name;
  double budget_seconds;
  std::function<void(Check&)> body;
};

}  // namespace
}  // namespace agvtwin

int main() {
  using namespace agvtwin;
  const std::vector<Criterion> criteria = {
      {1, "adjacency matrix equals brute-force oracle", 5.0, GraphOracle},
      {2, "shortest paths equal BFS distances", 10.0, ShortestPathOracle},
      {3, "two-AGV crossing: one wait before the collision area", 1.0,
       CrossingReproduction},
      {4, "fleet safety sweep, 500 random scenarios", 60.0, FleetSafetySweep},
      {5, "maneuver geometry at s = 0.5, 1, 2", 1.0, ManeuverGeometry},
      {6, "plant follows a compiled 6-zone route", 1.0, PlantFidelity},
      {7, "charging mission, dwell and resume", 1.0, ChargingService},
      {8, "replanning around a newly occupied zone", 1.0, DynamicReplanning},
      {9, "byte-identical traces on repeated runs", 10.0, Determinism},
      {10, "head-on corridor ends in deadlock", 1.0, DeadlockDetection},
  };
  int failures = 0;
  for (const Criterion& criterion : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      criterion.body(check);
    } catch (const std::exception& error) {
      check.Expect(false, std::string("threw: ") + error.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    check.Expect(seconds < criterion.budget_seconds,
                 "over the " + std::to_string(criterion.budget_seconds) + " s budget");
    std::ostringstream line;
    line.precision(3);
    line << std::fixed << (check.ok() ? "PASS" : "FAIL") << "  criterion "
         << criterion.number << ": " << criterion.name << " (" << seconds << " s)";
    if (!check.ok()) line << " -- " << check.failure();
    std::cout << line.str() << std::endl;
    if (!check.ok()) ++failures;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
