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

#ifndef AGVTWIN_TWIN_H_
#define AGVTWIN_TWIN_H_

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "agvtwin/floor_model.h"
#include "agvtwin/maneuver.h"
#include "agvtwin/plant.h"
#include "agvtwin/router.h"
#include "agvtwin/trace.h"

namespace agvtwin {

struct TwinConfig {
  int replan_interval_slots = 5;
  int sync_interval_slots = 1;
  int max_resolution_rounds = 64;
  int stall_slots_for_deadlock = 20;
  double charge_distance_threshold = 50.0;
  double charge_time_threshold = 600.0;
  int charge_duration_slots = 10;
  double wait_weight = 1.0;
  double zone_side = 1.0;
  double nominal_speed = 1.0;
  double tick_dt = 0.01;
  int pose_log_every_n_ticks = 0;  // 0 disables pose records

  double SlotDuration() const { return zone_side / nominal_speed; }
  // Ticks per slot; throws kValidationError unless tau / tick_dt is a
  // positive integer (up to 1e-9 relative).
  int TicksPerSlot() const;

  friend bool operator==(const TwinConfig&, const TwinConfig&) = default;
};

struct MapUpdate {
  int slot = 0;
  std::vector<ZoneId> set_occupied;
  std::vector<ZoneId> set_free;

  friend bool operator==(const MapUpdate&, const MapUpdate&) = default;
};

struct AgvSpec {
  int agv_id = 0;
  ZoneId start_zone;
  double heading = 0.0;

  friend bool operator==(const AgvSpec&, const AgvSpec&) = default;
};

enum class RunOutcome { kRunning, kCompleted, kDeadlock, kMaxSlots };

const char* ToString(RunOutcome outcome);

struct MetricsReport {
  std::map<int, int> mission_travel_slots;
  std::map<int, int> agv_wait_slots;
  std::map<int, double> agv_distance;
  int makespan_slots = 0;
  int collision_count = 0;
  bool deadlock = false;
  int charging_events = 0;
  RunOutcome outcome = RunOutcome::kRunning;
};

Json MetricsToJson(const MetricsReport& metrics);

// Applies occupy-then-free. Throws kAgvInZone, leaving nothing applied,
// when a zone to occupy holds one of `agv_zones`, and kOutOfBounds for
// zones off the floor.
FloorGraph SyncMap(const FloorGraph& graph, const MapUpdate& update,
                   const std::vector<ZoneId>& agv_zones);

struct ChargingCheckResult {
  std::vector<Mission> missions;  // mission_id left 0 for the caller
  std::vector<int> unreachable;   // over threshold, no station reachable
};

// Charging missions for AGVs over either threshold, to the station nearest
// by path length (ties: lower zone index). AGVs in `excluded` (charging or
// already sent to charge) are skipped. Stations in `reserved` (targeted or
// held by another AGV) are not assigned; an AGV whose reachable stations
// are all reserved gets nothing this time and is not reported unreachable.
ChargingCheckResult ChargingCheck(const std::vector<AgvState>& states,
                                  const TwinConfig& config, const FloorGraph& graph,
                                  const std::set<ZoneId>& stations,
                                  const std::set<int>& excluded,
                                  const std::set<ZoneId>& reserved = {});

// Completion of a charge: counters back to zero, status Idle.
AgvState ChargingExecute(const AgvState& state);

bool DetectDeadlock(int stalled_slots, bool missions_pending, const TwinConfig& config);

// The Digital Twin: owns the live graph, the fleet state and the mission
// book, and runs the fixed per-slot cycle
//   map sync, replan, charging check, compile, advance, metrics, deadlock.
class Twin {
 public:
  Twin(const OccupancyGrid& grid, const TwinConfig& config, std::vector<AgvSpec> agvs,
       std::vector<Mission> missions, std::vector<MapUpdate> updates,
       TraceWriter* trace);

  // Whether the run has ended; checked at the start of each slot.
  bool Finished();
  // Executes one slot. Only internal-invariant violations throw.
  void RunSlotCycle();
  // Runs until completion, deadlock, or `max_slots` slots.
  RunOutcome Run(int max_slots);

  int slot() const { return slot_; }
  const FloorGraph& graph() const { return graph_; }
  const TwinConfig& config() const { return config_; }
  const std::set<ZoneId>& stations() const { return stations_; }
  const MetricsReport& metrics() const { return metrics_; }
  std::vector<AgvState> agv_states() const;
  const Route* CurrentRoute(int agv_id) const;

 private:
  struct PlannedStep {
    int slot = 0;
    Trajectory trajectory;
  };

  struct MissionBook {
    Mission mission;
    int activation_slot = -1;
    bool done = false;
  };

  struct Agv {
    AgvState state;
    Route route;
    std::deque<PlannedStep> plan;
    std::optional<Trajectory> active;
    int active_end_slot = 0;  // last slot of the active trajectory
    std::deque<int> queue;    // mission book indices, front is current
    bool activated = false;   // queue front has been activated
    bool nopath = false;
    int charge_from = -1;     // charging slots [charge_from, charge_until]
    int charge_until = -1;
    bool station_warned = false;
  };

  std::int64_t TickAt(int slot, int k = 0) const;
  void Emit(const std::string& type, Json payload, int k = 0);

  bool SyncStep();
  bool ActivateMissions();
  void ReplanStep();
  bool ChargingStep();
  void CompileStep(const std::vector<Route>& routes, const std::set<int>& held);
  void AdvanceStep();
  void MetricsStep(const std::map<int, ZoneId>& before);
  void CompletionStep();
  void FinishMission(Agv& agv, bool immediate);
  bool ParkedAt(const Agv& agv, const ZoneId& zone) const;
  void DeadlockStep();

  const Mission* ActiveMission(const Agv& agv) const;
  bool MissionsPending() const;
  bool ChargingOutstanding() const;
  void BuildPlan(Agv& agv, const Route& route);
  AgvStatus StatusForSlot(const Agv& agv) const;

  TwinConfig config_;
  int ticks_per_slot_;
  FloorGraph graph_;
  std::set<ZoneId> stations_;
  FloorFrame frame_;
  std::vector<Agv> agvs_;  // ascending agv_id
  std::vector<MissionBook> book_;
  std::vector<MapUpdate> updates_;  // pending, in slot order
  TraceWriter* trace_;
  MetricsReport metrics_;
  int slot_ = 0;
  int next_mission_id_ = 1;
  int stalled_slots_ = 0;
  bool unresolved_ = false;
  bool activity_ = false;
};

}  // namespace agvtwin

#endif  // AGVTWIN_TWIN_H_
