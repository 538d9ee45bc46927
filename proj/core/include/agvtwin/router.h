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

#ifndef AGVTWIN_ROUTER_H_
#define AGVTWIN_ROUTER_H_

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "agvtwin/floor_model.h"
#include "agvtwin/zone.h"

namespace agvtwin {

enum class MissionKind { kTransport, kCharging };

struct Mission {
  int mission_id = 0;
  int agv_id = 0;
  ZoneId origin;
  ZoneId destination;
  int release_slot = 0;
  MissionKind kind = MissionKind::kTransport;

  friend bool operator==(const Mission&, const Mission&) = default;
};

// Slot model: one zone transition per slot. The AGV occupies zones[i]
// during slots [Arrival(i), Arrival(i) + WaitAt(i)], where
// Arrival(0) = start_slot and Arrival(i + 1) = Arrival(i) + WaitAt(i) + 1.
// Before start_slot it is in zones[0]; after its final arrival it stays
// parked in zones.back().
struct Route {
  int agv_id = 0;
  std::vector<ZoneId> zones;
  int start_slot = 0;
  std::map<std::size_t, int> waits;  // route index -> extra slots

  int WaitAt(std::size_t index) const;
  int ArrivalSlot(std::size_t index) const;
  int FinalArrivalSlot() const { return ArrivalSlot(zones.size() - 1); }
  int TotalWaits() const;
  std::size_t Transitions() const { return zones.size() - 1; }
  ZoneId ZoneAtSlot(int slot) const;
  // Smallest route index holding `zone`, if any.
  std::optional<std::size_t> IndexOf(const ZoneId& zone) const;

  friend bool operator==(const Route&, const Route&) = default;
};

// Who is where in every slot of [first_slot, last_slot]. Slots after
// last_slot look exactly like last_slot (every AGV parked).
struct ScheduleTable {
  int first_slot = 0;
  int last_slot = -1;
  std::map<int, std::map<ZoneId, std::vector<int>>> entries;

  const std::map<ZoneId, std::vector<int>>& At(int slot) const;
  // Occupant ids of (slot, zone); empty when free.
  std::vector<int> Occupants(int slot, const ZoneId& zone) const;
  bool HasVertexConflict() const;

  friend bool operator==(const ScheduleTable&, const ScheduleTable&) = default;
};

inline constexpr int kNeverExits = std::numeric_limits<int>::max();

// A contiguous set of zones where two AGVs' schedules collide. `agv_hi`
// keeps its route; `agv_lo` must wait before entering.
struct CollisionArea {
  int agv_hi = 0;
  int agv_lo = 0;
  std::set<ZoneId> zones;
  int first_conflict_slot = 0;
  int hi_exit_slot = 0;           // kNeverExits when hi parks in the area
  std::size_t lo_entry_index = 0;  // first index of lo's route in the area
  bool has_swap = false;

  friend bool operator==(const CollisionArea&, const CollisionArea&) = default;
};

struct WaitAssignment {
  int round = 0;
  int agv_id = 0;
  std::size_t route_index = 0;  // waiting position in the route
  ZoneId zone;                  // the waiting zone
  int added_slots = 0;
  int high_priority_agv = 0;
  std::set<ZoneId> area;
};

// Minimum-transition route over H = 1 edges, or nullopt when `dest` is
// unreachable. Ties: Dijkstra (FIFO-ordered queue, N, E, S, W expansion)
// is run from `dest`, then the route is walked forward from `origin` taking
// the first neighbour in N, E, S, W order that is one step closer. Every
// suffix of a returned route is itself the route this returns for that
// suffix's first zone.
//
// Throws kOutOfBounds, or kOccupiedEndpoint when either end is occupied.
std::optional<Route> ShortestPath(const FloorGraph& graph, const ZoneId& origin,
                                  const ZoneId& dest, int agv_id = 0,
                                  int start_slot = 0);

// Transition counts to `dest` from every zone (-1 when unreachable),
// indexed by FloorGraph::IndexOf.
std::vector<int> DistancesTo(const FloorGraph& graph, const ZoneId& dest);

// Requires distinct agv ids.
ScheduleTable BuildSchedule(const std::vector<Route>& routes);

// Vertex and swap conflicts, grouped per AGV pair into areas of zones that
// are consecutive along both routes. Sorted by (first conflict slot, hi,
// lo).
std::vector<CollisionArea> DetectConflicts(const ScheduleTable& table,
                                           const std::vector<Route>& routes);

struct ResolveResult {
  std::vector<Route> routes;
  bool resolved = false;
  int rounds = 0;
  std::vector<WaitAssignment> assignments;
  std::vector<CollisionArea> handled_areas;  // the area treated each round
};

// Waiting strategy: repeatedly take the earliest collision area, keep the
// high-priority route untouched and delay the low-priority AGV in the zone
// before the area until the other has left it. Gives up (resolved = false)
// after `max_rounds`, when the high-priority AGV parks inside the area, or
// when one AGV's waits exceed the total zone count of all routes.
ResolveResult ResolveWaiting(std::vector<Route> routes, const FloorGraph& graph,
                             int max_rounds);

// Where an AGV stands at a slot boundary: in `zone`, either at the zone
// center (`entry` empty) or on the midpoint of its entry border.
struct AgvPlanState {
  int agv_id = 0;
  ZoneId zone;
  std::optional<Border> entry;
};

enum class PlanStatus { kRouted, kIdle, kNoPath };

struct ReplanResult {
  std::vector<Route> routes;  // one per AGV, ascending agv_id
  std::map<int, PlanStatus> status;
  bool resolved = false;
  std::vector<WaitAssignment> assignments;
  std::vector<CollisionArea> handled_areas;
};

// Periodic recalculation. Every AGV in `agvs` gets a route starting at
// `slot`; AGVs without an entry in `active_missions` (at most one per AGV)
// hold in place and are treated as obstacles, as are AGVs whose destination
// turns out unreachable (status kNoPath). A route whose first transition
// leaves through the AGV's entry border starts one slot late so the AGV can
// re-orient at the zone center first.
ReplanResult Replan(const FloorGraph& graph,
                    const std::vector<AgvPlanState>& agvs,
                    const std::vector<Mission>& active_missions, int slot,
                    int max_rounds);

struct HoldResult {
  ReplanResult plan;                            // always resolved
  std::set<int> held;                           // AGVs stopped this slot
  std::vector<CollisionArea> unresolved_areas;  // what forced each hold
};

// Fallback after a failed resolution: the low-priority AGV of the first
// remaining conflict (or its partner, if it has no mission) is held in
// place, which turns it into an obstacle, and the others are planned
// again. Repeats until the waiting strategy succeeds.
HoldResult ReplanWithHolds(const FloorGraph& graph,
                           const std::vector<AgvPlanState>& agvs,
                           const std::vector<Mission>& active_missions, int slot,
                           int max_rounds);

}  // namespace agvtwin

#endif  // AGVTWIN_ROUTER_H_
