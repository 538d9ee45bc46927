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

#include "agvtwin/router.h"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <tuple>
#include <utility>

#include "agvtwin/error.h"

namespace agvtwin {

int Route::WaitAt(std::size_t index) const {
  auto it = waits.find(index);
  return it == waits.end() ? 0 : it->second;
}

int Route::ArrivalSlot(std::size_t index) const {
  int slot = start_slot;
  for (std::size_t i = 0; i < index; ++i) slot += WaitAt(i) + 1;
  return slot;
}

int Route::TotalWaits() const {
  int total = 0;
  for (const auto& [index, slots] : waits) {
    if (index + 1 < zones.size()) total += slots;
  }
  return total;
}

ZoneId Route::ZoneAtSlot(int slot) const {
  int arrival = start_slot;
  for (std::size_t i = 0; i + 1 < zones.size(); ++i) {
    const int leave = arrival + WaitAt(i);
    if (slot <= leave) return zones[i];
    arrival = leave + 1;
  }
  return zones.back();
}

std::optional<std::size_t> Route::IndexOf(const ZoneId& zone) const {
  auto it = std::find(zones.begin(), zones.end(), zone);
  if (it == zones.end()) return std::nullopt;
  return static_cast<std::size_t>(it - zones.begin());
}

const std::map<ZoneId, std::vector<int>>& ScheduleTable::At(int slot) const {
  static const std::map<ZoneId, std::vector<int>> kEmpty;
  if (entries.empty()) return kEmpty;
  if (slot > last_slot) slot = last_slot;
  auto it = entries.find(slot);
  return it == entries.end() ? kEmpty : it->second;
}

std::vector<int> ScheduleTable::Occupants(int slot, const ZoneId& zone) const {
  const auto& row = At(slot);
  auto it = row.find(zone);
  return it == row.end() ? std::vector<int>{} : it->second;
}

bool ScheduleTable::HasVertexConflict() const {
  for (const auto& [slot, row] : entries) {
    for (const auto& [zone, ids] : row) {
      if (ids.size() > 1) return true;
    }
  }
  return false;
}

std::vector<int> DistancesTo(const FloorGraph& graph, const ZoneId& dest) {
  std::vector<int> dist(graph.size(), -1);
  if (!graph.Contains(dest) || graph.IsOccupied(dest)) return dist;

  // (distance, insertion sequence, zone index); the sequence number makes
  // equal-distance entries pop in FIFO order.
  using Entry = std::tuple<int, std::size_t, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  std::vector<bool> settled(graph.size(), false);
  std::size_t sequence = 0;
  dist[graph.IndexOf(dest)] = 0;
  queue.emplace(0, sequence++, graph.IndexOf(dest));
  while (!queue.empty()) {
    auto [d, seq, index] = queue.top();
    queue.pop();
    if (settled[index]) continue;
    settled[index] = true;
    for (const ZoneId& next : Neighbors(graph, graph.ZoneAt(index))) {
      const std::size_t next_index = graph.IndexOf(next);
      const int candidate = d + 1;
      if (dist[next_index] < 0 || candidate < dist[next_index]) {
        dist[next_index] = candidate;
        queue.emplace(candidate, sequence++, next_index);
      }
    }
  }
  return dist;
}

std::optional<Route> ShortestPath(const FloorGraph& graph, const ZoneId& origin,
                                  const ZoneId& dest, int agv_id,
                                  int start_slot) {
  for (const ZoneId& end : {origin, dest}) {
    if (!graph.Contains(end)) {
      throw Error(ErrorCode::kOutOfBounds, "zone " + ToString(end) + " outside floor");
    }
    if (graph.IsOccupied(end)) {
      throw Error(ErrorCode::kOccupiedEndpoint, "zone " + ToString(end) + " is occupied");
    }
  }
  const std::vector<int> dist = DistancesTo(graph, dest);
  if (dist[graph.IndexOf(origin)] < 0) return std::nullopt;

  Route route;
  route.agv_id = agv_id;
  route.start_slot = start_slot;
  route.zones.push_back(origin);
  ZoneId current = origin;
  while (current != dest) {
    const int here = dist[graph.IndexOf(current)];
    for (const ZoneId& next : Neighbors(graph, current)) {
      if (dist[graph.IndexOf(next)] == here - 1) {
        current = next;
        break;
      }
    }
    route.zones.push_back(current);
  }
  return route;
}

ScheduleTable BuildSchedule(const std::vector<Route>& routes) {
  ScheduleTable table;
  if (routes.empty()) return table;
  std::vector<const Route*> ordered;
  for (const Route& route : routes) ordered.push_back(&route);
  std::sort(ordered.begin(), ordered.end(),
            [](const Route* x, const Route* y) { return x->agv_id < y->agv_id; });

  table.first_slot = ordered.front()->start_slot;
  table.last_slot = ordered.front()->FinalArrivalSlot();
  for (const Route* route : ordered) {
    table.first_slot = std::min(table.first_slot, route->start_slot);
    table.last_slot = std::max(table.last_slot, route->FinalArrivalSlot());
  }
  for (int slot = table.first_slot; slot <= table.last_slot; ++slot) {
    auto& row = table.entries[slot];
    for (const Route* route : ordered) {
      row[route->ZoneAtSlot(slot)].push_back(route->agv_id);
    }
  }
  return table;
}

namespace {

struct ConflictRecord {
  int slot;
  ZoneId zone;
  bool swap;
};

// Slot at which `route` is first seen in `zone` within a table starting at
// `first_slot` (an AGV is in zones[0] from the table start).
int FirstArrival(const Route& route, const ZoneId& zone, int first_slot) {
  const std::size_t index = *route.IndexOf(zone);
  if (index == 0) return std::min(first_slot, route.start_slot);
  return route.ArrivalSlot(index);
}

int LastPresence(const Route& route, const ZoneId& zone) {
  const std::size_t index = *route.IndexOf(zone);
  if (index + 1 == route.zones.size()) return kNeverExits;
  return route.ArrivalSlot(index) + route.WaitAt(index);
}

bool Consecutive(const Route& route, const ZoneId& x, const ZoneId& y) {
  const std::size_t ix = *route.IndexOf(x);
  const std::size_t iy = *route.IndexOf(y);
  return ix + 1 == iy || iy + 1 == ix;
}

CollisionArea MakeArea(const Route& first, const Route& second,
                       std::set<ZoneId> zones, int first_conflict_slot,
                       bool has_swap, int table_first_slot) {
  auto first_arrival = [&](const Route& route) {
    int best = kNeverExits;
    for (const ZoneId& zone : zones) {
      best = std::min(best, FirstArrival(route, zone, table_first_slot));
    }
    return best;
  };
  auto parks_inside = [&](const Route& route) {
    return zones.contains(route.zones.back());
  };

  const Route* hi = &first;
  const Route* lo = &second;
  const int arrival_first = first_arrival(first);
  const int arrival_second = first_arrival(second);
  if (arrival_second < arrival_first ||
      (arrival_second == arrival_first && second.agv_id < first.agv_id)) {
    std::swap(hi, lo);
  }
  // An AGV that stops inside the area never lets the other through.
  if (parks_inside(*hi) && !parks_inside(*lo)) std::swap(hi, lo);

  CollisionArea area;
  area.agv_hi = hi->agv_id;
  area.agv_lo = lo->agv_id;
  area.first_conflict_slot = first_conflict_slot;
  area.has_swap = has_swap;
  area.hi_exit_slot = 0;
  for (const ZoneId& zone : zones) {
    area.hi_exit_slot = std::max(area.hi_exit_slot, LastPresence(*hi, zone));
  }
  area.lo_entry_index = lo->zones.size();
  for (const ZoneId& zone : zones) {
    area.lo_entry_index = std::min(area.lo_entry_index, *lo->IndexOf(zone));
  }
  area.zones = std::move(zones);
  return area;
}

}  // namespace

std::vector<CollisionArea> DetectConflicts(const ScheduleTable& table,
                                           const std::vector<Route>& routes) {
  std::map<int, const Route*> by_id;
  for (const Route& route : routes) by_id[route.agv_id] = &route;

  std::map<std::pair<int, int>, std::vector<ConflictRecord>> per_pair;
  for (const auto& [slot, row] : table.entries) {
    for (const auto& [zone, ids] : row) {
      for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
          const auto key = std::minmax(ids[i], ids[j]);
          per_pair[{key.first, key.second}].push_back({slot, zone, false});
        }
      }
    }
  }
  for (int slot = table.first_slot; slot < table.last_slot; ++slot) {
    for (auto it = by_id.begin(); it != by_id.end(); ++it) {
      const Route& x = *it->second;
      const ZoneId x_now = x.ZoneAtSlot(slot);
      const ZoneId x_next = x.ZoneAtSlot(slot + 1);
      if (x_now == x_next) continue;
      for (auto jt = std::next(it); jt != by_id.end(); ++jt) {
        const Route& y = *jt->second;
        if (y.ZoneAtSlot(slot) == x_next && y.ZoneAtSlot(slot + 1) == x_now) {
          auto& records = per_pair[{x.agv_id, y.agv_id}];
          records.push_back({slot + 1, x_now, true});
          records.push_back({slot + 1, x_next, true});
        }
      }
    }
  }

  std::vector<CollisionArea> areas;
  for (const auto& [pair, records] : per_pair) {
    const Route& first = *by_id.at(pair.first);
    const Route& second = *by_id.at(pair.second);

    std::vector<ZoneId> zones;
    for (const ConflictRecord& record : records) zones.push_back(record.zone);
    std::sort(zones.begin(), zones.end());
    zones.erase(std::unique(zones.begin(), zones.end()), zones.end());

    // Union-find over zones consecutive along both routes.
    std::vector<std::size_t> parent(zones.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t k) {
      while (parent[k] != k) k = parent[k] = parent[parent[k]];
      return k;
    };
    for (std::size_t i = 0; i < zones.size(); ++i) {
      for (std::size_t j = i + 1; j < zones.size(); ++j) {
        if (Consecutive(first, zones[i], zones[j]) &&
            Consecutive(second, zones[i], zones[j])) {
          parent[find(i)] = find(j);
        }
      }
    }

    std::map<std::size_t, std::set<ZoneId>> groups;
    for (std::size_t i = 0; i < zones.size(); ++i) groups[find(i)].insert(zones[i]);
    for (auto& [root, group] : groups) {
      int first_slot = kNeverExits;
      bool has_swap = false;
      for (const ConflictRecord& record : records) {
        if (!group.contains(record.zone)) continue;
        first_slot = std::min(first_slot, record.slot);
        has_swap = has_swap || record.swap;
      }
      areas.push_back(MakeArea(first, second, std::move(group), first_slot,
                               has_swap, table.first_slot));
    }
  }

  std::sort(areas.begin(), areas.end(),
            [](const CollisionArea& x, const CollisionArea& y) {
              const auto kx = std::make_tuple(x.first_conflict_slot,
                                              std::min(x.agv_hi, x.agv_lo),
                                              std::max(x.agv_hi, x.agv_lo),
                                              *x.zones.begin());
              const auto ky = std::make_tuple(y.first_conflict_slot,
                                              std::min(y.agv_hi, y.agv_lo),
                                              std::max(y.agv_hi, y.agv_lo),
                                              *y.zones.begin());
              return kx < ky;
            });
  return areas;
}

namespace {

void CheckRouteOnGraph(const Route& route, const FloorGraph& graph) {
  if (route.zones.empty()) {
    throw Error(ErrorCode::kInvariantViolation,
                "AGV " + std::to_string(route.agv_id) + " has an empty route");
  }
  for (std::size_t i = 0; i + 1 < route.zones.size(); ++i) {
    if (!graph.Contains(route.zones[i]) || !graph.Contains(route.zones[i + 1]) ||
        graph.H(route.zones[i], route.zones[i + 1]) != 1.0) {
      throw Error(ErrorCode::kInvariantViolation,
                  "AGV " + std::to_string(route.agv_id) + " route step " +
                      ToString(route.zones[i]) + " -> " +
                      ToString(route.zones[i + 1]) + " is not an edge");
    }
  }
}

Route& RouteOf(std::vector<Route>& routes, int agv_id) {
  for (Route& route : routes) {
    if (route.agv_id == agv_id) return route;
  }
  throw Error(ErrorCode::kInvariantViolation,
              "no route for AGV " + std::to_string(agv_id));
}

}  // namespace

ResolveResult ResolveWaiting(std::vector<Route> routes, const FloorGraph& graph,
                             int max_rounds) {
  // Waiting longer than it takes every AGV to drive its whole route in
  // turn cannot help; it only means the waits are chasing each other.
  int wait_budget = 0;
  for (const Route& route : routes) {
    CheckRouteOnGraph(route, graph);
    wait_budget += static_cast<int>(route.zones.size());
  }

  ResolveResult result;
  for (int round = 1; round <= max_rounds; ++round) {
    const std::vector<CollisionArea> areas =
        DetectConflicts(BuildSchedule(routes), routes);
    if (areas.empty()) {
      result.resolved = true;
      break;
    }
    const CollisionArea& area = areas.front();
    result.rounds = round;
    result.handled_areas.push_back(area);
    if (area.hi_exit_slot == kNeverExits) break;  // both stop inside

    Route& lo = RouteOf(routes, area.agv_lo);
    const std::size_t wait_index =
        area.lo_entry_index > 0 ? area.lo_entry_index - 1 : 0;
    const int entry_slot = lo.ArrivalSlot(area.lo_entry_index);
    const int added = std::max(1, area.hi_exit_slot + 1 - entry_slot);
    lo.waits[wait_index] += added;
    result.assignments.push_back({round, lo.agv_id, wait_index,
                                  lo.zones[wait_index], added, area.agv_hi,
                                  area.zones});
    if (lo.TotalWaits() > wait_budget) break;
  }
  if (!result.resolved) {
    result.resolved = DetectConflicts(BuildSchedule(routes), routes).empty();
  }
  result.routes = std::move(routes);
  return result;
}

ReplanResult Replan(const FloorGraph& graph,
                    const std::vector<AgvPlanState>& agvs,
                    const std::vector<Mission>& active_missions, int slot,
                    int max_rounds) {
  std::vector<AgvPlanState> ordered = agvs;
  std::sort(ordered.begin(), ordered.end(),
            [](const AgvPlanState& x, const AgvPlanState& y) {
              return x.agv_id < y.agv_id;
            });
  std::map<int, const Mission*> mission_of;
  for (const Mission& mission : active_missions) mission_of[mission.agv_id] = &mission;

  ReplanResult result;
  std::set<ZoneId> obstacles;
  for (const AgvPlanState& agv : ordered) {
    if (!mission_of.contains(agv.agv_id)) {
      obstacles.insert(agv.zone);
      result.status[agv.agv_id] = PlanStatus::kIdle;
    }
  }

  std::map<int, Route> planned;
  for (bool restart = true; restart;) {
    restart = false;
    planned.clear();
    FloorGraph routing = graph;
    for (const ZoneId& zone : obstacles) {
      if (!routing.IsOccupied(zone)) routing = MarkOccupied(std::move(routing), zone);
    }
    for (const AgvPlanState& agv : ordered) {
      auto it = mission_of.find(agv.agv_id);
      if (it == mission_of.end() || result.status.contains(agv.agv_id)) continue;
      const ZoneId& dest = it->second->destination;
      std::optional<Route> route;
      if (dest == agv.zone) {
        route = Route{agv.agv_id, {agv.zone}, slot, {}};
      } else if (routing.Contains(dest) && !routing.IsOccupied(dest)) {
        route = ShortestPath(routing, agv.zone, dest, agv.agv_id, slot);
      }
      if (!route) {
        result.status[agv.agv_id] = PlanStatus::kNoPath;
        obstacles.insert(agv.zone);
        restart = true;
        break;
      }
      if (agv.entry && route->zones.size() > 1 &&
          SideFacing(route->zones[0], route->zones[1]) == agv.entry) {
        route->start_slot = slot + 1;
      }
      planned[agv.agv_id] = std::move(*route);
    }
  }

  std::vector<Route> routes;
  for (const AgvPlanState& agv : ordered) {
    auto it = planned.find(agv.agv_id);
    if (it != planned.end()) {
      result.status[agv.agv_id] = PlanStatus::kRouted;
      routes.push_back(std::move(it->second));
    } else {
      routes.push_back(Route{agv.agv_id, {agv.zone}, slot, {}});
    }
  }

  ResolveResult resolved = ResolveWaiting(std::move(routes), graph, max_rounds);
  result.routes = std::move(resolved.routes);
  result.resolved = resolved.resolved;
  result.assignments = std::move(resolved.assignments);
  result.handled_areas = std::move(resolved.handled_areas);
  return result;
}

HoldResult ReplanWithHolds(const FloorGraph& graph,
                           const std::vector<AgvPlanState>& agvs,
                           const std::vector<Mission>& active_missions, int slot,
                           int max_rounds) {
  HoldResult result;
  std::vector<Mission> missions = active_missions;
  auto has_mission = [&missions](int agv_id) {
    return std::any_of(missions.begin(), missions.end(),
                       [agv_id](const Mission& m) { return m.agv_id == agv_id; });
  };
  for (;;) {
    result.plan = Replan(graph, agvs, missions, slot, max_rounds);
    if (result.plan.resolved) return result;
    const std::vector<CollisionArea> areas =
        DetectConflicts(BuildSchedule(result.plan.routes), result.plan.routes);
    if (areas.empty()) {
      result.plan.resolved = true;
      return result;
    }
    int hold = areas.front().agv_lo;
    if (!has_mission(hold)) hold = areas.front().agv_hi;
    if (!has_mission(hold)) {
      throw Error(ErrorCode::kInvariantViolation,
                  "conflict between AGVs that both hold in place");
    }
    result.held.insert(hold);
    result.unresolved_areas.push_back(areas.front());
    std::erase_if(missions, [hold](const Mission& m) { return m.agv_id == hold; });
  }
}

}  // namespace agvtwin
