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

#include "agvtwin/twin.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "agvtwin/error.h"

namespace agvtwin {

namespace {

// Zone sequences of two routes agree from `slot` on.
bool SameFuture(const Route& lhs, const Route& rhs, int slot) {
  if (lhs.agv_id != rhs.agv_id || lhs.zones.empty() || rhs.zones.empty()) return false;
  const int horizon = std::max({slot, lhs.FinalArrivalSlot(), rhs.FinalArrivalSlot()});
  for (int t = slot; t <= horizon; ++t) {
    if (lhs.ZoneAtSlot(t) != rhs.ZoneAtSlot(t)) return false;
  }
  return true;
}

Json AreaToJson(const CollisionArea& area) {
  Json out;
  out["agv_hi"] = area.agv_hi;
  out["agv_lo"] = area.agv_lo;
  out["zones"] = ZonesToJson(area.zones);
  out["first_conflict_slot"] = area.first_conflict_slot;
  if (area.hi_exit_slot == kNeverExits) {
    out["hi_exit_slot"] = nullptr;
  } else {
    out["hi_exit_slot"] = area.hi_exit_slot;
  }
  out["swap"] = area.has_swap;
  return out;
}

const char* ToString(MissionKind kind) {
  return kind == MissionKind::kCharging ? "charging" : "transport";
}

}  // namespace

int TwinConfig::TicksPerSlot() const {
  if (!(zone_side > 0.0) || !(nominal_speed > 0.0) || !(tick_dt > 0.0)) {
    throw ValidationError("tick_dt", "zone_side, nominal_speed and tick_dt must be positive");
  }
  const double ratio = SlotDuration() / tick_dt;
  const double ticks = std::round(ratio);
  if (ticks < 1.0 || std::abs(ratio - ticks) > 1e-9 * ratio || ticks > 1e9) {
    throw ValidationError("tick_dt", "slot duration zone_side / nominal_speed must be a "
                                     "whole number of ticks");
  }
  return static_cast<int>(ticks);
}

const char* ToString(RunOutcome outcome) {
  switch (outcome) {
    case RunOutcome::kRunning:
      return "running";
    case RunOutcome::kCompleted:
      return "completed";
    case RunOutcome::kDeadlock:
      return "deadlock";
    case RunOutcome::kMaxSlots:
      return "max_slots";
  }
  return "unknown";
}

Json MetricsToJson(const MetricsReport& metrics) {
  Json travel = Json::object();
  for (const auto& [id, slots] : metrics.mission_travel_slots) {
    travel[std::to_string(id)] = slots;
  }
  Json waits = Json::object();
  for (const auto& [id, slots] : metrics.agv_wait_slots) waits[std::to_string(id)] = slots;
  Json distance = Json::object();
  for (const auto& [id, meters] : metrics.agv_distance) {
    distance[std::to_string(id)] = RoundForTrace(meters);
  }
  Json out;
  out["mission_travel_slots"] = std::move(travel);
  out["agv_wait_slots"] = std::move(waits);
  out["agv_distance"] = std::move(distance);
  out["makespan_slots"] = metrics.makespan_slots;
  out["collision_count"] = metrics.collision_count;
  out["deadlock"] = metrics.deadlock;
  out["charging_events"] = metrics.charging_events;
  out["outcome"] = ToString(metrics.outcome);
  return out;
}

FloorGraph SyncMap(const FloorGraph& graph, const MapUpdate& update,
                   const std::vector<ZoneId>& agv_zones) {
  for (const ZoneId& zone : update.set_occupied) {
    if (!graph.Contains(zone)) {
      throw Error(ErrorCode::kOutOfBounds, ToString(zone) + " is off the floor");
    }
    if (std::find(agv_zones.begin(), agv_zones.end(), zone) != agv_zones.end()) {
      throw Error(ErrorCode::kAgvInZone, "an AGV is in " + ToString(zone));
    }
  }
  for (const ZoneId& zone : update.set_free) {
    if (!graph.Contains(zone)) {
      throw Error(ErrorCode::kOutOfBounds, ToString(zone) + " is off the floor");
    }
  }
  FloorGraph next = graph;
  for (const ZoneId& zone : update.set_occupied) next = MarkOccupied(std::move(next), zone);
  for (const ZoneId& zone : update.set_free) next = MarkFree(std::move(next), zone);
  return next;
}

ChargingCheckResult ChargingCheck(const std::vector<AgvState>& states,
                                  const TwinConfig& config, const FloorGraph& graph,
                                  const std::set<ZoneId>& stations,
                                  const std::set<int>& excluded,
                                  const std::set<ZoneId>& reserved) {
  std::set<ZoneId> taken = reserved;
  std::vector<ZoneId> ordered;
  for (const ZoneId& station : stations) {
    if (graph.Contains(station) && !graph.IsOccupied(station)) ordered.push_back(station);
  }
  std::sort(ordered.begin(), ordered.end(), [&graph](const ZoneId& x, const ZoneId& y) {
    return graph.IndexOf(x) < graph.IndexOf(y);
  });
  std::map<ZoneId, std::vector<int>> distances;

  ChargingCheckResult result;
  for (const AgvState& state : states) {
    if (excluded.contains(state.agv_id) || state.status == AgvStatus::kCharging) continue;
    if (state.odometer < config.charge_distance_threshold &&
        state.duty_time < config.charge_time_threshold) {
      continue;
    }
    std::optional<ZoneId> best;
    int best_distance = -1;
    bool any_reachable = false;
    for (const ZoneId& station : ordered) {
      auto it = distances.find(station);
      if (it == distances.end()) {
        it = distances.emplace(station, DistancesTo(graph, station)).first;
      }
      const int d = it->second[graph.IndexOf(state.zone)];
      if (d < 0) continue;
      any_reachable = true;
      if (taken.contains(station) && station != state.zone) continue;
      if (!best || d < best_distance) {
        best = station;
        best_distance = d;
      }
    }
    if (!best) {
      if (!any_reachable) result.unreachable.push_back(state.agv_id);
      continue;
    }
    taken.insert(*best);
    result.missions.push_back(
        Mission{0, state.agv_id, state.zone, *best, 0, MissionKind::kCharging});
  }
  return result;
}

AgvState ChargingExecute(const AgvState& state) {
  AgvState next = state;
  next.odometer = 0.0;
  next.duty_ticks = 0;
  next.duty_time = 0.0;
  next.status = AgvStatus::kIdle;
  return next;
}

bool DetectDeadlock(int stalled_slots, bool missions_pending, const TwinConfig& config) {
  return missions_pending && stalled_slots >= config.stall_slots_for_deadlock;
}

Twin::Twin(const OccupancyGrid& grid, const TwinConfig& config, std::vector<AgvSpec> agvs,
           std::vector<Mission> missions, std::vector<MapUpdate> updates,
           TraceWriter* trace)
    : config_(config),
      ticks_per_slot_(config.TicksPerSlot()),
      graph_(BuildGraph(grid, config.wait_weight)),
      stations_(grid.stations),
      frame_(grid.n, grid.m, config.zone_side),
      updates_(std::move(updates)),
      trace_(trace) {
  std::sort(agvs.begin(), agvs.end(),
            [](const AgvSpec& x, const AgvSpec& y) { return x.agv_id < y.agv_id; });
  for (const AgvSpec& spec : agvs) {
    if (!graph_.Contains(spec.start_zone) || graph_.IsOccupied(spec.start_zone)) {
      throw ValidationError("agvs", "start zone " + ToString(spec.start_zone) +
                                        " is not a free zone");
    }
    Agv agv;
    const Point center = frame_.ZoneCenter(spec.start_zone);
    agv.state.agv_id = spec.agv_id;
    agv.state.pose = Pose{center.x, center.y, NormalizeAngle(spec.heading)};
    agv.state.speed = config.nominal_speed;
    agv.state.zone = spec.start_zone;
    agv.route = Route{spec.agv_id, {spec.start_zone}, 0, {}};
    agvs_.push_back(std::move(agv));
    metrics_.agv_wait_slots[spec.agv_id] = 0;
    metrics_.agv_distance[spec.agv_id] = 0.0;
  }

  std::stable_sort(missions.begin(), missions.end(), [](const Mission& x, const Mission& y) {
    return std::pair(x.release_slot, x.mission_id) < std::pair(y.release_slot, y.mission_id);
  });
  for (const Mission& mission : missions) {
    auto it = std::find_if(agvs_.begin(), agvs_.end(), [&](const Agv& agv) {
      return agv.state.agv_id == mission.agv_id;
    });
    if (it == agvs_.end()) {
      throw ValidationError("missions", "mission " + std::to_string(mission.mission_id) +
                                            " names unknown AGV " +
                                            std::to_string(mission.agv_id));
    }
    it->queue.push_back(static_cast<int>(book_.size()));
    book_.push_back(MissionBook{mission});
    next_mission_id_ = std::max(next_mission_id_, mission.mission_id + 1);
  }
  std::stable_sort(updates_.begin(), updates_.end(),
                   [](const MapUpdate& x, const MapUpdate& y) { return x.slot < y.slot; });
}

std::int64_t Twin::TickAt(int slot, int k) const {
  return static_cast<std::int64_t>(slot) * ticks_per_slot_ + k;
}

void Twin::Emit(const std::string& type, Json payload, int k) {
  if (trace_ != nullptr) trace_->Emit(slot_, TickAt(slot_, k), type, std::move(payload));
}

std::vector<AgvState> Twin::agv_states() const {
  std::vector<AgvState> states;
  for (const Agv& agv : agvs_) states.push_back(agv.state);
  return states;
}

const Route* Twin::CurrentRoute(int agv_id) const {
  for (const Agv& agv : agvs_) {
    if (agv.state.agv_id == agv_id) return &agv.route;
  }
  return nullptr;
}

const Mission* Twin::ActiveMission(const Agv& agv) const {
  if (!agv.activated || agv.queue.empty()) return nullptr;
  return &book_[agv.queue.front()].mission;
}

bool Twin::MissionsPending() const {
  for (const MissionBook& entry : book_) {
    if (!entry.done && entry.mission.release_slot <= slot_) return true;
  }
  return false;
}

bool Twin::ChargingOutstanding() const {
  return std::any_of(agvs_.begin(), agvs_.end(),
                     [](const Agv& agv) { return agv.charge_until >= 0; });
}

bool Twin::ParkedAt(const Agv& agv, const ZoneId& zone) const {
  return agv.state.zone == zone && !agv.state.entry && agv.plan.empty() && !agv.active;
}

bool Twin::Finished() {
  if (metrics_.outcome != RunOutcome::kRunning) return true;
  const bool all_done = std::all_of(book_.begin(), book_.end(),
                                    [](const MissionBook& entry) { return entry.done; });
  if (all_done && !ChargingOutstanding()) {
    metrics_.outcome = RunOutcome::kCompleted;
    metrics_.makespan_slots = slot_;
    return true;
  }
  return false;
}

RunOutcome Twin::Run(int max_slots) {
  while (!Finished()) {
    if (slot_ >= max_slots) {
      metrics_.outcome = RunOutcome::kMaxSlots;
      metrics_.makespan_slots = slot_;
      break;
    }
    RunSlotCycle();
  }
  return metrics_.outcome;
}

void Twin::RunSlotCycle() {
  activity_ = false;
  bool map_changed = false;
  if (slot_ % config_.sync_interval_slots == 0) map_changed = SyncStep();

  const bool activated = ActivateMissions();
  if (slot_ % config_.replan_interval_slots == 0 || map_changed || activated ||
      unresolved_) {
    ReplanStep();
  }
  if (ChargingStep()) ReplanStep();

  std::map<int, ZoneId> before;
  for (const Agv& agv : agvs_) before[agv.state.agv_id] = agv.state.zone;
  AdvanceStep();
  MetricsStep(before);
  CompletionStep();
  DeadlockStep();
  ++slot_;
}

bool Twin::SyncStep() {
  std::vector<ZoneId> zones;
  for (const Agv& agv : agvs_) zones.push_back(agv.state.zone);
  bool changed = false;
  for (auto it = updates_.begin(); it != updates_.end() && it->slot <= slot_;) {
    Json payload;
    payload["update_slot"] = it->slot;
    payload["set_occupied"] = ZonesToJson(it->set_occupied);
    payload["set_free"] = ZonesToJson(it->set_free);
    try {
      graph_ = SyncMap(graph_, *it, zones);
    } catch (const Error& error) {
      if (error.code() != ErrorCode::kAgvInZone) throw;
      payload["reason"] = error.what();
      Emit("map_update_deferred", std::move(payload));
      ++it;
      continue;
    }
    Emit("map_update_applied", std::move(payload));
    changed = true;
    it = updates_.erase(it);
  }
  return changed;
}

bool Twin::ActivateMissions() {
  bool any = false;
  for (Agv& agv : agvs_) {
    while (!agv.activated && !agv.queue.empty() && agv.charge_until < 0) {
      MissionBook& entry = book_[agv.queue.front()];
      if (entry.mission.release_slot > slot_) break;
      agv.activated = true;
      if (entry.activation_slot < 0) entry.activation_slot = slot_;
      any = true;
      if (ParkedAt(agv, entry.mission.destination)) FinishMission(agv, true);
    }
  }
  return any;
}

void Twin::ReplanStep() {
  std::vector<AgvPlanState> states;
  std::vector<Mission> active;
  for (const Agv& agv : agvs_) {
    states.push_back(AgvPlanState{agv.state.agv_id, agv.state.zone, agv.state.entry});
    if (const Mission* mission = ActiveMission(agv)) active.push_back(*mission);
  }
  const HoldResult outcome =
      ReplanWithHolds(graph_, states, active, slot_, config_.max_resolution_rounds);
  const ReplanResult& plan = outcome.plan;
  const std::set<int>& held = outcome.held;
  for (const CollisionArea& area : outcome.unresolved_areas) {
    Json payload = AreaToJson(area);
    payload["resolved"] = false;
    payload["held"] = Json(std::vector<int>(held.begin(), held.end()));
    Emit("conflict_detected", std::move(payload));
  }

  for (Agv& agv : agvs_) {
    const PlanStatus status = plan.status.at(agv.state.agv_id);
    if (held.contains(agv.state.agv_id)) {
      agv.nopath = false;
      continue;
    }
    if (status == PlanStatus::kNoPath) {
      if (!agv.nopath) {
        Json payload;
        payload["agv"] = agv.state.agv_id;
        payload["mission"] = ActiveMission(agv)->mission_id;
        payload["zone"] = ZoneToJson(agv.state.zone);
        payload["destination"] = ZoneToJson(ActiveMission(agv)->destination);
        Emit("nopath", std::move(payload));
      }
      agv.nopath = true;
    } else {
      agv.nopath = false;
    }
  }
  for (std::size_t i = 0; i < plan.handled_areas.size(); ++i) {
    Json payload = AreaToJson(plan.handled_areas[i]);
    payload["round"] = static_cast<int>(i) + 1;
    payload["resolved"] = true;
    Emit("conflict_detected", std::move(payload));
  }
  for (const WaitAssignment& wait : plan.assignments) {
    Json payload;
    payload["agv"] = wait.agv_id;
    payload["round"] = wait.round;
    payload["route_index"] = wait.route_index;
    payload["zone"] = ZoneToJson(wait.zone);
    payload["added_slots"] = wait.added_slots;
    payload["high_priority_agv"] = wait.high_priority_agv;
    payload["area"] = ZonesToJson(wait.area);
    Emit("wait_assigned", std::move(payload));
  }

  // Held AGVs get another chance next slot.
  unresolved_ = !held.empty();
  CompileStep(plan.routes, held);
}

void Twin::CompileStep(const std::vector<Route>& routes, const std::set<int>& held) {
  for (const Route& route : routes) {
    auto it = std::find_if(agvs_.begin(), agvs_.end(), [&](const Agv& agv) {
      return agv.state.agv_id == route.agv_id;
    });
    Agv& agv = *it;
    if (SameFuture(agv.route, route, slot_)) continue;
    agv.route = route;
    BuildPlan(agv, route);
    Json payload = RouteToJson(route);
    const Mission* mission = ActiveMission(agv);
    if (mission != nullptr) {
      payload["mission"] = mission->mission_id;
    } else {
      payload["mission"] = nullptr;
    }
    payload["held"] = held.contains(route.agv_id);
    Emit("route_computed", std::move(payload));
  }
}

void Twin::BuildPlan(Agv& agv, const Route& route) {
  agv.plan.clear();
  agv.active.reset();
  const double s = config_.zone_side;
  RouteStart start{agv.state.entry, agv.state.pose.theta};
  if (start.entry && route.start_slot > slot_) {
    // Turning back: stop at the center first, depart from there next slot.
    const Maneuver arrive = SelectManeuver(*start.entry, route.zones[0], StopAtCenter{});
    agv.plan.push_back(
        {slot_, GenerateTrajectory(arrive, s, frame_.ZoneOrigin(route.zones[0]))});
    start = RouteStart{std::nullopt, InwardHeading(*start.entry)};
  }
  int t = route.start_slot;
  for (const Maneuver& maneuver : CompileManeuvers(route, start)) {
    agv.plan.push_back({t, GenerateTrajectory(maneuver, s, frame_.ZoneOrigin(maneuver.zone))});
    t += maneuver.kind == ManeuverKind::kWait ? maneuver.dwell_slots : 1;
  }
  if (!agv.plan.empty() && agv.plan.back().slot != route.FinalArrivalSlot() &&
      route.zones.size() > 1) {
    throw Error(ErrorCode::kInvariantViolation,
                "compiled plan of AGV " + std::to_string(agv.state.agv_id) +
                    " does not end at its final arrival slot");
  }
}

bool Twin::ChargingStep() {
  std::set<int> excluded;
  std::set<ZoneId> reserved;
  std::vector<AgvState> states;
  for (const Agv& agv : agvs_) {
    const Mission* mission = ActiveMission(agv);
    if (agv.charge_until >= 0 || mission == nullptr) reserved.insert(agv.state.zone);
    for (int index : agv.queue) {
      if (book_[index].mission.kind == MissionKind::kCharging) {
        reserved.insert(book_[index].mission.destination);
      }
    }
    bool assigned = agv.charge_until >= 0 || agv.station_warned;
    for (int index : agv.queue) {
      if (book_[index].mission.kind == MissionKind::kCharging) assigned = true;
    }
    if (mission != nullptr && mission->kind == MissionKind::kCharging) assigned = true;
    if (assigned) excluded.insert(agv.state.agv_id);
    states.push_back(agv.state);
  }
  const ChargingCheckResult check =
      ChargingCheck(states, config_, graph_, stations_, excluded, reserved);
  for (int id : check.unreachable) {
    for (Agv& agv : agvs_) {
      if (agv.state.agv_id != id) continue;
      agv.station_warned = true;
      Json payload;
      payload["agv"] = id;
      payload["mission"] = nullptr;
      payload["zone"] = ZoneToJson(agv.state.zone);
      payload["reason"] = "no charging station reachable";
      Emit("nopath", std::move(payload));
    }
  }
  bool created = false;
  for (Mission mission : check.missions) {
    Agv& agv = *std::find_if(agvs_.begin(), agvs_.end(), [&](const Agv& candidate) {
      return candidate.state.agv_id == mission.agv_id;
    });
    mission.mission_id = next_mission_id_++;
    mission.release_slot = slot_;
    Json payload;
    payload["agv"] = mission.agv_id;
    payload["mission"] = mission.mission_id;
    payload["station"] = ZoneToJson(mission.destination);
    payload["odometer"] = RoundForTrace(agv.state.odometer);
    payload["duty_time"] = RoundForTrace(agv.state.duty_time);
    if (const Mission* suspended = ActiveMission(agv)) {
      payload["suspended_mission"] = suspended->mission_id;
    } else {
      payload["suspended_mission"] = nullptr;
    }
    Emit("charging_mission", std::move(payload));

    agv.queue.push_front(static_cast<int>(book_.size()));
    book_.push_back(MissionBook{mission, slot_, false});
    agv.activated = true;
    created = true;
    if (ParkedAt(agv, mission.destination)) FinishMission(agv, true);
  }
  return created;
}

AgvStatus Twin::StatusForSlot(const Agv& agv) const {
  if (agv.charge_from >= 0 && agv.charge_from <= slot_ && slot_ <= agv.charge_until) {
    return AgvStatus::kCharging;
  }
  if (agv.active) {
    return agv.active->kind == ManeuverKind::kWait ? AgvStatus::kWaiting
                                                   : AgvStatus::kMoving;
  }
  if (ActiveMission(agv) != nullptr) {
    return agv.nopath ? AgvStatus::kNoPath : AgvStatus::kStalled;
  }
  return AgvStatus::kIdle;
}

void Twin::AdvanceStep() {
  for (Agv& agv : agvs_) {
    if (!agv.active && !agv.plan.empty() && agv.plan.front().slot == slot_) {
      agv.active = std::move(agv.plan.front().trajectory);
      agv.plan.pop_front();
      agv.active_end_slot = slot_;
      if (agv.active->kind == ManeuverKind::kWait) {
        const auto& dwell = std::get<DwellSegment>(agv.active->segments.front());
        agv.active_end_slot = slot_ + dwell.slots - 1;
      }
      agv.state.trajectory_ticks = 0;
      agv.state.arc_position = 0.0;
      agv.state.trajectory_done = false;
    }
    if (!agv.plan.empty() && agv.plan.front().slot <= slot_) {
      throw Error(ErrorCode::kInvariantViolation,
                  "AGV " + std::to_string(agv.state.agv_id) + " missed a planned maneuver");
    }
    agv.state.status = StatusForSlot(agv);
    if (agv.state.status == AgvStatus::kWaiting || agv.state.status == AgvStatus::kStalled) {
      ++metrics_.agv_wait_slots[agv.state.agv_id];
    }
  }

  const double dt = config_.tick_dt;
  const int every = config_.pose_log_every_n_ticks;
  for (int k = 0; k < ticks_per_slot_; ++k) {
    for (Agv& agv : agvs_) {
      if (agv.active && !agv.state.trajectory_done) {
        StepResult step = Step(agv.state, *agv.active, dt);
        agv.state = std::move(step.state);
        if (step.crossed) {
          activity_ = true;
          Json payload;
          payload["agv"] = step.crossed->agv_id;
          payload["from"] = ZoneToJson(step.crossed->from);
          payload["to"] = ZoneToJson(step.crossed->to);
          payload["border"] = ToString(step.crossed->border);
          Emit("border_crossed", std::move(payload), k + 1);
        }
      } else {
        agv.state = Dwell(agv.state, dt);
      }
      if (every > 0 && (TickAt(slot_, k + 1) % every) == 0) {
        Json payload;
        payload["agv"] = agv.state.agv_id;
        payload["pose"] = PoseToJson(agv.state.pose);
        payload["status"] = ToString(agv.state.status);
        Emit("pose", std::move(payload), k + 1);
      }
    }
  }

  for (Agv& agv : agvs_) {
    if (agv.active && slot_ >= agv.active_end_slot) {
      if (!agv.state.trajectory_done) {
        throw Error(ErrorCode::kInvariantViolation,
                    "AGV " + std::to_string(agv.state.agv_id) +
                        " did not finish its maneuver within the slot");
      }
      agv.active.reset();
    }
  }
}

void Twin::MetricsStep(const std::map<int, ZoneId>& before) {
  const int end_k = ticks_per_slot_;
  for (std::size_t i = 0; i < agvs_.size(); ++i) {
    const Agv& x = agvs_[i];
    for (std::size_t j = i + 1; j < agvs_.size(); ++j) {
      const Agv& y = agvs_[j];
      const bool vertex = x.state.zone == y.state.zone;
      const bool swap = !vertex && x.state.zone == before.at(y.state.agv_id) &&
                        y.state.zone == before.at(x.state.agv_id);
      if (!vertex && !swap) continue;
      ++metrics_.collision_count;
      Json payload;
      payload["agvs"] = Json::array({x.state.agv_id, y.state.agv_id});
      payload["zone"] = ZoneToJson(x.state.zone);
      payload["kind"] = vertex ? "vertex" : "swap";
      Emit("collision_violation", std::move(payload), end_k);
    }
  }
  for (Agv& agv : agvs_) {
    metrics_.agv_distance[agv.state.agv_id] = agv.state.total_distance;
    const ZoneId expected = agv.route.ZoneAtSlot(slot_ + 1);
    const ZoneId located = ZoneOfPose(agv.state.pose, config_.zone_side, graph_.n(),
                                      graph_.m(), agv.state.zone);
    if (agv.state.zone != expected || located != agv.state.zone) {
      throw Error(ErrorCode::kInvariantViolation,
                  "AGV " + std::to_string(agv.state.agv_id) + " is in " +
                      ToString(agv.state.zone) + " at (" + std::to_string(agv.state.pose.x) +
                      ", " + std::to_string(agv.state.pose.y) + ") but its schedule says " +
                      ToString(expected) + " and the pose lies in " + ToString(located));
    }
  }
}

void Twin::FinishMission(Agv& agv, bool immediate) {
  MissionBook& entry = book_[agv.queue.front()];
  entry.done = true;
  const int travel = immediate && entry.activation_slot == slot_
                         ? 0
                         : slot_ - entry.activation_slot + 1;
  metrics_.mission_travel_slots[entry.mission.mission_id] = travel;
  activity_ = true;
  Json payload;
  payload["agv"] = agv.state.agv_id;
  payload["mission"] = entry.mission.mission_id;
  payload["kind"] = ToString(entry.mission.kind);
  payload["destination"] = ZoneToJson(entry.mission.destination);
  payload["travel_slots"] = travel;
  Emit("mission_done", std::move(payload), immediate ? 0 : ticks_per_slot_);
  agv.queue.pop_front();
  agv.activated = false;
  if (entry.mission.kind == MissionKind::kCharging) {
    agv.charge_from = slot_ + 1;
    agv.charge_until = slot_ + config_.charge_duration_slots;
    Json started;
    started["agv"] = agv.state.agv_id;
    started["station"] = ZoneToJson(entry.mission.destination);
    started["from_slot"] = agv.charge_from;
    started["until_slot"] = agv.charge_until;
    Emit("charging_started", std::move(started), immediate ? 0 : ticks_per_slot_);
  }
}

void Twin::CompletionStep() {
  for (Agv& agv : agvs_) {
    if (agv.charge_until == slot_) {
      agv.state = ChargingExecute(agv.state);
      agv.charge_from = agv.charge_until = -1;
      agv.station_warned = false;
      ++metrics_.charging_events;
      activity_ = true;
      Json payload;
      payload["agv"] = agv.state.agv_id;
      payload["station"] = ZoneToJson(agv.state.zone);
      payload["odometer"] = RoundForTrace(agv.state.odometer);
      payload["duty_time"] = RoundForTrace(agv.state.duty_time);
      Emit("charging_done", std::move(payload), ticks_per_slot_);
      continue;
    }
    if (const Mission* mission = ActiveMission(agv)) {
      if (ParkedAt(agv, mission->destination)) FinishMission(agv, false);
    }
  }
}

void Twin::DeadlockStep() {
  if (activity_ || ChargingOutstanding()) {
    stalled_slots_ = 0;
  } else {
    ++stalled_slots_;
  }
  const bool pending = MissionsPending();
  if (!DetectDeadlock(stalled_slots_, pending, config_)) return;
  Json ids = Json::array();
  for (const MissionBook& entry : book_) {
    if (!entry.done && entry.mission.release_slot <= slot_) {
      ids.push_back(entry.mission.mission_id);
    }
  }
  Json payload;
  payload["stalled_slots"] = stalled_slots_;
  payload["pending_missions"] = std::move(ids);
  Emit("deadlock", std::move(payload), ticks_per_slot_);
  metrics_.deadlock = true;
  metrics_.outcome = RunOutcome::kDeadlock;
  metrics_.makespan_slots = slot_ + 1;
}

}  // namespace agvtwin
