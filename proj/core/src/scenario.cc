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

#include "agvtwin/scenario.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "agvtwin/error.h"

namespace agvtwin {

namespace {

[[noreturn]] void ParseFail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kParseError, where + ": " + what);
}

void RejectUnknownKeys(const Json& object, const std::string& where,
                       const std::set<std::string>& known) {
  if (!object.is_object()) ParseFail(where, "expected an object");
  for (const auto& [key, value] : object.items()) {
    if (!known.contains(key)) ParseFail(where, "unknown key \"" + key + "\"");
  }
}

int GetInt(const Json& object, const std::string& key, const std::string& where) {
  const Json& value = object.at(key);
  if (!value.is_number_integer()) ParseFail(where + "." + key, "expected an integer");
  return value.get<int>();
}

double GetNumber(const Json& object, const std::string& key, const std::string& where) {
  const Json& value = object.at(key);
  if (!value.is_number()) ParseFail(where + "." + key, "expected a number");
  return value.get<double>();
}

ZoneId GetZone(const Json& value, const std::string& where) {
  try {
    return ZoneFromJson(value);
  } catch (const Error&) {
    ParseFail(where, "expected a zone [a, b]");
  }
}

std::vector<ZoneId> GetZones(const Json& object, const std::string& key,
                             const std::string& where) {
  std::vector<ZoneId> zones;
  if (!object.contains(key)) return zones;
  const Json& list = object.at(key);
  if (!list.is_array()) ParseFail(where + "." + key, "expected a list of zones");
  for (std::size_t i = 0; i < list.size(); ++i) {
    zones.push_back(GetZone(list[i], where + "." + key + "[" + std::to_string(i) + "]"));
  }
  return zones;
}

const Json& GetArray(const Json& doc, const std::string& key) {
  static const Json kEmpty = Json::array();
  if (!doc.contains(key)) return kEmpty;
  if (!doc.at(key).is_array()) ParseFail(key, "expected a list");
  return doc.at(key);
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void CheckZone(const Scenario& s, const ZoneId& zone, const std::string& field,
               bool must_be_free) {
  if (!s.grid.Contains(zone)) {
    throw ValidationError(field, ToString(zone) + " is outside the " +
                                     std::to_string(s.grid.n) + "x" +
                                     std::to_string(s.grid.m) + " floor");
  }
  if (must_be_free && s.grid.IsOccupied(zone)) {
    throw ValidationError(field, ToString(zone) + " is occupied");
  }
}

}  // namespace

void ValidateScenario(const Scenario& s) {
  const TwinConfig& c = s.config;
  auto positive = [](int value, const char* field) {
    if (value < 1) throw ValidationError(field, "must be a positive integer");
  };
  positive(c.replan_interval_slots, "replan_interval_slots");
  positive(c.sync_interval_slots, "sync_interval_slots");
  positive(c.max_resolution_rounds, "max_resolution_rounds");
  positive(c.stall_slots_for_deadlock, "stall_slots_for_deadlock");
  positive(c.charge_duration_slots, "charge_duration_slots");
  positive(s.max_slots, "max_slots");
  if (c.pose_log_every_n_ticks < 0) {
    throw ValidationError("pose_log_every_n_ticks", "must not be negative");
  }
  if (!(c.zone_side > 0.0)) throw ValidationError("zone_side", "must be positive");
  if (!(c.nominal_speed > 0.0)) throw ValidationError("nominal_speed", "must be positive");
  if (!(c.tick_dt > 0.0)) throw ValidationError("tick_dt", "must be positive");
  if (!(c.wait_weight > 0.0)) throw ValidationError("wait_weight", "must be positive");
  if (!(c.charge_distance_threshold >= 0.0)) {
    throw ValidationError("charge_distance_threshold", "must not be negative");
  }
  if (!(c.charge_time_threshold >= 0.0)) {
    throw ValidationError("charge_time_threshold", "must not be negative");
  }
  c.TicksPerSlot();

  std::set<int> agv_ids;
  std::set<ZoneId> starts;
  std::map<int, ZoneId> start_of;
  for (const AgvSpec& agv : s.agvs) {
    if (!agv_ids.insert(agv.agv_id).second) {
      throw ValidationError("agvs", "agv ids must be distinct (" +
                                        std::to_string(agv.agv_id) + " repeats)");
    }
    CheckZone(s, agv.start_zone, "agvs.start_zone", true);
    if (!starts.insert(agv.start_zone).second) {
      throw ValidationError("agvs", "start zones must be distinct");
    }
    start_of[agv.agv_id] = agv.start_zone;
  }

  std::set<int> mission_ids;
  std::map<int, std::vector<const Mission*>> chains;
  for (const Mission& mission : s.missions) {
    if (!mission_ids.insert(mission.mission_id).second) {
      throw ValidationError("missions", "mission ids must be distinct (" +
                                            std::to_string(mission.mission_id) +
                                            " repeats)");
    }
    if (!agv_ids.contains(mission.agv_id)) {
      throw ValidationError("missions.agv", "mission " + std::to_string(mission.mission_id) +
                                                " references unknown AGV " +
                                                std::to_string(mission.agv_id));
    }
    if (mission.release_slot < 0) {
      throw ValidationError("missions.release_slot", "must not be negative");
    }
    CheckZone(s, mission.origin, "missions.origin", true);
    CheckZone(s, mission.destination, "missions.destination", true);
    if (mission.kind == MissionKind::kCharging &&
        !s.grid.stations.contains(mission.destination)) {
      throw ValidationError("missions.destination",
                            "charging mission " + std::to_string(mission.mission_id) +
                                " must end at a charging station");
    }
    chains[mission.agv_id].push_back(&mission);
  }
  for (auto& [agv_id, chain] : chains) {
    std::stable_sort(chain.begin(), chain.end(), [](const Mission* x, const Mission* y) {
      return std::pair(x->release_slot, x->mission_id) <
             std::pair(y->release_slot, y->mission_id);
    });
    ZoneId at = start_of.at(agv_id);
    for (const Mission* mission : chain) {
      if (mission->origin != at) {
        throw ValidationError("missions.origin",
                              "mission " + std::to_string(mission->mission_id) +
                                  " starts at " + ToString(mission->origin) + " but AGV " +
                                  std::to_string(agv_id) + " will be at " + ToString(at));
      }
      at = mission->destination;
    }
  }

  for (const MapUpdate& update : s.map_updates) {
    if (update.slot < 0) throw ValidationError("map_updates.slot", "must not be negative");
    for (const ZoneId& zone : update.set_occupied) {
      CheckZone(s, zone, "map_updates.set_occupied", false);
    }
    for (const ZoneId& zone : update.set_free) {
      CheckZone(s, zone, "map_updates.set_free", false);
      if (std::find(update.set_occupied.begin(), update.set_occupied.end(), zone) !=
          update.set_occupied.end()) {
        throw ValidationError("map_updates", ToString(zone) +
                                                 " is both set occupied and set free");
      }
    }
  }
}

Scenario LoadScenario(std::string_view text, const std::string& base_dir) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& error) {
    throw Error(ErrorCode::kParseError, error.what());
  }
  RejectUnknownKeys(doc, "scenario",
                    {"map", "zone_side", "nominal_speed", "tick_dt", "replan_interval_slots",
                     "sync_interval_slots", "max_resolution_rounds",
                     "stall_slots_for_deadlock", "charge_distance_threshold",
                     "charge_time_threshold", "charge_duration_slots", "wait_weight",
                     "pose_log_every_n_ticks", "agvs", "missions", "map_updates",
                     "max_slots", "seed"});

  Scenario s;
  if (!doc.contains("map")) ParseFail("map", "missing");
  const Json& map = doc.at("map");
  std::string map_text;
  if (map.is_string()) {
    std::filesystem::path path = map.get<std::string>();
    if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
    map_text = ReadFile(path.string());
  } else if (map.is_array()) {
    for (std::size_t i = 0; i < map.size(); ++i) {
      if (!map[i].is_string()) ParseFail("map[" + std::to_string(i) + "]", "expected a row string");
      if (i > 0) map_text += '\n';
      map_text += map[i].get<std::string>();
    }
  } else {
    ParseFail("map", "expected a list of row strings or a file path");
  }
  s.grid = ParseOccupancyGrid(map_text);

  TwinConfig& c = s.config;
  const std::string top = "scenario";
  auto number = [&](const char* key, double& out) {
    if (doc.contains(key)) out = GetNumber(doc, key, top);
  };
  auto integer = [&](const char* key, int& out) {
    if (doc.contains(key)) out = GetInt(doc, key, top);
  };
  number("zone_side", c.zone_side);
  number("nominal_speed", c.nominal_speed);
  number("tick_dt", c.tick_dt);
  integer("replan_interval_slots", c.replan_interval_slots);
  integer("sync_interval_slots", c.sync_interval_slots);
  integer("max_resolution_rounds", c.max_resolution_rounds);
  integer("stall_slots_for_deadlock", c.stall_slots_for_deadlock);
  number("charge_distance_threshold", c.charge_distance_threshold);
  number("charge_time_threshold", c.charge_time_threshold);
  integer("charge_duration_slots", c.charge_duration_slots);
  number("wait_weight", c.wait_weight);
  integer("pose_log_every_n_ticks", c.pose_log_every_n_ticks);
  integer("max_slots", s.max_slots);
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_integer()) ParseFail("scenario.seed", "expected an integer");
    s.seed = doc.at("seed").get<std::int64_t>();
  }

  const Json& agvs = GetArray(doc, "agvs");
  for (std::size_t i = 0; i < agvs.size(); ++i) {
    const std::string where = "agvs[" + std::to_string(i) + "]";
    RejectUnknownKeys(agvs[i], where, {"id", "start_zone", "start", "heading"});
    if (!agvs[i].contains("id") || !agvs[i].contains("start_zone")) {
      ParseFail(where, "needs id and start_zone");
    }
    AgvSpec agv;
    agv.agv_id = GetInt(agvs[i], "id", where);
    agv.start_zone = GetZone(agvs[i].at("start_zone"), where + ".start_zone");
    if (agvs[i].contains("start") && agvs[i].at("start") != "center") {
      throw ValidationError("agvs.start", "only \"center\" starts are supported");
    }
    if (agvs[i].contains("heading")) agv.heading = GetNumber(agvs[i], "heading", where);
    s.agvs.push_back(agv);
  }

  const Json& missions = GetArray(doc, "missions");
  for (std::size_t i = 0; i < missions.size(); ++i) {
    const std::string where = "missions[" + std::to_string(i) + "]";
    RejectUnknownKeys(missions[i], where,
                      {"id", "agv", "origin", "destination", "release_slot", "kind"});
    for (const char* key : {"id", "agv", "origin", "destination"}) {
      if (!missions[i].contains(key)) ParseFail(where, std::string("missing ") + key);
    }
    Mission mission;
    mission.mission_id = GetInt(missions[i], "id", where);
    mission.agv_id = GetInt(missions[i], "agv", where);
    mission.origin = GetZone(missions[i].at("origin"), where + ".origin");
    mission.destination = GetZone(missions[i].at("destination"), where + ".destination");
    if (missions[i].contains("release_slot")) {
      mission.release_slot = GetInt(missions[i], "release_slot", where);
    }
    if (missions[i].contains("kind")) {
      const Json& kind = missions[i].at("kind");
      if (kind == "transport") {
        mission.kind = MissionKind::kTransport;
      } else if (kind == "charging") {
        mission.kind = MissionKind::kCharging;
      } else {
        ParseFail(where + ".kind", "expected \"transport\" or \"charging\"");
      }
    }
    s.missions.push_back(mission);
  }

  const Json& updates = GetArray(doc, "map_updates");
  for (std::size_t i = 0; i < updates.size(); ++i) {
    const std::string where = "map_updates[" + std::to_string(i) + "]";
    RejectUnknownKeys(updates[i], where, {"slot", "set_occupied", "set_free"});
    if (!updates[i].contains("slot")) ParseFail(where, "missing slot");
    MapUpdate update;
    update.slot = GetInt(updates[i], "slot", where);
    update.set_occupied = GetZones(updates[i], "set_occupied", where);
    update.set_free = GetZones(updates[i], "set_free", where);
    s.map_updates.push_back(std::move(update));
  }

  ValidateScenario(s);
  return s;
}

Scenario LoadScenarioFile(const std::string& path) {
  const std::string text = ReadFile(path);
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  return LoadScenario(text, base.empty() ? "." : base.string());
}

Json SerializeScenario(const Scenario& s) {
  const TwinConfig& c = s.config;
  Json doc;
  doc["map"] = FormatOccupancyRows(s.grid);
  doc["zone_side"] = c.zone_side;
  doc["nominal_speed"] = c.nominal_speed;
  doc["tick_dt"] = c.tick_dt;
  doc["replan_interval_slots"] = c.replan_interval_slots;
  doc["sync_interval_slots"] = c.sync_interval_slots;
  doc["max_resolution_rounds"] = c.max_resolution_rounds;
  doc["stall_slots_for_deadlock"] = c.stall_slots_for_deadlock;
  doc["charge_distance_threshold"] = c.charge_distance_threshold;
  doc["charge_time_threshold"] = c.charge_time_threshold;
  doc["charge_duration_slots"] = c.charge_duration_slots;
  doc["wait_weight"] = c.wait_weight;
  doc["pose_log_every_n_ticks"] = c.pose_log_every_n_ticks;
  Json agvs = Json::array();
  for (const AgvSpec& agv : s.agvs) {
    Json item;
    item["id"] = agv.agv_id;
    item["start_zone"] = ZoneToJson(agv.start_zone);
    item["start"] = "center";
    item["heading"] = agv.heading;
    agvs.push_back(std::move(item));
  }
  doc["agvs"] = std::move(agvs);
  Json missions = Json::array();
  for (const Mission& mission : s.missions) {
    Json item;
    item["id"] = mission.mission_id;
    item["agv"] = mission.agv_id;
    item["origin"] = ZoneToJson(mission.origin);
    item["destination"] = ZoneToJson(mission.destination);
    item["release_slot"] = mission.release_slot;
    item["kind"] = mission.kind == MissionKind::kCharging ? "charging" : "transport";
    missions.push_back(std::move(item));
  }
  doc["missions"] = std::move(missions);
  Json updates = Json::array();
  for (const MapUpdate& update : s.map_updates) {
    Json item;
    item["slot"] = update.slot;
    item["set_occupied"] = ZonesToJson(update.set_occupied);
    item["set_free"] = ZonesToJson(update.set_free);
    updates.push_back(std::move(item));
  }
  doc["map_updates"] = std::move(updates);
  doc["max_slots"] = s.max_slots;
  doc["seed"] = s.seed;
  return doc;
}

}  // namespace agvtwin
