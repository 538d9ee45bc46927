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

#include "agvtwin/trace.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "agvtwin/error.h"

namespace agvtwin {

double RoundForTrace(double value) {
  if (!std::isfinite(value)) return value;
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.15g", value);
  const double rounded = std::strtod(buffer, nullptr);
  return rounded == 0.0 ? 0.0 : rounded;  // no "-0.0"
}

Json ZoneToJson(const ZoneId& zone) { return Json::array({zone.a, zone.b}); }

ZoneId ZoneFromJson(const Json& json) {
  if (!json.is_array() || json.size() != 2 || !json[0].is_number_integer() ||
      !json[1].is_number_integer()) {
    throw Error(ErrorCode::kParseError, "zone must be [a, b], got " + json.dump());
  }
  return ZoneId{json[0].get<int>(), json[1].get<int>()};
}

Json ZonesToJson(const std::vector<ZoneId>& zones) {
  Json out = Json::array();
  for (const ZoneId& zone : zones) out.push_back(ZoneToJson(zone));
  return out;
}

Json ZonesToJson(const std::set<ZoneId>& zones) {
  return ZonesToJson(std::vector<ZoneId>(zones.begin(), zones.end()));
}

Json RouteToJson(const Route& route) {
  Json waits = Json::array();
  for (const auto& [index, slots] : route.waits) {
    waits.push_back(Json::array({index, slots}));
  }
  Json out;
  out["agv"] = route.agv_id;
  out["start_slot"] = route.start_slot;
  out["zones"] = ZonesToJson(route.zones);
  out["waits"] = std::move(waits);
  out["final_arrival_slot"] = route.FinalArrivalSlot();
  return out;
}

Json PoseToJson(const Pose& pose) {
  Json out;
  out["x"] = RoundForTrace(pose.x);
  out["y"] = RoundForTrace(pose.y);
  out["theta"] = RoundForTrace(pose.theta);
  return out;
}

void TraceWriter::Emit(int slot, std::int64_t tick, const std::string& type,
                       Json payload) {
  TraceEvent event{slot, tick, type, std::move(payload)};
  if (out_ != nullptr) *out_ << Format(event) << '\n';
  if (keep_) events_.push_back(std::move(event));
  ++count_;
}

std::string TraceWriter::Format(const TraceEvent& event) {
  Json line;
  line["slot"] = event.slot;
  line["tick"] = event.tick;
  line["type"] = event.type;
  line["payload"] = event.payload.is_null() ? Json::object() : event.payload;
  return line.dump();
}

TraceEvent TraceWriter::Parse(const std::string& line) {
  Json json;
  try {
    json = Json::parse(line);
  } catch (const Json::parse_error& error) {
    throw Error(ErrorCode::kParseError, error.what());
  }
  TraceEvent event;
  event.slot = json.at("slot").get<int>();
  event.tick = json.at("tick").get<std::int64_t>();
  event.type = json.at("type").get<std::string>();
  event.payload = json.at("payload");
  return event;
}

}  // namespace agvtwin
