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

#ifndef AGVTWIN_TRACE_H_
#define AGVTWIN_TRACE_H_

#include <cstdint>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "agvtwin/maneuver.h"
#include "agvtwin/router.h"
#include "agvtwin/zone.h"

namespace agvtwin {

using Json = nlohmann::ordered_json;

// Rounds to 15 significant digits so traces do not depend on the last bits
// of floating-point noise.
double RoundForTrace(double value);

Json ZoneToJson(const ZoneId& zone);
ZoneId ZoneFromJson(const Json& json);
Json ZonesToJson(const std::vector<ZoneId>& zones);
Json ZonesToJson(const std::set<ZoneId>& zones);
Json RouteToJson(const Route& route);
Json PoseToJson(const Pose& pose);

struct TraceEvent {
  int slot = 0;
  std::int64_t tick = 0;
  std::string type;
  Json payload;
};

// JSON Lines event log: one {slot, tick, type, payload} object per line.
// Events can also be kept in memory for inspection.
class TraceWriter {
 public:
  explicit TraceWriter(std::ostream* out = nullptr, bool keep = false)
      : out_(out), keep_(keep) {}

  void Emit(int slot, std::int64_t tick, const std::string& type, Json payload);

  const std::vector<TraceEvent>& events() const { return events_; }
  std::size_t count() const { return count_; }

  static std::string Format(const TraceEvent& event);
  static TraceEvent Parse(const std::string& line);

 private:
  std::ostream* out_;
  bool keep_;
  std::vector<TraceEvent> events_;
  std::size_t count_ = 0;
};

}  // namespace agvtwin

#endif  // AGVTWIN_TRACE_H_
