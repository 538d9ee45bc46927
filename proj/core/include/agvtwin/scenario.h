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

#ifndef AGVTWIN_SCENARIO_H_
#define AGVTWIN_SCENARIO_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "agvtwin/floor_model.h"
#include "agvtwin/router.h"
#include "agvtwin/trace.h"
#include "agvtwin/twin.h"

namespace agvtwin {

struct Scenario {
  OccupancyGrid grid;
  TwinConfig config;
  std::vector<AgvSpec> agvs;
  std::vector<Mission> missions;
  std::vector<MapUpdate> map_updates;
  int max_slots = 1000;
  std::int64_t seed = 0;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Parses and validates a scenario document. A string-valued "map" names a
// map file relative to `base_dir`. Throws kParseError (malformed JSON,
// wrong types, unknown keys) or ValidationError.
Scenario LoadScenario(std::string_view text, const std::string& base_dir = ".");
Scenario LoadScenarioFile(const std::string& path);

// Checks every scenario invariant; throws ValidationError.
void ValidateScenario(const Scenario& scenario);

// Document with every field explicit and the map inlined.
Json SerializeScenario(const Scenario& scenario);

}  // namespace agvtwin

#endif  // AGVTWIN_SCENARIO_H_
