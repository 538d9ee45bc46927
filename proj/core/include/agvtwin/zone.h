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

#ifndef AGVTWIN_ZONE_H_
#define AGVTWIN_ZONE_H_

#include <array>
#include <compare>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>

namespace agvtwin {

// A square zone of the floor decomposition. `a` is the 1-based column
// (west to east), `b` the 1-based row (north to south; map line 1 is b = 1).
struct ZoneId {
  int a = 1;
  int b = 1;

  friend constexpr auto operator<=>(const ZoneId&, const ZoneId&) = default;
};

std::string ToString(const ZoneId& zone);
std::ostream& operator<<(std::ostream& os, const ZoneId& zone);

inline int ManhattanDistance(const ZoneId& lhs, const ZoneId& rhs) {
  return std::abs(lhs.a - rhs.a) + std::abs(lhs.b - rhs.b);
}

inline bool AreFourNeighbors(const ZoneId& lhs, const ZoneId& rhs) {
  return ManhattanDistance(lhs, rhs) == 1;
}

// One of the four border lines of a zone. North is row b - 1.
enum class Border { kNorth, kEast, kSouth, kWest };

inline constexpr std::array<Border, 4> kAllBorders = {
    Border::kNorth, Border::kEast, Border::kSouth, Border::kWest};

constexpr Border Opposite(Border border) {
  switch (border) {
    case Border::kNorth:
      return Border::kSouth;
    case Border::kEast:
      return Border::kWest;
    case Border::kSouth:
      return Border::kNorth;
    case Border::kWest:
      return Border::kEast;
  }
  return border;
}

// The zone across `border` from `zone` (may be outside the floor).
constexpr ZoneId Across(const ZoneId& zone, Border border) {
  switch (border) {
    case Border::kNorth:
      return {zone.a, zone.b - 1};
    case Border::kEast:
      return {zone.a + 1, zone.b};
    case Border::kSouth:
      return {zone.a, zone.b + 1};
    case Border::kWest:
      return {zone.a - 1, zone.b};
  }
  return zone;
}

// Side of `current` that faces the 4-neighbour `next`; nullopt otherwise.
std::optional<Border> SideFacing(const ZoneId& current, const ZoneId& next);

const char* ToString(Border border);
std::optional<Border> BorderFromString(const std::string& text);
std::ostream& operator<<(std::ostream& os, Border border);

}  // namespace agvtwin

#endif  // AGVTWIN_ZONE_H_
