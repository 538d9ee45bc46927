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

#ifndef AGVTWIN_MANEUVER_H_
#define AGVTWIN_MANEUVER_H_

#include <optional>
#include <variant>
#include <vector>

#include "agvtwin/router.h"
#include "agvtwin/zone.h"

namespace agvtwin {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

// theta in (-pi, pi]; 0 faces east, pi/2 faces north.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Point position() const { return {x, y}; }
  friend bool operator==(const Pose&, const Pose&) = default;
};

double NormalizeAngle(double angle);

// Heading of travel when leaving a zone through `border`.
double OutwardHeading(Border border);
// Heading of travel just after entering a zone through `border`.
inline double InwardHeading(Border border) {
  return OutwardHeading(Opposite(border));
}

// World frame of the floor: x grows east, y grows north, and map row 1 is
// the northernmost row, so Z_ab has its lower-left corner at
// ((a - 1) s, (m - b) s).
class FloorFrame {
 public:
  FloorFrame(int n, int m, double zone_side) : n_(n), m_(m), side_(zone_side) {}

  int n() const { return n_; }
  int m() const { return m_; }
  double zone_side() const { return side_; }

  Point ZoneOrigin(const ZoneId& zone) const {
    return {(zone.a - 1) * side_, (m_ - zone.b) * side_};
  }
  Point ZoneCenter(const ZoneId& zone) const;
  Point BorderMidpoint(const ZoneId& zone, Border border) const;

 private:
  int n_;
  int m_;
  double side_;
};

enum class ManeuverKind {
  kStraight,
  kTurnLeft,
  kTurnRight,
  kWait,
  kDepartCenter,
  kArriveCenter,
};

const char* ToString(ManeuverKind kind);

// One border-state transition inside a single zone. An empty entry or exit
// means the zone center.
struct Maneuver {
  ManeuverKind kind = ManeuverKind::kStraight;
  std::optional<Border> entry;
  std::optional<Border> exit;
  ZoneId zone;
  int dwell_slots = 0;          // kWait only
  double start_heading = 0.0;   // kDepartCenter / center kWait only

  friend bool operator==(const Maneuver&, const Maneuver&) = default;
};

// Border of `next` shared with `current`. Throws kNotAdjacent.
Border EntryBorderOfNext(const ZoneId& current, const ZoneId& next);

struct StopAtCenter {};
struct HoldInZone {};
using NextStep = std::variant<ZoneId, StopAtCenter, HoldInZone>;

// Classifies the transition from `entry` towards `next`. Straight when the
// exit is opposite the entry; left/right by the sign of the turn relative
// to the travel heading. Throws kUTurnRequested or kNotAdjacent.
Maneuver SelectManeuver(Border entry, const ZoneId& current, const NextStep& next);

struct LineSegment {
  Pose start;
  Pose end;
  double length = 0.0;
};

// Quarter circle; positions are center + radius * (cos, sin)(angle).
struct ArcSegment {
  Point center;
  double radius = 0.0;
  double start_angle = 0.0;
  double sweep = 0.0;  // +pi/2 counterclockwise (left), -pi/2 clockwise
};

struct RotateSegment {
  Point at;
  double from_heading = 0.0;
  double to_heading = 0.0;
};

struct DwellSegment {
  Pose at;
  int slots = 0;
};

using Segment = std::variant<LineSegment, ArcSegment, RotateSegment, DwellSegment>;

double SegmentLength(const Segment& segment);
Pose SegmentStart(const Segment& segment);
Pose SegmentEnd(const Segment& segment);
// Pose after `progress` along the segment: meters for lines and arcs,
// radians turned for rotations. Dwells ignore it.
Pose SegmentPoseAt(const Segment& segment, double progress);

struct Trajectory {
  ManeuverKind kind = ManeuverKind::kStraight;
  ZoneId zone;
  std::optional<Border> exit;  // set when the trajectory ends on a border
  double zone_side = 1.0;
  std::vector<Segment> segments;
  double total_length = 0.0;

  Pose StartPose() const { return SegmentStart(segments.front()); }
  Pose EndPose() const { return SegmentEnd(segments.back()); }
};

// Continuous realization of a maneuver for a zone of side `zone_side` whose
// lower-left corner is `zone_origin`:
//   Straight      line between opposite border midpoints, length s
//   Turn          arc of radius s/2 about the corner shared by entry and
//                 exit borders, length pi s / 4
//   DepartCenter  rotate at the center to face the exit, then s/2 line
//   ArriveCenter  s/2 line from the entry midpoint to the center
//   Wait          zero-length dwell at the entry midpoint (or the center)
Trajectory GenerateTrajectory(const Maneuver& maneuver, double zone_side,
                              Point zone_origin);

// How the AGV stands in route.zones[0] when the route is compiled.
struct RouteStart {
  std::optional<Border> entry;  // empty: at the zone center
  double heading = 0.0;         // current heading, used at the center
};

// Maneuver sequence for a route: waits become Wait maneuvers placed before
// the maneuver of their zone, the first zone departs from the center or
// continues from its entry border, the last zone arrives at the center.
// Throws UTurnError carrying the offending route index.
std::vector<Maneuver> CompileManeuvers(const Route& route, const RouteStart& start);

std::vector<Trajectory> CompileRoute(const Route& route, const RouteStart& start,
                                     const FloorFrame& frame);

}  // namespace agvtwin

#endif  // AGVTWIN_MANEUVER_H_
