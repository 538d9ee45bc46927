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

#include "agvtwin/maneuver.h"

#include <cmath>
#include <numbers>
#include <type_traits>

#include "agvtwin/error.h"

namespace agvtwin {

namespace {

constexpr double kPi = std::numbers::pi;

// Offsets in units of s from the lower-left corner.
Point BorderMidpointOffset(Border border) {
  switch (border) {
    case Border::kNorth:
      return {0.5, 1.0};
    case Border::kEast:
      return {1.0, 0.5};
    case Border::kSouth:
      return {0.5, 0.0};
    case Border::kWest:
      return {0.0, 0.5};
  }
  return {0.5, 0.5};
}

Point SharedCornerOffset(Border x, Border y) {
  const bool north = x == Border::kNorth || y == Border::kNorth;
  const bool east = x == Border::kEast || y == Border::kEast;
  return {east ? 1.0 : 0.0, north ? 1.0 : 0.0};
}

// cos/sin that are exact at multiples of pi/2, so arc end points land
// exactly on border midpoints.
Point UnitVector(double angle) {
  const double quarters = angle / (kPi / 2.0);
  const double nearest = std::round(quarters);
  if (std::abs(quarters - nearest) < 1e-12) {
    switch (((static_cast<long long>(nearest) % 4) + 4) % 4) {
      case 0:
        return {1.0, 0.0};
      case 1:
        return {0.0, 1.0};
      case 2:
        return {-1.0, 0.0};
      default:
        return {0.0, -1.0};
    }
  }
  return {std::cos(angle), std::sin(angle)};
}

Point Scaled(Point origin, Point offset, double side) {
  return {origin.x + offset.x * side, origin.y + offset.y * side};
}

}  // namespace

double NormalizeAngle(double angle) {
  angle = std::remainder(angle, 2.0 * kPi);
  if (angle <= -kPi) angle += 2.0 * kPi;
  return angle;
}

double OutwardHeading(Border border) {
  switch (border) {
    case Border::kNorth:
      return kPi / 2.0;
    case Border::kEast:
      return 0.0;
    case Border::kSouth:
      return -kPi / 2.0;
    case Border::kWest:
      return kPi;
  }
  return 0.0;
}

Point FloorFrame::ZoneCenter(const ZoneId& zone) const {
  return Scaled(ZoneOrigin(zone), {0.5, 0.5}, side_);
}

Point FloorFrame::BorderMidpoint(const ZoneId& zone, Border border) const {
  return Scaled(ZoneOrigin(zone), BorderMidpointOffset(border), side_);
}

const char* ToString(ManeuverKind kind) {
  switch (kind) {
    case ManeuverKind::kStraight:
      return "straight";
    case ManeuverKind::kTurnLeft:
      return "turn_left";
    case ManeuverKind::kTurnRight:
      return "turn_right";
    case ManeuverKind::kWait:
      return "wait";
    case ManeuverKind::kDepartCenter:
      return "depart_center";
    case ManeuverKind::kArriveCenter:
      return "arrive_center";
  }
  return "unknown";
}

Border EntryBorderOfNext(const ZoneId& current, const ZoneId& next) {
  const std::optional<Border> side = SideFacing(current, next);
  if (!side) {
    throw Error(ErrorCode::kNotAdjacent,
                ToString(current) + " and " + ToString(next) + " are not 4-neighbours");
  }
  return Opposite(*side);
}

Maneuver SelectManeuver(Border entry, const ZoneId& current, const NextStep& next) {
  Maneuver maneuver;
  maneuver.zone = current;
  maneuver.entry = entry;
  if (std::holds_alternative<StopAtCenter>(next)) {
    maneuver.kind = ManeuverKind::kArriveCenter;
    return maneuver;
  }
  if (std::holds_alternative<HoldInZone>(next)) {
    maneuver.kind = ManeuverKind::kWait;
    maneuver.exit = entry;
    maneuver.dwell_slots = 1;
    return maneuver;
  }
  const ZoneId& target = std::get<ZoneId>(next);
  const std::optional<Border> exit = SideFacing(current, target);
  if (!exit) {
    throw Error(ErrorCode::kNotAdjacent,
                ToString(current) + " and " + ToString(target) + " are not 4-neighbours");
  }
  if (*exit == entry) {
    throw Error(ErrorCode::kUTurnRequested,
                "exit through entry border " + std::string(ToString(entry)) +
                    " of " + ToString(current));
  }
  maneuver.exit = exit;
  if (*exit == Opposite(entry)) {
    maneuver.kind = ManeuverKind::kStraight;
    return maneuver;
  }
  // Sign of heading x exit-direction: positive turns counterclockwise.
  const double heading = InwardHeading(entry);
  const double out = OutwardHeading(*exit);
  const double cross = std::cos(heading) * std::sin(out) - std::sin(heading) * std::cos(out);
  maneuver.kind = cross > 0.0 ? ManeuverKind::kTurnLeft : ManeuverKind::kTurnRight;
  return maneuver;
}

double SegmentLength(const Segment& segment) {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LineSegment>) {
          return s.length;
        } else if constexpr (std::is_same_v<T, ArcSegment>) {
          return std::abs(s.sweep) * s.radius;
        } else {
          return 0.0;
        }
      },
      segment);
}

Pose SegmentPoseAt(const Segment& segment, double progress) {
  return std::visit(
      [progress](const auto& s) -> Pose {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LineSegment>) {
          const double f = s.length > 0.0 ? progress / s.length : 0.0;
          return {s.start.x + f * (s.end.x - s.start.x),
                  s.start.y + f * (s.end.y - s.start.y), s.start.theta};
        } else if constexpr (std::is_same_v<T, ArcSegment>) {
          const double direction = s.sweep > 0.0 ? 1.0 : -1.0;
          const double angle = s.start_angle + direction * progress / s.radius;
          const Point unit = UnitVector(angle);
          return {s.center.x + s.radius * unit.x, s.center.y + s.radius * unit.y,
                  NormalizeAngle(angle + direction * kPi / 2.0)};
        } else if constexpr (std::is_same_v<T, RotateSegment>) {
          const double delta = NormalizeAngle(s.to_heading - s.from_heading);
          const double swept = std::min(progress, std::abs(delta));
          return {s.at.x, s.at.y,
                  NormalizeAngle(s.from_heading + (delta < 0.0 ? -swept : swept))};
        } else {
          return s.at;
        }
      },
      segment);
}

Pose SegmentStart(const Segment& segment) { return SegmentPoseAt(segment, 0.0); }

Pose SegmentEnd(const Segment& segment) {
  return std::visit(
      [&segment](const auto& s) -> Pose {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LineSegment>) {
          return s.end;
        } else if constexpr (std::is_same_v<T, ArcSegment>) {
          return SegmentPoseAt(segment, SegmentLength(segment));
        } else if constexpr (std::is_same_v<T, RotateSegment>) {
          return {s.at.x, s.at.y, NormalizeAngle(s.to_heading)};
        } else {
          return s.at;
        }
      },
      segment);
}

Trajectory GenerateTrajectory(const Maneuver& maneuver, double zone_side,
                              Point zone_origin) {
  const double s = zone_side;
  const Point center = Scaled(zone_origin, {0.5, 0.5}, s);
  auto midpoint = [&](Border border) {
    return Scaled(zone_origin, BorderMidpointOffset(border), s);
  };

  Trajectory trajectory;
  trajectory.kind = maneuver.kind;
  trajectory.zone = maneuver.zone;
  trajectory.zone_side = s;

  switch (maneuver.kind) {
    case ManeuverKind::kStraight: {
      const Point from = midpoint(*maneuver.entry);
      const Point to = midpoint(*maneuver.exit);
      const double heading = InwardHeading(*maneuver.entry);
      trajectory.segments.push_back(
          LineSegment{{from.x, from.y, heading}, {to.x, to.y, heading}, s});
      trajectory.exit = maneuver.exit;
      break;
    }
    case ManeuverKind::kTurnLeft:
    case ManeuverKind::kTurnRight: {
      const Point corner =
          Scaled(zone_origin, SharedCornerOffset(*maneuver.entry, *maneuver.exit), s);
      const Point from = midpoint(*maneuver.entry);
      ArcSegment arc;
      arc.center = corner;
      arc.radius = s / 2.0;
      arc.start_angle = std::atan2(from.y - corner.y, from.x - corner.x);
      arc.sweep = maneuver.kind == ManeuverKind::kTurnLeft ? kPi / 2.0 : -kPi / 2.0;
      trajectory.segments.push_back(arc);
      trajectory.exit = maneuver.exit;
      break;
    }
    case ManeuverKind::kDepartCenter: {
      const Point to = midpoint(*maneuver.exit);
      const double heading = OutwardHeading(*maneuver.exit);
      trajectory.segments.push_back(
          RotateSegment{center, NormalizeAngle(maneuver.start_heading), heading});
      trajectory.segments.push_back(LineSegment{
          {center.x, center.y, heading}, {to.x, to.y, heading}, s / 2.0});
      trajectory.exit = maneuver.exit;
      break;
    }
    case ManeuverKind::kArriveCenter: {
      const Point from = midpoint(*maneuver.entry);
      const double heading = InwardHeading(*maneuver.entry);
      trajectory.segments.push_back(LineSegment{
          {from.x, from.y, heading}, {center.x, center.y, heading}, s / 2.0});
      break;
    }
    case ManeuverKind::kWait: {
      Pose at{center.x, center.y, NormalizeAngle(maneuver.start_heading)};
      if (maneuver.entry) {
        const Point from = midpoint(*maneuver.entry);
        at = {from.x, from.y, InwardHeading(*maneuver.entry)};
      }
      trajectory.segments.push_back(DwellSegment{at, maneuver.dwell_slots});
      break;
    }
  }
  for (const Segment& segment : trajectory.segments) {
    trajectory.total_length += SegmentLength(segment);
  }
  return trajectory;
}

std::vector<Maneuver> CompileManeuvers(const Route& route, const RouteStart& start) {
  std::vector<Maneuver> maneuvers;
  if (route.zones.empty()) return maneuvers;
  if (route.zones.size() == 1) {
    if (start.entry) {
      maneuvers.push_back(SelectManeuver(*start.entry, route.zones[0], StopAtCenter{}));
    }
    return maneuvers;
  }

  std::optional<Border> entry = start.entry;
  for (std::size_t i = 0; i < route.zones.size(); ++i) {
    const ZoneId& zone = route.zones[i];
    const bool last = i + 1 == route.zones.size();
    if (!last && route.WaitAt(i) > 0) {
      Maneuver wait;
      wait.kind = ManeuverKind::kWait;
      wait.zone = zone;
      wait.entry = entry;
      wait.exit = entry;
      wait.dwell_slots = route.WaitAt(i);
      wait.start_heading = start.heading;
      maneuvers.push_back(wait);
    }
    if (last) {
      maneuvers.push_back(SelectManeuver(*entry, zone, StopAtCenter{}));
      break;
    }
    const ZoneId& next = route.zones[i + 1];
    if (!entry) {
      Maneuver depart;
      depart.kind = ManeuverKind::kDepartCenter;
      depart.zone = zone;
      depart.exit = SideFacing(zone, next);
      if (!depart.exit) {
        throw Error(ErrorCode::kNotAdjacent,
                    ToString(zone) + " and " + ToString(next) + " are not 4-neighbours");
      }
      depart.start_heading = start.heading;
      maneuvers.push_back(depart);
    } else {
      try {
        maneuvers.push_back(SelectManeuver(*entry, zone, next));
      } catch (const Error& error) {
        if (error.code() != ErrorCode::kUTurnRequested) throw;
        throw UTurnError(i, error.what());
      }
    }
    entry = EntryBorderOfNext(zone, next);
  }
  return maneuvers;
}

std::vector<Trajectory> CompileRoute(const Route& route, const RouteStart& start,
                                     const FloorFrame& frame) {
  std::vector<Trajectory> trajectories;
  for (const Maneuver& maneuver : CompileManeuvers(route, start)) {
    trajectories.push_back(GenerateTrajectory(maneuver, frame.zone_side(),
                                              frame.ZoneOrigin(maneuver.zone)));
  }
  return trajectories;
}

}  // namespace agvtwin
