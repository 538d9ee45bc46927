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

#include "agvtwin/plant.h"

#include <cmath>
#include <numbers>
#include <type_traits>

#include "agvtwin/error.h"

namespace agvtwin {

namespace {

constexpr double kDoneEps = 1e-9;

// Duration of one segment at the given speeds.
double SegmentDuration(const Segment& segment, double speed, double omega,
                       double slot_time) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, RotateSegment>) {
          return std::abs(NormalizeAngle(s.to_heading - s.from_heading)) / omega;
        } else if constexpr (std::is_same_v<T, DwellSegment>) {
          return s.slots * slot_time;
        } else {
          return SegmentLength(segment) / speed;
        }
      },
      segment);
}

bool Translates(const Segment& segment) {
  return std::holds_alternative<LineSegment>(segment) ||
         std::holds_alternative<ArcSegment>(segment);
}

}  // namespace

const char* ToString(AgvStatus status) {
  switch (status) {
    case AgvStatus::kIdle:
      return "idle";
    case AgvStatus::kMoving:
      return "moving";
    case AgvStatus::kWaiting:
      return "waiting";
    case AgvStatus::kCharging:
      return "charging";
    case AgvStatus::kStalled:
      return "stalled";
    case AgvStatus::kNoPath:
      return "nopath";
  }
  return "unknown";
}

double RotationRate(double speed, double zone_side) {
  return 2.0 * std::numbers::pi * speed / zone_side;
}

double TrajectoryDuration(const Trajectory& trajectory, double speed) {
  const double omega = RotationRate(speed, trajectory.zone_side);
  const double slot_time = trajectory.zone_side / speed;
  double total = 0.0;
  for (const Segment& segment : trajectory.segments) {
    total += SegmentDuration(segment, speed, omega, slot_time);
  }
  return total;
}

StepResult Step(const AgvState& state, const Trajectory& trajectory, double dt) {
  StepResult result;
  result.state = Dwell(state, dt);
  AgvState& next = result.state;
  if (state.trajectory_done) return result;

  const double v = state.speed;
  const double omega = RotationRate(v, trajectory.zone_side);
  const double slot_time = trajectory.zone_side / v;
  next.trajectory_ticks = state.trajectory_ticks + 1;
  const double elapsed = static_cast<double>(next.trajectory_ticks) * dt;

  double before = 0.0;   // time at the start of the current segment
  double covered = 0.0;  // translation before the current segment
  bool finished = true;
  for (const Segment& segment : trajectory.segments) {
    const double duration = SegmentDuration(segment, v, omega, slot_time);
    if (elapsed < before + duration - kDoneEps) {
      const double into = elapsed - before;
      if (std::holds_alternative<RotateSegment>(segment)) {
        next.pose = SegmentPoseAt(segment, into * omega);
      } else if (Translates(segment)) {
        next.pose = SegmentPoseAt(segment, into * v);
        covered += into * v;
      } else {
        next.pose = SegmentEnd(segment);
      }
      finished = false;
      break;
    }
    before += duration;
    if (Translates(segment)) covered += SegmentLength(segment);
  }
  if (finished) {
    next.pose = trajectory.EndPose();
    covered = trajectory.total_length;
  }

  const double moved = covered - state.arc_position;
  next.arc_position = covered;
  next.odometer += moved;
  next.total_distance += moved;

  if (finished) {
    next.trajectory_done = true;
    result.done = TrajectoryDone{state.agv_id, trajectory.zone};
    if (trajectory.exit && trajectory.kind != ManeuverKind::kWait) {
      const ZoneId to = Across(trajectory.zone, *trajectory.exit);
      result.crossed = BorderCrossed{state.agv_id, trajectory.zone, to, *trajectory.exit};
      next.zone = to;
      next.entry = Opposite(*trajectory.exit);
    } else if (trajectory.kind == ManeuverKind::kArriveCenter) {
      next.entry.reset();
    }
  }
  return result;
}

AgvState Dwell(const AgvState& state, double dt) {
  AgvState next = state;
  if (state.status != AgvStatus::kCharging) {
    ++next.duty_ticks;
    next.duty_time = static_cast<double>(next.duty_ticks) * dt;
  }
  return next;
}

ZoneId ZoneOfPose(const Pose& pose, double zone_side, int n, int m,
                  std::optional<ZoneId> declared) {
  const double width = n * zone_side;
  const double height = m * zone_side;
  if (!(pose.x >= 0.0 && pose.x <= width && pose.y >= 0.0 && pose.y <= height)) {
    throw Error(ErrorCode::kOutOfFloor, "pose (" + std::to_string(pose.x) + ", " +
                                            std::to_string(pose.y) + ") is off the floor");
  }
  if (declared) {
    const double x0 = (declared->a - 1) * zone_side;
    const double y0 = (m - declared->b) * zone_side;
    if (pose.x >= x0 && pose.x <= x0 + zone_side && pose.y >= y0 &&
        pose.y <= y0 + zone_side) {
      return *declared;
    }
  }
  const int a = std::min(n, static_cast<int>(std::floor(pose.x / zone_side)) + 1);
  const int b = std::max(1, m - static_cast<int>(std::floor(pose.y / zone_side)));
  return ZoneId{a, b};
}

}  // namespace agvtwin
