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

#ifndef AGVTWIN_PLANT_H_
#define AGVTWIN_PLANT_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "agvtwin/maneuver.h"
#include "agvtwin/zone.h"

namespace agvtwin {

enum class AgvStatus { kIdle, kMoving, kWaiting, kCharging, kStalled, kNoPath };

const char* ToString(AgvStatus status);

struct AgvState {
  int agv_id = 0;
  Pose pose;
  double speed = 1.0;
  ZoneId zone;
  std::optional<Border> entry;  // empty: at (or heading to) the zone center
  AgvStatus status = AgvStatus::kIdle;
  double odometer = 0.0;        // since the last charge
  std::int64_t duty_ticks = 0;  // ticks since the last charge, not charging
  double duty_time = 0.0;       // duty_ticks * dt
  double arc_position = 0.0;    // translation along the current trajectory
  std::int64_t trajectory_ticks = 0;
  bool trajectory_done = false;
  double total_distance = 0.0;  // never reset

  friend bool operator==(const AgvState&, const AgvState&) = default;
};

struct BorderCrossed {
  int agv_id = 0;
  ZoneId from;
  ZoneId to;
  Border border = Border::kNorth;  // border of `from` that was crossed
};

struct TrajectoryDone {
  int agv_id = 0;
  ZoneId zone;
};

struct StepResult {
  AgvState state;
  std::optional<BorderCrossed> crossed;
  std::optional<TrajectoryDone> done;
};

// Angular speed for rotations in place. A half turn plus the half-zone
// line of DepartCenter then takes exactly one slot s / v.
double RotationRate(double speed, double zone_side);

// Time needed to execute `trajectory` at `speed`. Dwell segments last
// their slot count times s / v.
double TrajectoryDuration(const Trajectory& trajectory, double speed);

// Advances one tick of length dt along `trajectory`, which the caller
// starts by resetting trajectory_ticks, arc_position and trajectory_done.
// Time is counted in whole ticks so the pose at tick k is the closed-form
// pose at k * dt; on completion the pose snaps to the trajectory end and,
// for border exits, zone/entry move to the next zone.
StepResult Step(const AgvState& state, const Trajectory& trajectory, double dt);

// One tick without a trajectory: only duty time advances (unless charging).
AgvState Dwell(const AgvState& state, double dt);

// Zone containing `pose`. Points on a border between two zones go to
// `declared` when it is one of them. Throws kOutOfFloor.
ZoneId ZoneOfPose(const Pose& pose, double zone_side, int n, int m,
                  std::optional<ZoneId> declared = std::nullopt);

}  // namespace agvtwin

#endif  // AGVTWIN_PLANT_H_
