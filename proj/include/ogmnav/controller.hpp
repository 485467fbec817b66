// Copyright 2026 The ogmnav Authors
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

#pragma once

// Scripted lane follower: pure pursuit on the route's lane points, a speed
// loop, and the steering rectifier as a last safety layer.

#include <span>

#include "ogmnav/bicycle.hpp"
#include "ogmnav/blockage.hpp"
#include "ogmnav/ogm.hpp"
#include "ogmnav/planner.hpp"

namespace ogmnav
{

/// steering in [-1, 1], -1 = full left; throttle and brake in [0, 1], never
/// both positive.
struct Controls
{
  double steering{0.0};
  double throttle{0.0};
  double brake{0.0};
};

struct ControllerParams
{
  double cruise_speed{7.0};
  double turn_speed{4.0};
  double min_lookahead{4.0};
  double lookahead_gain{0.6};
  double throttle_gain{0.5};
  double brake_gain{0.5};
  /// No pedal action within this band around the target speed, m/s.
  double speed_deadband{0.05};
  /// Lane polyline resampling, meters.
  double path_spacing{0.5};
  bool rectify{true};
};

struct FollowResult
{
  Controls controls;
  /// Wheel angle actually requested, radians (positive left).
  double wheel_angle{0.0};
  double target_speed{0.0};
  RectifyResult rectify;
  bool no_target{false};
};

/// Lookahead distance for a speed.
double lookahead_distance(double speed, const ControllerParams & params);

/// Pure-pursuit wheel angle toward a world point.
double pure_pursuit_angle(const Pose2D & pose, const Vec2 & target, double wheelbase);

/// One control tick. lane_points are the route's lane centers from the car's
/// cell on; grid may be null, which skips rectification.
FollowResult follow_step(
  const VehicleState & state, NavCommand command, std::span<const Vec2> lane_points, const OccupancyGrid * grid,
  const ControllerParams & params, const RectifyParams & rect, const BicycleParams & bike);

}  // namespace ogmnav
