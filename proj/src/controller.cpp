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

#include "ogmnav/controller.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace ogmnav
{

double lookahead_distance(double speed, const ControllerParams & params)
{
  return std::max(params.min_lookahead, params.lookahead_gain * std::max(0.0, speed));
}

double pure_pursuit_angle(const Pose2D & pose, const Vec2 & target, double wheelbase)
{
  const Vec2 d = target - pose.position();
  const double ld = d.norm();
  if (ld < 1e-9) {
    return 0.0;
  }
  const double alpha = normalize_angle(std::atan2(d.y, d.x) - pose.yaw);
  return std::atan2(2.0 * wheelbase * std::sin(alpha), ld);
}

namespace
{

// Point on the polyline at the lookahead distance from the vehicle, searched
// forward from the closest vertex.
std::optional<Vec2> pick_target(std::span<const Vec2> path, const Vec2 & position, double lookahead)
{
  if (path.empty()) {
    return std::nullopt;
  }
  std::size_t closest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < path.size(); ++i) {
    const double d = distance(path[i], position);
    if (d < best) {
      best = d;
      closest = i;
    }
  }
  for (std::size_t i = closest; i < path.size(); ++i) {
    if (distance(path[i], position) >= lookahead) {
      return path[i];
    }
  }
  // Close to the end of the route: aim at the last point if it is ahead.
  return std::nullopt;
}

}  // namespace

FollowResult follow_step(
  const VehicleState & state, NavCommand command, std::span<const Vec2> lane_points, const OccupancyGrid * grid,
  const ControllerParams & params, const RectifyParams & rect, const BicycleParams & bike)
{
  FollowResult out;
  const std::vector<Vec2> path = resample_polyline(lane_points, params.path_spacing);
  const double ld = lookahead_distance(state.speed, params);
  const auto target = pick_target(path, state.pose.position(), ld);
  if (!target) {
    out.no_target = true;
    out.controls.brake = 1.0;
    return out;
  }

  double wheel = std::clamp(pure_pursuit_angle(state.pose, *target, bike.wheelbase), -bike.max_steer, bike.max_steer);
  if (params.rectify && grid != nullptr) {
    out.rectify = rectify_steering(wheel, state, *grid, rect, bike);
    wheel = out.rectify.steering;
  }
  out.wheel_angle = wheel;
  out.controls.steering = std::clamp(-wheel / bike.max_steer, -1.0, 1.0);

  const bool turning = command == NavCommand::kGoLeft || command == NavCommand::kGoRight;
  out.target_speed = turning ? params.turn_speed : params.cruise_speed;
  if (out.rectify.blocked) {
    out.controls.throttle = 0.0;
    out.controls.brake = 1.0;
    return out;
  }
  const double error = out.target_speed - state.speed;
  if (error > params.speed_deadband) {
    out.controls.throttle = std::clamp(params.throttle_gain * error, 0.0, 1.0);
  } else if (error < -params.speed_deadband) {
    out.controls.brake = std::clamp(params.brake_gain * -error, 0.0, 1.0);
  }
  return out;
}

}  // namespace ogmnav
