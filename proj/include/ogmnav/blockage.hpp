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

// Blockage detection along the planned route from the occupancy grid, and
// small steering corrections that keep the short-term rollout free.

#include <optional>
#include <vector>

#include "ogmnav/bicycle.hpp"
#include "ogmnav/geometry.hpp"
#include "ogmnav/ogm.hpp"
#include "ogmnav/planner.hpp"
#include "ogmnav/world.hpp"

namespace ogmnav
{

struct BlockageParams
{
  /// Route cells inspected, the vehicle's own included.
  int route_pts{5};
  double p_occ{0.65};
  /// Side of the square grid window around each curve point, meters.
  double slice_width{2.0};
  double cell_occupied_pts{6.0};
  /// Threshold growth per meter of distance from the vehicle.
  double distance_scaling{0.02};
  int bezier_samples{50};

  void validate() const;
};

/// Lane center point per route cell, right-hand traffic. Straight cells are
/// projected onto the nearest road parallel to the travel direction and
/// shifted right by half of that road's lane width; turning cells use the
/// crossing of the incoming and outgoing lane lines. Throws
/// std::invalid_argument when a cell is not on any road.
std::vector<Vec2> lane_center_waypoints(
  const std::vector<GridIndex> & cells, const PlanningMap & map, const std::vector<Road> & roads);

struct BlockageEvent
{
  GridIndex cell;
  /// Direction bit blocked, the side the car would enter from.
  Direction from_side{Direction::kWest};
  /// Curve point where the threshold was crossed.
  Vec2 world;
  double count{0.0};
  double threshold{0.0};
  /// Distance from the vehicle to that curve point, meters.
  double range{0.0};
  std::size_t route_offset{0};
};

struct DetectionResult
{
  bool road_blocked{false};
  std::optional<BlockageEvent> event;
  /// Smoothed lane curve that was inspected, world frame.
  std::vector<Vec2> curve;
};

/// Inspects route cells [1, route_pts) of a route starting at the vehicle's
/// cell. On the first cell whose accumulated occupied count exceeds
/// cell_occupied_pts * (1 + distance_scaling * range) a directed wall is
/// added against the travel direction and scanning stops.
DetectionResult detect_blockages(
  PlanningMap & map, const std::vector<GridIndex> & route, const std::vector<Road> & roads,
  const OccupancyGrid & grid, const BlockageParams & params);

struct RectifyParams
{
  double max_correction{0.15};
  double step{0.025};
  double lookahead{10.0};
  double horizon{3.0};
  int n_states{5};
  /// Trajectory spacing after resampling, meters.
  double spacing{0.5};
  /// Rollout speed floor so a slow or stopped car still looks ahead.
  double min_check_speed{4.0};
  /// Radius around each trajectory point that must be free, meters.
  double clearance{1.0};
  double p_occ{0.65};

  void validate() const;
};

struct RectifyResult
{
  double steering{0.0};
  bool blocked{false};
  double correction{0.0};
  bool corrected{false};
};

/// Points of the resampled rollout within the lookahead, world frame.
std::vector<Vec2> rollout_points(
  const VehicleState & state, double steering, const RectifyParams & rect, const BicycleParams & bike);

/// Whether every rollout point is clear in the grid.
bool trajectory_free(const OccupancyGrid & grid, const std::vector<Vec2> & points, const RectifyParams & rect);

/// Tries corrections +-step, +-2 step, ... up to max_correction when the
/// rollout hits an occupied cell, preferring to steer away from the nearest
/// occupied cell. Falls back to the input with blocked set.
RectifyResult rectify_steering(
  double steering, const VehicleState & state, const OccupancyGrid & grid, const RectifyParams & rect,
  const BicycleParams & bike);

}  // namespace ogmnav
