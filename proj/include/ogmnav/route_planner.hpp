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

#include <optional>
#include <set>
#include <vector>

#include "ogmnav/blockage.hpp"
#include "ogmnav/ogm.hpp"
#include "ogmnav/planner.hpp"
#include "ogmnav/world.hpp"

namespace ogmnav
{

enum class WallMode : std::uint8_t {
  /// Blockage walls stay and only block the detected approach.
  kDirected,
  /// Blockage walls are dropped once the car is more than route_pts cells
  /// away, which can trap the car in a loop.
  kRemoveWhenLeft,
};

struct RoutePlannerConfig
{
  PlannerParams planner;
  BlockageParams blockage;
  bool blockage_avoidance{true};
  WallMode wall_mode{WallMode::kDirected};
  double goal_heading_tolerance{deg2rad(45.0)};
};

enum class PlanStatus : std::uint8_t { kOk, kGoalReached, kPlanningFailure };

struct PlanOutput
{
  NavCommand command{NavCommand::kFollowLane};
  PlanStatus status{PlanStatus::kOk};
  bool replanned{false};
  /// A replan found no route; the previous route is kept.
  bool replan_failed{false};
  GridIndex car_cell;
  std::optional<BlockageEvent> event;
};

class RoutePlanner
{
public:
  RoutePlanner(const std::vector<Road> & roads, const Pose2D & destination, const RoutePlannerConfig & config);

  /// One planning tick. grid may be null when blockage avoidance is off.
  PlanOutput plan_step(const Pose2D & car, const OccupancyGrid * grid);

  const Route & route() const { return route_; }
  const PlanningMap & map() const { return map_; }
  const RoadGraph & graph() const { return graph_; }
  const std::set<GridIndex> & intersections() const { return intersections_; }
  GridIndex destination_cell() const { return dest_cell_; }
  GridIndex cell_of(const Vec2 & world) const { return car_cell_of(map_, graph_.roads, world); }
  std::size_t a_star_runs() const { return a_star_runs_; }

  /// Lane center points of the route from the car's cell on, up to max_cells.
  std::vector<Vec2> lane_points(std::size_t max_cells) const;
  /// Remaining route distance from the car cell to the destination, meters.
  double remaining_distance(const Vec2 & car) const;

  /// Shortest route length on the base map (destination wall only), meters;
  /// nullopt when unreachable.
  std::optional<double> shortest_route_length(const Pose2D & start) const;

private:
  bool replan(const GridIndex & car_cell, double yaw);

  RoutePlannerConfig config_;
  RoadGraph graph_;
  PlanningMap map_;
  std::set<GridIndex> intersections_;
  Pose2D destination_;
  GridIndex dest_cell_;
  Route route_;
  bool first_call_{true};
  std::size_t a_star_runs_{0};
  std::vector<GridIndex> blockage_walls_;
};

}  // namespace ogmnav
