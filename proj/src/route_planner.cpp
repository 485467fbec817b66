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

#include "ogmnav/route_planner.hpp"

#include <algorithm>

namespace ogmnav
{

RoutePlanner::RoutePlanner(
  const std::vector<Road> & roads, const Pose2D & destination, const RoutePlannerConfig & config)
: config_(config),
  graph_(build_world_graph(roads)),
  map_(build_planning_map(graph_, config.planner.resolution)),
  intersections_(intersection_cells(map_, graph_)),
  destination_(destination)
{
  config_.blockage.validate();
  dest_cell_ = car_cell_of(map_, graph_.roads, destination.position());
  // Arrive in the lane of the requested heading.
  add_wall_ahead(map_, dest_cell_, destination.yaw);
}

bool RoutePlanner::replan(const GridIndex & car_cell, double yaw)
{
  // The car wall only shapes this search; it must not linger on a cell the
  // car may legitimately need later.
  PlanningMap search = map_;
  add_wall_behind(search, car_cell, yaw);
  ++a_star_runs_;
  auto path = a_star(search, car_cell, dest_cell_);
  if (!path) {
    return false;
  }
  auto cmds = assign_commands(*path, intersections_, config_.planner);
  route_ = make_route(std::move(*path), std::move(cmds));
  return true;
}

PlanOutput RoutePlanner::plan_step(const Pose2D & car, const OccupancyGrid * grid)
{
  PlanOutput out;
  const GridIndex car_cell = cell_of(car.position());
  out.car_cell = car_cell;

  if (car_cell == dest_cell_ && angle_distance(car.yaw, destination_.yaw) <= config_.goal_heading_tolerance) {
    out.command = NavCommand::kGoalReached;
    out.status = PlanStatus::kGoalReached;
    return out;
  }

  bool need_replan = first_call_;
  if (!route_.empty()) {
    if (route_progress(route_, car_cell) == Progress::kExited) {
      need_replan = true;
    }
  }

  if (config_.wall_mode == WallMode::kRemoveWhenLeft && !blockage_walls_.empty()) {
    const auto far = [&](const GridIndex & c) {
      return std::abs(c.row - car_cell.row) + std::abs(c.col - car_cell.col) > config_.blockage.route_pts;
    };
    bool removed = false;
    for (const auto & c : blockage_walls_) {
      if (far(c)) {
        map_.clear_walls(c);
        removed = true;
      }
    }
    if (removed) {
      std::erase_if(blockage_walls_, far);
      add_wall_ahead(map_, dest_cell_, destination_.yaw);
      need_replan = true;
    }
  }

  if (config_.blockage_avoidance && grid != nullptr && !route_.empty() && !route_.route_exited) {
    const std::vector<GridIndex> ahead(
      route_.cells.begin() + static_cast<std::ptrdiff_t>(route_.car_index()), route_.cells.end());
    DetectionResult detection = detect_blockages(map_, ahead, graph_.roads, *grid, config_.blockage);
    if (detection.road_blocked) {
      route_.road_blocked = true;
      out.event = detection.event;
      blockage_walls_.push_back(detection.event->cell);
      need_replan = true;
    }
  }

  if (need_replan) {
    out.replanned = true;
    if (!replan(car_cell, car.yaw)) {
      if (first_call_) {
        out.status = PlanStatus::kPlanningFailure;
        first_call_ = false;
        return out;
      }
      out.replan_failed = true;
      route_.route_exited = false;
      route_.road_blocked = false;
    }
  }
  first_call_ = false;

  if (route_.empty()) {
    out.status = PlanStatus::kPlanningFailure;
    return out;
  }
  out.command = route_.cmds[std::min(route_.car_index(), route_.cmds.size() - 1)];
  return out;
}

std::vector<Vec2> RoutePlanner::lane_points(std::size_t max_cells) const
{
  if (route_.empty()) {
    return {};
  }
  const std::size_t lo = std::min(route_.car_index(), route_.cells.size() - 1);
  const std::size_t hi = std::min(route_.cells.size(), lo + max_cells);
  const std::vector<GridIndex> cells(
    route_.cells.begin() + static_cast<std::ptrdiff_t>(lo), route_.cells.begin() + static_cast<std::ptrdiff_t>(hi));
  std::vector<Vec2> points = lane_center_waypoints(cells, map_, graph_.roads);
  if (hi == route_.cells.size()) {
    // Drive on through the destination cell along the arrival heading.
    const Vec2 last = points.back();
    points.push_back(last + destination_.heading() * map_.resolution());
  }
  return points;
}

double RoutePlanner::remaining_distance(const Vec2 & car) const
{
  if (route_.empty()) {
    return 0.0;
  }
  const GridIndex cell = cell_of(car);
  if (cell == dest_cell_) {
    return 0.0;
  }
  const std::size_t idx = std::min(route_.car_index(), route_.cells.size() - 1);
  return static_cast<double>(route_.cells.size() - 1 - idx) * map_.resolution();
}

std::optional<double> RoutePlanner::shortest_route_length(const Pose2D & start) const
{
  PlanningMap base = build_planning_map(graph_, config_.planner.resolution);
  add_wall_ahead(base, dest_cell_, destination_.yaw);
  const GridIndex s = cell_of(start.position());
  add_wall_behind(base, s, start.yaw);
  const auto path = a_star(base, s, dest_cell_);
  if (!path) {
    return std::nullopt;
  }
  return static_cast<double>(path->size() - 1) * map_.resolution();
}

}  // namespace ogmnav
