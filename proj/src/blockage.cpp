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

#include "ogmnav/blockage.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace ogmnav
{

void BlockageParams::validate() const
{
  if (route_pts < 2) {
    throw std::invalid_argument("BlockageParams: route_pts must be >= 2");
  }
  if (!(p_occ > 0.0 && p_occ < 1.0)) {
    throw std::invalid_argument("BlockageParams: p_occ must be in (0, 1)");
  }
  if (cell_occupied_pts < 1.0 || !(slice_width > 0.0) || distance_scaling < 0.0 || bezier_samples < 2) {
    throw std::invalid_argument("BlockageParams: invalid thresholds");
  }
}

void RectifyParams::validate() const
{
  if (!(step > 0.0) || max_correction < step) {
    throw std::invalid_argument("RectifyParams: need step > 0 and max_correction >= step");
  }
  if (!(lookahead > 0.0) || !(spacing > 0.0) || clearance < 0.0 || !(p_occ > 0.0 && p_occ < 1.0)) {
    throw std::invalid_argument("RectifyParams: invalid lookahead, spacing, clearance or p_occ");
  }
}

namespace
{

Vec2 unit(Direction d)
{
  switch (d) {
    case Direction::kNorth:
      return {0.0, 1.0};
    case Direction::kEast:
      return {1.0, 0.0};
    case Direction::kSouth:
      return {0.0, -1.0};
    case Direction::kWest:
      return {-1.0, 0.0};
  }
  return {};
}

struct LaneLine
{
  Vec2 point;
  Vec2 dir;
};

// Lane line of travel direction d near a world point: the nearest road
// parallel to d, shifted to its right-hand lane.
LaneLine lane_line(const std::vector<Road> & roads, const Vec2 & p, Direction d, double max_offset)
{
  const bool want_horizontal = d == Direction::kEast || d == Direction::kWest;
  double best = std::numeric_limits<double>::infinity();
  const Road * pick = nullptr;
  Vec2 foot;
  for (const auto & road : roads) {
    if (want_horizontal ? !road.horizontal() : !road.vertical()) {
      continue;
    }
    const Vec2 q = project_onto_road(road, p);
    const double dist = distance(q, p);
    if (dist < best) {
      best = dist;
      pick = &road;
      foot = q;
    }
  }
  if (pick == nullptr || best > max_offset) {
    throw std::invalid_argument(
      "lane_center_waypoints: no road along direction " + std::string(to_string(d)) + " near (" +
      std::to_string(p.x) + ", " + std::to_string(p.y) + ")");
  }
  const Vec2 u = unit(d);
  const Vec2 right{u.y, -u.x};
  return {foot + right * (pick->lane_width / 2.0), u};
}

}  // namespace

std::vector<Vec2> lane_center_waypoints(
  const std::vector<GridIndex> & cells, const PlanningMap & map, const std::vector<Road> & roads)
{
  std::vector<Vec2> out;
  out.reserve(cells.size());
  const double max_offset = map.resolution();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Vec2 center = map.cell_center(cells[i]);
    std::optional<Direction> d_in;
    std::optional<Direction> d_out;
    if (i > 0) {
      d_in = direction_between(cells[i - 1], cells[i]);
    }
    if (i + 1 < cells.size()) {
      d_out = direction_between(cells[i], cells[i + 1]);
    }
    if (!d_in && !d_out) {
      const auto road = nearest_road(roads, center);
      if (!road || distance(project_onto_road(roads[*road], center), center) > max_offset) {
        throw std::invalid_argument("lane_center_waypoints: cell is not on any road");
      }
      out.push_back(project_onto_road(roads[*road], center));
      continue;
    }
    const Direction in = d_in.value_or(*d_out);
    const Direction out_dir = d_out.value_or(in);
    const LaneLine a = lane_line(roads, center, in, max_offset);
    if (out_dir == in || out_dir == opposite(in)) {
      out.push_back(a.point);
      continue;
    }
    const LaneLine b = lane_line(roads, center, out_dir, max_offset);
    // One line is horizontal and the other vertical.
    if (std::fabs(a.dir.x) > 0.5) {
      out.push_back({b.point.x, a.point.y});
    } else {
      out.push_back({a.point.x, b.point.y});
    }
  }
  return out;
}

DetectionResult detect_blockages(
  PlanningMap & map, const std::vector<GridIndex> & route, const std::vector<Road> & roads,
  const OccupancyGrid & grid, const BlockageParams & params)
{
  params.validate();
  DetectionResult result;
  if (route.size() < 2) {
    return result;
  }
  const std::size_t n = std::min(route.size(), static_cast<std::size_t>(params.route_pts));
  const std::vector<GridIndex> cells(route.begin(), route.begin() + static_cast<std::ptrdiff_t>(n));
  const std::vector<Vec2> waypoints = lane_center_waypoints(cells, map, roads);
  result.curve = bezier_sample(waypoints, params.bezier_samples);

  std::vector<GridIndex> owner(result.curve.size());
  for (std::size_t k = 0; k < result.curve.size(); ++k) {
    owner[k] = car_cell_of(map, roads, result.curve[k]);
  }
  const Vec2 vehicle = grid.local_to_world(grid.local_pose().position());

  for (std::size_t i = 1; i < n; ++i) {
    const GridIndex & cell = cells[i];
    const auto travel = direction_between(cells[i - 1], cell);
    const Direction from_side = travel ? opposite(*travel) : Direction::kWest;
    if (!map.can_enter(cell, from_side)) {
      // Already closed; only an old route kept after a failed replan gets here.
      continue;
    }
    double count = 0.0;
    for (std::size_t k = 0; k < result.curve.size(); ++k) {
      if (owner[k] != cell) {
        continue;
      }
      const Vec2 & p = result.curve[k];
      count += slice_occupied_count(grid, grid.world_to_local(p), params.slice_width, params.p_occ);
      const double range = distance(p, vehicle);
      const double threshold = params.cell_occupied_pts * (1.0 + params.distance_scaling * range);
      if (count > threshold) {
        map.add_directed_wall(cell, from_side);
        result.road_blocked = true;
        result.event = BlockageEvent{cell, from_side, p, count, threshold, range, i};
        return result;
      }
    }
  }
  return result;
}

std::vector<Vec2> rollout_points(
  const VehicleState & state, double steering, const RectifyParams & rect, const BicycleParams & bike)
{
  VehicleState probe = state;
  probe.speed = std::max(state.speed, rect.min_check_speed);
  probe.steering = steering;
  BicycleParams params = bike;
  params.horizon = rect.horizon;
  params.n_states = rect.n_states;
  const std::vector<Pose2D> poses = bicycle_predict(probe, params);
  std::vector<Vec2> polyline;
  polyline.reserve(poses.size());
  for (const auto & p : poses) {
    polyline.push_back(p.position());
  }
  const std::vector<Vec2> dense = resample_polyline(polyline, rect.spacing);
  std::vector<Vec2> out;
  const Vec2 origin = state.pose.position();
  for (std::size_t i = 1; i < dense.size(); ++i) {
    if (distance(dense[i], origin) <= rect.lookahead) {
      out.push_back(dense[i]);
    }
  }
  return out;
}

namespace
{

// Nearest occupied cell center (world) around any trajectory point, if any.
std::optional<Vec2> first_conflict(
  const OccupancyGrid & grid, const std::vector<Vec2> & points, const RectifyParams & rect, const Vec2 & vehicle)
{
  const double threshold = logit(rect.p_occ);
  const double radius = rect.clearance / grid.resolution();
  const int reach = static_cast<int>(std::ceil(radius));
  std::optional<Vec2> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto & p : points) {
    const Vec2 local = grid.world_to_local(p);
    const int c0 = static_cast<int>(std::floor(local.x));
    const int r0 = static_cast<int>(std::floor(local.y));
    for (int r = r0 - reach; r <= r0 + reach; ++r) {
      for (int c = c0 - reach; c <= c0 + reach; ++c) {
        const GridIndex cell{r, c};
        if (!grid.in_bounds(cell)) {
          continue;
        }
        const Vec2 center{c + 0.5, r + 0.5};
        if (distance(center, local) > radius) {
          continue;
        }
        if (grid.log_odds(cell) > threshold) {
          const Vec2 w = grid.local_to_world(center);
          const double d = distance(w, vehicle);
          if (d < best_d) {
            best_d = d;
            best = w;
          }
        }
      }
    }
    if (best) {
      // Points are ordered by distance along the rollout.
      return best;
    }
  }
  return best;
}

}  // namespace

bool trajectory_free(const OccupancyGrid & grid, const std::vector<Vec2> & points, const RectifyParams & rect)
{
  return !first_conflict(grid, points, rect, points.empty() ? Vec2{} : points.front()).has_value();
}

RectifyResult rectify_steering(
  double steering, const VehicleState & state, const OccupancyGrid & grid, const RectifyParams & rect,
  const BicycleParams & bike)
{
  rect.validate();
  RectifyResult result;
  result.steering = steering;
  const Vec2 vehicle = state.pose.position();
  const auto conflict = first_conflict(grid, rollout_points(state, steering, rect, bike), rect, vehicle);
  if (!conflict) {
    return result;
  }
  // Steer away from the obstacle side first; positive steering turns left.
  const double side = cross(state.pose.heading(), *conflict - vehicle);
  const double first_sign = side > 0.0 ? -1.0 : 1.0;
  const int n_steps = static_cast<int>(std::floor(rect.max_correction / rect.step + 1e-9));
  for (int k = 1; k <= n_steps; ++k) {
    for (double sign : {first_sign, -first_sign}) {
      const double correction = sign * k * rect.step;
      const double candidate = std::clamp(steering + correction, -bike.max_steer, bike.max_steer);
      if (!first_conflict(grid, rollout_points(state, candidate, rect, bike), rect, vehicle)) {
        result.steering = candidate;
        result.correction = candidate - steering;
        result.corrected = true;
        return result;
      }
    }
  }
  result.blocked = true;
  return result;
}

}  // namespace ogmnav
