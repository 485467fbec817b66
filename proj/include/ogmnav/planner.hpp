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

// Topological route planning on a coarse one-way road grid: road graph,
// planning grid with directed walls, turn-minimizing A*, and navigation
// commands around intersections.
//
// Planning cells use the same convention as the occupancy grid: row grows
// with world y (north), col with world x (east).

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "ogmnav/geometry.hpp"
#include "ogmnav/world.hpp"

namespace ogmnav
{

enum class Direction : std::uint8_t { kNorth = 0, kEast = 1, kSouth = 2, kWest = 3 };

constexpr std::uint8_t direction_bit(Direction d) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(d)); }
constexpr std::uint8_t kAllDirections = 0x0F;

Direction opposite(Direction d);
GridIndex neighbor(const GridIndex & cell, Direction d);
/// Direction of the step from one cell to a 4-adjacent cell.
std::optional<Direction> direction_between(const GridIndex & from, const GridIndex & to);
/// Nearest of the four directions to a world heading.
Direction heading_direction(double yaw);
std::string_view to_string(Direction d);

struct RoadGraph
{
  struct Edge
  {
    std::size_t from;
    std::size_t to;
    double weight;
  };

  std::vector<Vec2> nodes;
  std::vector<Edge> edges;
  /// Road segments after splitting at junctions, one per undirected edge pair.
  std::vector<Road> roads;
  std::vector<std::size_t> intersections;

  /// Number of incident road segments.
  int degree(std::size_t node) const;
};

/// Node per distinct endpoint (1e-6 m snapping). Roads are split where
/// another road ends on their interior or crosses them. Throws
/// std::invalid_argument on empty input or zero-length roads.
RoadGraph build_world_graph(const std::vector<Road> & roads);

class PlanningMap
{
public:
  PlanningMap() = default;
  PlanningMap(int rows, int cols, double resolution, const Vec2 & origin);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double resolution() const { return resolution_; }
  const Vec2 & origin() const { return origin_; }

  bool in_bounds(const GridIndex & cell) const
  {
    return cell.row >= 0 && cell.col >= 0 && cell.row < rows_ && cell.col < cols_;
  }
  /// Road cell (not a wall of the base map).
  bool is_free(const GridIndex & cell) const;
  void set_free(const GridIndex & cell, bool free);
  /// Approaches blocked by directed or full walls, as direction bits of the
  /// neighbor side the entry comes from.
  std::uint8_t blocked_mask(const GridIndex & cell) const;
  /// Whether a step from the neighbor on from_side into cell is legal.
  bool can_enter(const GridIndex & cell, Direction from_side) const;

  /// Forbids entering cell from its neighbor on from_side. Walls accumulate;
  /// wall cells and out-of-bounds cells are ignored.
  void add_directed_wall(const GridIndex & cell, Direction from_side);
  void add_full_wall(const GridIndex & cell);
  void clear_walls(const GridIndex & cell);
  /// Cells carrying any directed or full wall.
  std::vector<GridIndex> walled_cells() const;

  /// Cell containing a world point, clamped into the grid.
  GridIndex cell_of_point(const Vec2 & world) const;
  Vec2 cell_center(const GridIndex & cell) const;

private:
  std::size_t index(const GridIndex & cell) const { return static_cast<std::size_t>(cell.row) * cols_ + cell.col; }

  int rows_{0};
  int cols_{0};
  double resolution_{1.0};
  Vec2 origin_;
  std::vector<std::uint8_t> free_;
  std::vector<std::uint8_t> blocked_;
};

/// Grid over the graph bounding box; cells under any road centerline are
/// free, everything else is wall. Throws std::invalid_argument for an empty
/// graph, non-axis-aligned roads or non-positive resolution.
PlanningMap build_planning_map(const RoadGraph & graph, double resolution);

/// Car cell: the point is projected onto the nearest road centerline first so
/// lane offsets never leave the corridor.
GridIndex car_cell_of(const PlanningMap & map, const std::vector<Road> & roads, const Vec2 & world);

std::set<GridIndex> intersection_cells(const PlanningMap & map, const RoadGraph & graph);

/// Wall in the cell behind the given heading, as used at the car and after
/// the destination.
void add_wall_behind(PlanningMap & map, const GridIndex & cell, double yaw);
void add_wall_ahead(PlanningMap & map, const GridIndex & cell, double yaw);

struct AStarStats
{
  std::size_t expanded{0};
};

/// 4-connected shortest path respecting walls; among shortest paths the one
/// with the fewest heading changes. nullopt when the goal is unreachable.
std::optional<std::vector<GridIndex>> a_star(
  const PlanningMap & map, const GridIndex & start, const GridIndex & goal, AStarStats * stats = nullptr);

int count_turns(const std::vector<GridIndex> & path);

enum class NavCommand : std::uint8_t { kFollowLane, kGoLeft, kGoRight, kGoStraight, kGoalReached };

std::string_view to_string(NavCommand c);

struct PlannerParams
{
  int far_inters{4};
  int inter_exited{1};
  double resolution{8.215};
};

/// Commands per route cell: FollowLane by default, the turn direction around
/// each intersection from far_inters cells before to inter_exited after.
std::vector<NavCommand> assign_commands(
  const std::vector<GridIndex> & cells, const std::set<GridIndex> & intersections, const PlannerParams & params);

struct Route
{
  std::vector<GridIndex> cells;
  std::vector<NavCommand> cmds;
  /// Index of the cell after the vehicle's.
  std::size_t next{1};
  GridIndex prev_cell;
  bool route_exited{false};
  bool road_blocked{false};

  bool empty() const { return cells.empty(); }
  std::size_t car_index() const { return next == 0 ? 0 : next - 1; }
};

Route make_route(std::vector<GridIndex> cells, std::vector<NavCommand> cmds);

enum class Progress : std::uint8_t { kAdvanced, kUnchanged, kExited };

/// Tracks the car along the route. The car may stay in its cell, step back
/// one cell or move up to two cells ahead; anything else flags route_exited.
Progress route_progress(Route & route, const GridIndex & car_cell);

/// 24-bit PNG, 2x2 pixels per cell: walls black, road white, route blue,
/// blocked approach sides dark gray on a light gray cell.
std::vector<std::uint8_t> render_planning_map(const PlanningMap & map, const std::vector<GridIndex> & route);

}  // namespace ogmnav
