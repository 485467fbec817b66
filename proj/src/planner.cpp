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

#include "ogmnav/planner.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>

#include "ogmnav/image.hpp"

namespace ogmnav
{

Direction opposite(Direction d) { return static_cast<Direction>((static_cast<unsigned>(d) + 2u) % 4u); }

GridIndex neighbor(const GridIndex & cell, Direction d)
{
  switch (d) {
    case Direction::kNorth:
      return {cell.row + 1, cell.col};
    case Direction::kEast:
      return {cell.row, cell.col + 1};
    case Direction::kSouth:
      return {cell.row - 1, cell.col};
    case Direction::kWest:
      return {cell.row, cell.col - 1};
  }
  return cell;
}

std::optional<Direction> direction_between(const GridIndex & from, const GridIndex & to)
{
  const int dr = to.row - from.row;
  const int dc = to.col - from.col;
  if (dr == 1 && dc == 0) {
    return Direction::kNorth;
  }
  if (dr == -1 && dc == 0) {
    return Direction::kSouth;
  }
  if (dr == 0 && dc == 1) {
    return Direction::kEast;
  }
  if (dr == 0 && dc == -1) {
    return Direction::kWest;
  }
  return std::nullopt;
}

Direction heading_direction(double yaw)
{
  const double a = normalize_angle(yaw);
  const double q = std::numbers::pi / 4.0;
  if (a >= -q && a < q) {
    return Direction::kEast;
  }
  if (a >= q && a < 3.0 * q) {
    return Direction::kNorth;
  }
  if (a >= -3.0 * q && a < -q) {
    return Direction::kSouth;
  }
  return Direction::kWest;
}

std::string_view to_string(Direction d)
{
  switch (d) {
    case Direction::kNorth:
      return "N";
    case Direction::kEast:
      return "E";
    case Direction::kSouth:
      return "S";
    case Direction::kWest:
      return "W";
  }
  return "?";
}

int RoadGraph::degree(std::size_t node) const
{
  int n = 0;
  for (const auto & e : edges) {
    if (e.from == node) {
      ++n;
    }
  }
  return n;
}

namespace
{

constexpr double kSnap = 1e-6;

// Parameter along a of the proper crossing with b, if any.
std::optional<double> crossing_param(const Road & a, const Road & b)
{
  const Vec2 r = a.end - a.start;
  const Vec2 s = b.end - b.start;
  const double denom = cross(r, s);
  if (std::fabs(denom) < 1e-12) {
    return std::nullopt;
  }
  const Vec2 qp = b.start - a.start;
  const double t = cross(qp, s) / denom;
  const double u = cross(qp, r) / denom;
  const double eps_t = kSnap / r.norm();
  const double eps_u = kSnap / s.norm();
  if (t < -eps_t || t > 1.0 + eps_t || u < -eps_u || u > 1.0 + eps_u) {
    return std::nullopt;
  }
  return std::clamp(t, 0.0, 1.0);
}

std::size_t find_or_add_node(std::vector<Vec2> & nodes, const Vec2 & p)
{
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (distance(nodes[i], p) <= kSnap) {
      return i;
    }
  }
  nodes.push_back(p);
  return nodes.size() - 1;
}

}  // namespace

RoadGraph build_world_graph(const std::vector<Road> & roads)
{
  if (roads.empty()) {
    throw std::invalid_argument("build_world_graph: no roads");
  }
  for (std::size_t i = 0; i < roads.size(); ++i) {
    if (roads[i].length() <= kSnap) {
      throw std::invalid_argument("build_world_graph: road " + std::to_string(i) + " has zero length");
    }
  }

  RoadGraph graph;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t i = 0; i < roads.size(); ++i) {
    const Road & road = roads[i];
    std::vector<double> cuts = {0.0, 1.0};
    for (std::size_t j = 0; j < roads.size(); ++j) {
      if (j == i) {
        continue;
      }
      if (auto t = crossing_param(road, roads[j])) {
        cuts.push_back(*t);
      }
      // Collinear overlaps: the other road's endpoints split this one.
      for (const Vec2 & p : {roads[j].start, roads[j].end}) {
        const Vec2 q = project_onto_road(road, p);
        if (distance(q, p) <= kSnap) {
          cuts.push_back(dot(q - road.start, road.end - road.start) / (road.length() * road.length()));
        }
      }
    }
    std::sort(cuts.begin(), cuts.end());
    const double min_gap = kSnap / road.length();
    std::vector<double> unique_cuts;
    for (double t : cuts) {
      if (unique_cuts.empty() || t - unique_cuts.back() > min_gap) {
        unique_cuts.push_back(t);
      }
    }
    for (std::size_t k = 0; k + 1 < unique_cuts.size(); ++k) {
      const Vec2 a = road.start + (road.end - road.start) * unique_cuts[k];
      const Vec2 b = road.start + (road.end - road.start) * unique_cuts[k + 1];
      const std::size_t na = find_or_add_node(graph.nodes, a);
      const std::size_t nb = find_or_add_node(graph.nodes, b);
      if (na == nb || !seen.insert({std::min(na, nb), std::max(na, nb)}).second) {
        continue;
      }
      Road piece{graph.nodes[na], graph.nodes[nb], road.lane_width};
      const double w = piece.length();
      graph.roads.push_back(piece);
      graph.edges.push_back({na, nb, w});
      graph.edges.push_back({nb, na, w});
    }
  }
  for (std::size_t n = 0; n < graph.nodes.size(); ++n) {
    if (graph.degree(n) > 2) {
      graph.intersections.push_back(n);
    }
  }
  return graph;
}

PlanningMap::PlanningMap(int rows, int cols, double resolution, const Vec2 & origin)
: rows_(rows), cols_(cols), resolution_(resolution), origin_(origin)
{
  if (rows <= 0 || cols <= 0 || !(resolution > 0.0)) {
    throw std::invalid_argument("PlanningMap: invalid dimensions");
  }
  free_.assign(static_cast<std::size_t>(rows) * cols, 0);
  blocked_.assign(free_.size(), 0);
}

bool PlanningMap::is_free(const GridIndex & cell) const { return in_bounds(cell) && free_[index(cell)] != 0; }

void PlanningMap::set_free(const GridIndex & cell, bool free)
{
  if (in_bounds(cell)) {
    free_[index(cell)] = free ? 1 : 0;
  }
}

std::uint8_t PlanningMap::blocked_mask(const GridIndex & cell) const
{
  return in_bounds(cell) ? blocked_[index(cell)] : kAllDirections;
}

bool PlanningMap::can_enter(const GridIndex & cell, Direction from_side) const
{
  return is_free(cell) && (blocked_[index(cell)] & direction_bit(from_side)) == 0;
}

void PlanningMap::add_directed_wall(const GridIndex & cell, Direction from_side)
{
  if (is_free(cell)) {
    blocked_[index(cell)] |= direction_bit(from_side);
  }
}

void PlanningMap::add_full_wall(const GridIndex & cell)
{
  if (is_free(cell)) {
    blocked_[index(cell)] = kAllDirections;
  }
}

void PlanningMap::clear_walls(const GridIndex & cell)
{
  if (in_bounds(cell)) {
    blocked_[index(cell)] = 0;
  }
}

std::vector<GridIndex> PlanningMap::walled_cells() const
{
  std::vector<GridIndex> out;
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) {
      if (blocked_[index({r, c})] != 0) {
        out.push_back({r, c});
      }
    }
  }
  return out;
}

GridIndex PlanningMap::cell_of_point(const Vec2 & world) const
{
  const int col = static_cast<int>(std::floor((world.x - origin_.x) / resolution_));
  const int row = static_cast<int>(std::floor((world.y - origin_.y) / resolution_));
  return {std::clamp(row, 0, rows_ - 1), std::clamp(col, 0, cols_ - 1)};
}

Vec2 PlanningMap::cell_center(const GridIndex & cell) const
{
  return {origin_.x + (cell.col + 0.5) * resolution_, origin_.y + (cell.row + 0.5) * resolution_};
}

PlanningMap build_planning_map(const RoadGraph & graph, double resolution)
{
  if (graph.nodes.empty() || graph.roads.empty()) {
    throw std::invalid_argument("build_planning_map: empty graph");
  }
  if (!(resolution > 0.0)) {
    throw std::invalid_argument("build_planning_map: resolution must be positive");
  }
  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Vec2 hi{-lo.x, -lo.y};
  for (const auto & n : graph.nodes) {
    lo = {std::min(lo.x, n.x), std::min(lo.y, n.y)};
    hi = {std::max(hi.x, n.x), std::max(hi.y, n.y)};
  }
  for (std::size_t i = 0; i < graph.roads.size(); ++i) {
    if (!graph.roads[i].horizontal() && !graph.roads[i].vertical()) {
      throw std::invalid_argument("build_planning_map: road " + std::to_string(i) + " is not axis-aligned");
    }
  }
  const int cols = std::max(1, static_cast<int>(std::ceil((hi.x - lo.x) / resolution - 1e-9)));
  const int rows = std::max(1, static_cast<int>(std::ceil((hi.y - lo.y) / resolution - 1e-9)));
  PlanningMap map(rows, cols, resolution, lo);
  for (const auto & road : graph.roads) {
    const GridIndex a = map.cell_of_point(road.start);
    const GridIndex b = map.cell_of_point(road.end);
    for (int r = std::min(a.row, b.row); r <= std::max(a.row, b.row); ++r) {
      for (int c = std::min(a.col, b.col); c <= std::max(a.col, b.col); ++c) {
        map.set_free({r, c}, true);
      }
    }
  }
  return map;
}

GridIndex car_cell_of(const PlanningMap & map, const std::vector<Road> & roads, const Vec2 & world)
{
  const auto road = nearest_road(roads, world);
  if (!road) {
    return map.cell_of_point(world);
  }
  return map.cell_of_point(project_onto_road(roads[*road], world));
}

std::set<GridIndex> intersection_cells(const PlanningMap & map, const RoadGraph & graph)
{
  std::set<GridIndex> out;
  for (std::size_t n : graph.intersections) {
    out.insert(map.cell_of_point(graph.nodes[n]));
  }
  return out;
}

void add_wall_behind(PlanningMap & map, const GridIndex & cell, double yaw)
{
  map.add_full_wall(neighbor(cell, opposite(heading_direction(yaw))));
}

void add_wall_ahead(PlanningMap & map, const GridIndex & cell, double yaw)
{
  map.add_full_wall(neighbor(cell, heading_direction(yaw)));
}

std::optional<std::vector<GridIndex>> a_star(
  const PlanningMap & map, const GridIndex & start, const GridIndex & goal, AStarStats * stats)
{
  if (!map.is_free(start) || !map.is_free(goal)) {
    return std::nullopt;
  }
  if (start == goal) {
    return std::vector<GridIndex>{start};
  }

  // State = cell x arrival heading (4 = none, the start).
  constexpr int kHeadings = 5;
  const std::size_t n_states = static_cast<std::size_t>(map.rows()) * map.cols() * kHeadings;
  auto state_of = [&](const GridIndex & c, int h) {
    return (static_cast<std::size_t>(c.row) * map.cols() + c.col) * kHeadings + h;
  };
  constexpr int kInf = std::numeric_limits<int>::max();
  std::vector<int> g_len(n_states, kInf);
  std::vector<int> g_turns(n_states, kInf);
  std::vector<std::size_t> parent(n_states, std::numeric_limits<std::size_t>::max());
  std::vector<std::uint8_t> closed(n_states, 0);

  auto h = [&](const GridIndex & c) { return std::abs(c.row - goal.row) + std::abs(c.col - goal.col); };

  // (f, turns, insertion order, state); lexicographic min-heap.
  using Entry = std::tuple<int, int, std::uint64_t, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::uint64_t counter = 0;
  const std::size_t s0 = state_of(start, 4);
  g_len[s0] = 0;
  g_turns[s0] = 0;
  open.emplace(h(start), 0, counter++, s0);

  std::size_t found = std::numeric_limits<std::size_t>::max();
  while (!open.empty()) {
    const auto [f, turns, order, s] = open.top();
    open.pop();
    if (closed[s]) {
      continue;
    }
    closed[s] = 1;
    if (stats != nullptr) {
      ++stats->expanded;
    }
    const std::size_t cell_id = s / kHeadings;
    const int heading = static_cast<int>(s % kHeadings);
    const GridIndex cell{static_cast<int>(cell_id / map.cols()), static_cast<int>(cell_id % map.cols())};
    if (cell == goal) {
      found = s;
      break;
    }
    for (int d = 0; d < 4; ++d) {
      const auto dir = static_cast<Direction>(d);
      const GridIndex next = neighbor(cell, dir);
      if (!map.can_enter(next, opposite(dir))) {
        continue;
      }
      const std::size_t ns = state_of(next, d);
      if (closed[ns]) {
        continue;
      }
      const int nl = g_len[s] + 1;
      const int nt = g_turns[s] + ((heading != 4 && heading != d) ? 1 : 0);
      if (std::tie(nl, nt) < std::tie(g_len[ns], g_turns[ns])) {
        g_len[ns] = nl;
        g_turns[ns] = nt;
        parent[ns] = s;
        open.emplace(nl + h(next), nt, counter++, ns);
      }
    }
  }
  if (found == std::numeric_limits<std::size_t>::max()) {
    return std::nullopt;
  }
  std::vector<GridIndex> path;
  for (std::size_t s = found; s != std::numeric_limits<std::size_t>::max(); s = parent[s]) {
    const std::size_t cell_id = s / kHeadings;
    path.push_back({static_cast<int>(cell_id / map.cols()), static_cast<int>(cell_id % map.cols())});
  }
  std::reverse(path.begin(), path.end());
  return path;
}

int count_turns(const std::vector<GridIndex> & path)
{
  int turns = 0;
  for (std::size_t i = 2; i < path.size(); ++i) {
    if (direction_between(path[i - 2], path[i - 1]) != direction_between(path[i - 1], path[i])) {
      ++turns;
    }
  }
  return turns;
}

std::string_view to_string(NavCommand c)
{
  switch (c) {
    case NavCommand::kFollowLane:
      return "follow_lane";
    case NavCommand::kGoLeft:
      return "go_left";
    case NavCommand::kGoRight:
      return "go_right";
    case NavCommand::kGoStraight:
      return "go_straight";
    case NavCommand::kGoalReached:
      return "goal_reached";
  }
  return "?";
}

std::vector<NavCommand> assign_commands(
  const std::vector<GridIndex> & cells, const std::set<GridIndex> & intersections, const PlannerParams & params)
{
  const int n = static_cast<int>(cells.size());
  std::vector<NavCommand> cmds(cells.size(), NavCommand::kFollowLane);
  for (int i = 0; i < n; ++i) {
    if (!intersections.contains(cells[static_cast<std::size_t>(i)])) {
      continue;
    }
    NavCommand cmd = NavCommand::kGoStraight;
    if (i > 0 && i + 1 < n) {
      const GridIndex & a = cells[static_cast<std::size_t>(i - 1)];
      const GridIndex & b = cells[static_cast<std::size_t>(i)];
      const GridIndex & c = cells[static_cast<std::size_t>(i + 1)];
      const Vec2 v_in{double(b.col - a.col), double(b.row - a.row)};
      const Vec2 v_out{double(c.col - b.col), double(c.row - b.row)};
      // Positive when turning counterclockwise, i.e. left with y north.
      const double s = cross(v_in, v_out);
      if (s < -0.1) {
        cmd = NavCommand::kGoRight;
      } else if (s > 0.1) {
        cmd = NavCommand::kGoLeft;
      }
    }
    const int lo = std::max(0, i - params.far_inters);
    const int hi = std::min(n - 1, i + params.inter_exited);
    for (int k = lo; k <= hi; ++k) {
      cmds[static_cast<std::size_t>(k)] = cmd;
    }
  }
  return cmds;
}

Route make_route(std::vector<GridIndex> cells, std::vector<NavCommand> cmds)
{
  Route route;
  route.cells = std::move(cells);
  route.cmds = std::move(cmds);
  route.next = 1;
  if (!route.cells.empty()) {
    route.prev_cell = route.cells.front();
  }
  return route;
}

Progress route_progress(Route & route, const GridIndex & car_cell)
{
  if (route.cells.empty()) {
    route.route_exited = true;
    return Progress::kExited;
  }
  const std::size_t current = route.car_index();
  const std::size_t lo = current == 0 ? 0 : current - 1;
  const std::size_t hi = std::min(route.cells.size() - 1, current + 2);
  for (std::size_t j = lo; j <= hi; ++j) {
    if (route.cells[j] == car_cell) {
      const bool moved = j != current;
      route.next = j + 1;
      route.prev_cell = car_cell;
      return moved ? Progress::kAdvanced : Progress::kUnchanged;
    }
  }
  route.route_exited = true;
  return Progress::kExited;
}

std::vector<std::uint8_t> render_planning_map(const PlanningMap & map, const std::vector<GridIndex> & route)
{
  const int w = map.cols() * 2;
  const int h = map.rows() * 2;
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(w) * h * 3, 0);
  const std::set<GridIndex> on_route(route.begin(), route.end());
  auto put = [&](int px, int py, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const std::size_t i = (static_cast<std::size_t>(py) * w + px) * 3;
    rgb[i] = r;
    rgb[i + 1] = g;
    rgb[i + 2] = b;
  };
  for (int row = 0; row < map.rows(); ++row) {
    for (int col = 0; col < map.cols(); ++col) {
      const GridIndex cell{row, col};
      const int x0 = col * 2;
      const int y0 = (map.rows() - 1 - row) * 2;
      if (!map.is_free(cell)) {
        continue;
      }
      const std::uint8_t mask = map.blocked_mask(cell);
      for (int sy = 0; sy < 2; ++sy) {
        for (int sx = 0; sx < 2; ++sx) {
          if (mask != 0) {
            const bool dark = ((mask & direction_bit(Direction::kNorth)) && sy == 0) ||
                              ((mask & direction_bit(Direction::kSouth)) && sy == 1) ||
                              ((mask & direction_bit(Direction::kWest)) && sx == 0) ||
                              ((mask & direction_bit(Direction::kEast)) && sx == 1);
            const std::uint8_t v = dark ? 64 : 192;
            put(x0 + sx, y0 + sy, v, v, v);
          } else if (on_route.contains(cell)) {
            put(x0 + sx, y0 + sy, 40, 90, 220);
          } else {
            put(x0 + sx, y0 + sy, 255, 255, 255);
          }
        }
      }
    }
  }
  return encode_png_rgb(w, h, rgb);
}

}  // namespace ogmnav
