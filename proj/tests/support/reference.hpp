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

// Slow, obviously-correct implementations the library is checked against.
// Nothing here shares code with src/ beyond the plain data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <vector>

#include "ogmnav/geometry.hpp"
#include "ogmnav/planner.hpp"

namespace ogmnav::reference
{

inline double wrap(double a)
{
  return std::remainder(a, 2.0 * std::numbers::pi);
}

/// Jarvis march; collinear points on hull edges are dropped.
inline std::vector<Vec2> gift_wrap(std::vector<Vec2> pts)
{
  std::sort(pts.begin(), pts.end(), [](const Vec2 & a, const Vec2 & b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) {
    return pts;
  }
  auto orient = [](const Vec2 & o, const Vec2 & a, const Vec2 & b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  auto d2 = [](const Vec2 & a, const Vec2 & b) { return (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y); };
  std::vector<Vec2> hull;
  std::size_t current = 0;
  do {
    hull.push_back(pts[current]);
    std::size_t next = (current + 1) % pts.size();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i == current) {
        continue;
      }
      const double o = orient(pts[current], pts[next], pts[i]);
      // Most clockwise candidate; the farthest wins on collinear ties.
      if (o < 0.0 || (o == 0.0 && d2(pts[current], pts[i]) > d2(pts[current], pts[next]))) {
        next = i;
      }
    }
    current = next;
  } while (current != 0 && hull.size() <= pts.size());
  return hull;
}

/// Distance from p to segment ab.
inline double segment_distance(const Vec2 & p, const Vec2 & a, const Vec2 & b)
{
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
  return distance(p, a + ab * t);
}

/// Even-odd containment, boundary within eps counts as inside.
inline bool inside_polygon(const std::vector<Vec2> & poly, const Vec2 & p, double eps = 1e-9)
{
  const std::size_t n = poly.size();
  if (n == 0) {
    return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (segment_distance(p, poly[i], poly[(i + 1) % n]) <= eps) {
      return true;
    }
  }
  bool in = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 & a = poly[i];
    const Vec2 & b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) {
        in = !in;
      }
    }
  }
  return in;
}

struct InverseModel
{
  double resolution{0.5};
  double log_odd_occ{0.9};
  double log_odd_free{0.7};
  double wall_depth{1.0};
  double beam_width{deg2rad(2.0)};
  double clamp{10.0};
};

/// Per-cell evaluation of the full-scan inverse model over the convex hull of
/// the extended scan points and the sensor. Points are sensor-frame meters;
/// origin is the sensor position in cell units, yaw the map-frame heading.
inline void inverse_model_update(
  std::vector<double> & cells, int side, const Vec2 & origin, double yaw, const std::vector<Vec2> & sensor_points,
  const InverseModel & m)
{
  if (sensor_points.empty()) {
    return;
  }
  std::vector<Vec2> ext;
  std::vector<double> ang;
  std::vector<double> dist;
  for (const auto & s : sensor_points) {
    const Vec2 p{
      origin.x + (std::cos(yaw) * s.x - std::sin(yaw) * s.y) / m.resolution,
      origin.y + (std::sin(yaw) * s.x + std::cos(yaw) * s.y) / m.resolution};
    const double a = std::atan2(p.y - origin.y, p.x - origin.x);
    const Vec2 e = p + Vec2{std::cos(a), std::sin(a)} * (m.wall_depth / m.resolution);
    ext.push_back(e);
    ang.push_back(a);
    dist.push_back(distance(e, origin));
  }
  std::vector<Vec2> pts = ext;
  pts.push_back(origin);
  const std::vector<Vec2> hull = gift_wrap(pts);
  const double w = m.wall_depth / m.resolution;

  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      const Vec2 center{c + 0.5, r + 0.5};
      if (!inside_polygon(hull, center)) {
        continue;
      }
      const double d = distance(center, origin);
      const double a = std::atan2(center.y - origin.y, center.x - origin.x);
      double near = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < ang.size(); ++k) {
        if (std::fabs(wrap(a - ang[k])) < m.beam_width / 2.0) {
          near = std::min(near, dist[k]);
        }
      }
      double & v = cells[static_cast<std::size_t>(r) * side + c];
      if (std::isfinite(near)) {
        if (d < near - w) {
          v = std::max(-m.clamp, v - m.log_odd_free);
        } else if (d <= near) {
          v = std::min(m.clamp, v + m.log_odd_occ);
        }
      } else {
        std::size_t best = 0;
        for (std::size_t k = 1; k < ang.size(); ++k) {
          if (std::fabs(wrap(a - ang[k])) < std::fabs(wrap(a - ang[best]))) {
            best = k;
          }
        }
        if (d < dist[best]) {
          v = std::max(-m.clamp, v - m.log_odd_free);
        }
      }
    }
  }
}

/// Four-connected BFS honoring directed walls; returns the cell count of a
/// shortest path or nothing.
inline std::optional<std::size_t> bfs_length(const PlanningMap & map, const GridIndex & start, const GridIndex & goal)
{
  if (!map.in_bounds(start) || !map.in_bounds(goal) || !map.is_free(start) || !map.is_free(goal)) {
    return std::nullopt;
  }
  std::vector<int> depth(static_cast<std::size_t>(map.rows() * map.cols()), -1);
  auto at = [&](const GridIndex & c) -> int & { return depth[static_cast<std::size_t>(c.row * map.cols() + c.col)]; };
  std::deque<GridIndex> queue{start};
  at(start) = 1;
  while (!queue.empty()) {
    const GridIndex c = queue.front();
    queue.pop_front();
    if (c == goal) {
      return static_cast<std::size_t>(at(c));
    }
    for (Direction d : {Direction::kNorth, Direction::kEast, Direction::kSouth, Direction::kWest}) {
      const GridIndex n = neighbor(c, d);
      if (!map.in_bounds(n) || !map.is_free(n) || at(n) >= 0 || !map.can_enter(n, opposite(d))) {
        continue;
      }
      at(n) = at(c) + 1;
      queue.push_back(n);
    }
  }
  return std::nullopt;
}

inline int turns_of(const std::vector<GridIndex> & path)
{
  int turns = 0;
  for (std::size_t i = 2; i < path.size(); ++i) {
    const int a_r = path[i - 1].row - path[i - 2].row;
    const int a_c = path[i - 1].col - path[i - 2].col;
    const int b_r = path[i].row - path[i - 1].row;
    const int b_c = path[i].col - path[i - 1].col;
    turns += (a_r != b_r || a_c != b_c) ? 1 : 0;
  }
  return turns;
}

/// Minimum turn count over every shortest legal path, by depth-first
/// enumeration. Only practical on small grids.
inline std::optional<int> min_turns_over_shortest(const PlanningMap & map, const GridIndex & start, const GridIndex & goal)
{
  const auto len = bfs_length(map, start, goal);
  if (!len) {
    return std::nullopt;
  }
  int best = std::numeric_limits<int>::max();
  std::vector<GridIndex> path{start};
  std::set<GridIndex> on_path{start};
  std::function<void()> dfs = [&]() {
    const GridIndex c = path.back();
    const int left = static_cast<int>(*len) - static_cast<int>(path.size());
    if (std::abs(c.row - goal.row) + std::abs(c.col - goal.col) > left) {
      return;
    }
    if (c == goal) {
      if (path.size() == *len) {
        best = std::min(best, turns_of(path));
      }
      return;
    }
    for (Direction d : {Direction::kNorth, Direction::kEast, Direction::kSouth, Direction::kWest}) {
      const GridIndex n = neighbor(c, d);
      if (!map.in_bounds(n) || !map.is_free(n) || on_path.count(n) || !map.can_enter(n, opposite(d))) {
        continue;
      }
      path.push_back(n);
      on_path.insert(n);
      dfs();
      on_path.erase(n);
      path.pop_back();
    }
  };
  dfs();
  return best;
}

/// True when consecutive cells are 4-neighbors, free, and every entry is
/// allowed by the walls.
inline bool path_is_legal(const PlanningMap & map, const std::vector<GridIndex> & path)
{
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (!map.in_bounds(path[i]) || !map.is_free(path[i])) {
      return false;
    }
    if (i == 0) {
      continue;
    }
    const auto d = direction_between(path[i - 1], path[i]);
    if (!d || !map.can_enter(path[i], opposite(*d))) {
      return false;
    }
  }
  return true;
}

}  // namespace ogmnav::reference
