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

#include "ogmnav/ogm.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ogmnav
{

void OgmParams::validate() const
{
  if (!(resolution > 0.0) || side < 4) {
    throw std::invalid_argument("OgmParams: resolution must be positive and side >= 4");
  }
  if (!(log_odd_occ > 0.0) || !(log_odd_free > 0.0)) {
    throw std::invalid_argument("OgmParams: log-odds increments must be positive");
  }
  if (!(wall_depth > 0.0) || !(beam_width > 0.0) || !(log_clamp > 0.0)) {
    throw std::invalid_argument("OgmParams: wall_depth, beam_width and log_clamp must be positive");
  }
  if (!(speed_ref > 0.0) || radius_fraction < 0.0 || radius_fraction >= 0.5) {
    throw std::invalid_argument("OgmParams: position circle must stay inside the map");
  }
}

OccupancyGrid::OccupancyGrid(const OgmParams & params) : params_(params)
{
  params_.validate();
  cells_.assign(static_cast<std::size_t>(params_.side) * params_.side, 0.0);
  const Vec2 c = position_circle_point(0.0, 0.0, params_);
  local_ = {c.x, c.y, 0.0};
}

double OccupancyGrid::log_odds(const GridIndex & cell) const
{
  if (!in_bounds(cell)) {
    throw std::out_of_range(
      "OccupancyGrid: cell (" + std::to_string(cell.row) + ", " + std::to_string(cell.col) + ") out of bounds");
  }
  return cells_[index(cell)];
}

void OccupancyGrid::set_log_odds(const GridIndex & cell, double value)
{
  if (!in_bounds(cell)) {
    throw std::out_of_range("OccupancyGrid: cell out of bounds");
  }
  cells_[index(cell)] = std::clamp(value, -params_.log_clamp, params_.log_clamp);
}

void OccupancyGrid::add_log_odds(const GridIndex & cell, double delta)
{
  set_log_odds(cell, log_odds(cell) + delta);
}

Vec2 OccupancyGrid::world_to_local(const Vec2 & world) const
{
  return local_.position() + (world - anchor_.position()) / params_.resolution;
}

Vec2 OccupancyGrid::local_to_world(const Vec2 & local) const
{
  return anchor_.position() + (local - local_.position()) * params_.resolution;
}

std::optional<GridIndex> OccupancyGrid::cell_at(const Vec2 & local) const
{
  const GridIndex cell{static_cast<int>(std::floor(local.y)), static_cast<int>(std::floor(local.x))};
  if (!in_bounds(cell)) {
    return std::nullopt;
  }
  return cell;
}

void OccupancyGrid::shift(int dx, int dy)
{
  if (dx == 0 && dy == 0) {
    return;
  }
  const int n = params_.side;
  if (std::abs(dx) >= n || std::abs(dy) >= n) {
    clear();
    return;
  }
  std::vector<double> next(cells_.size(), 0.0);
  for (int row = 0; row < n; ++row) {
    const int src_row = row + dy;
    if (src_row < 0 || src_row >= n) {
      continue;
    }
    const int col_lo = std::max(0, -dx);
    const int col_hi = std::min(n, n - dx);
    if (col_lo >= col_hi) {
      continue;
    }
    const double * src = &cells_[static_cast<std::size_t>(src_row) * n + col_lo + dx];
    std::copy(src, src + (col_hi - col_lo), &next[static_cast<std::size_t>(row) * n + col_lo]);
  }
  cells_.swap(next);
}

void OccupancyGrid::clear() { std::fill(cells_.begin(), cells_.end(), 0.0); }

struct GridAccess
{
  static void set_pose(OccupancyGrid & grid, const LocalPose & local, const Pose2D & anchor)
  {
    grid.local_ = local;
    grid.anchor_ = anchor;
    grid.anchored_ = true;
  }
  static std::vector<double> & cells(OccupancyGrid & grid) { return grid.cells_; }
};

double position_circle_radius(double speed, const OgmParams & params)
{
  const double s = std::max(0.0, speed);
  return params.r_max() * std::min(s / params.speed_ref, 1.0);
}

Vec2 position_circle_point(double speed, double yaw, const OgmParams & params)
{
  const double half = params.side / 2.0;
  const double r = position_circle_radius(speed, params);
  return {half - r * std::cos(yaw), half - r * std::sin(yaw)};
}

PositionUpdate position_circle(OccupancyGrid & grid, double speed, const Pose2D & world_pose)
{
  const OgmParams & params = grid.params();
  const Vec2 circle = position_circle_point(speed, world_pose.yaw, params);
  const double yaw = normalize_angle(world_pose.yaw);

  PositionUpdate result;
  if (!grid.anchored()) {
    GridAccess::set_pose(grid, {circle.x, circle.y, yaw}, world_pose);
    result.initialized = true;
    return result;
  }

  const Vec2 motion = (world_pose.position() - grid.world_anchor().position()) / params.resolution;
  const Vec2 shift = motion + grid.local_pose().position() - circle;
  const double fx = std::floor(shift.x);
  const double fy = std::floor(shift.y);

  if (shift.norm() >= params.side) {
    grid.clear();
    result.reset = true;
  } else {
    result.shift_x = static_cast<int>(fx);
    result.shift_y = static_cast<int>(fy);
    grid.shift(result.shift_x, result.shift_y);
  }
  GridAccess::set_pose(grid, {circle.x + (shift.x - fx), circle.y + (shift.y - fy), yaw}, world_pose);
  return result;
}

namespace
{

void finish_points(PreparedScan & scan, const OccupancyGrid & grid)
{
  const double wall = grid.params().wall_depth / grid.resolution();
  scan.angles.resize(scan.points.size());
  scan.distances.resize(scan.points.size());
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    Vec2 & p = scan.points[i];
    const double angle = std::atan2(p.y - scan.origin.y, p.x - scan.origin.x);
    p.x += wall * std::cos(angle);
    p.y += wall * std::sin(angle);
    const double dx = p.x - scan.origin.x;
    const double dy = p.y - scan.origin.y;
    scan.angles[i] = angle;
    scan.distances[i] = std::sqrt(dx * dx + dy * dy);
  }
}

// Beam lookup sorted by angle; ties keep the original scan order so that the
// nearest-beam choice matches a first-index argmin.
class BeamIndex
{
public:
  explicit BeamIndex(const PreparedScan & scan) : scan_(scan)
  {
    order_.resize(scan.angles.size());
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return scan.angles[a] < scan.angles[b];
    });
    sorted_.resize(order_.size());
    for (std::size_t i = 0; i < order_.size(); ++i) {
      sorted_[i] = scan.angles[order_[i]];
    }
  }

  // Minimum distance over beams strictly within half_width of angle, or a
  // negative value when there is none.
  double min_distance_within(double angle, double half_width) const
  {
    constexpr double kPad = 1e-9;
    double best = -1.0;
    auto scan_range = [&](double lo, double hi) {
      auto first = std::lower_bound(sorted_.begin(), sorted_.end(), lo);
      for (auto it = first; it != sorted_.end() && *it <= hi; ++it) {
        const std::size_t beam = order_[static_cast<std::size_t>(it - sorted_.begin())];
        if (angle_distance(angle, scan_.angles[beam]) < half_width) {
          const double d = scan_.distances[beam];
          if (best < 0.0 || d < best) {
            best = d;
          }
        }
      }
    };
    const double lo = angle - half_width - kPad;
    const double hi = angle + half_width + kPad;
    const double two_pi = 2.0 * std::numbers::pi;
    scan_range(lo, hi);
    if (lo < -std::numbers::pi) {
      scan_range(lo + two_pi, std::numbers::pi + kPad);
    }
    if (hi > std::numbers::pi - kPad) {
      scan_range(-std::numbers::pi - kPad, hi - two_pi);
    }
    return best;
  }

  // Beam with the smallest angular distance; ties resolve to the lowest
  // original index.
  std::size_t nearest(double angle) const
  {
    const std::size_t n = sorted_.size();
    const auto pos = static_cast<std::size_t>(std::lower_bound(sorted_.begin(), sorted_.end(), angle) - sorted_.begin());
    const std::size_t above = pos % n;
    const std::size_t below = (pos + n - 1) % n;

    auto group_first = [&](std::size_t i) {
      // Lowest original index among beams sharing this exact angle.
      std::size_t j = i;
      while (j > 0 && sorted_[j - 1] == sorted_[i]) {
        --j;
      }
      return order_[j];
    };
    const std::size_t a = group_first(above);
    const std::size_t b = group_first(below);
    const double da = angle_distance(angle, scan_.angles[a]);
    const double db = angle_distance(angle, scan_.angles[b]);
    if (da < db) {
      return a;
    }
    if (db < da) {
      return b;
    }
    return std::min(a, b);
  }

private:
  const PreparedScan & scan_;
  std::vector<std::size_t> order_;
  std::vector<double> sorted_;
};

}  // namespace

PreparedScan prepare_points(const OccupancyGrid & grid, std::span<const Vec2> sensor_points)
{
  PreparedScan scan;
  const LocalPose & local = grid.local_pose();
  scan.origin = local.position();
  const double c = std::cos(local.yaw);
  const double s = std::sin(local.yaw);
  const double inv_res = 1.0 / grid.resolution();
  scan.points.reserve(sensor_points.size());
  for (const auto & p : sensor_points) {
    scan.points.push_back({scan.origin.x + (c * p.x - s * p.y) * inv_res, scan.origin.y + (s * p.x + c * p.y) * inv_res});
  }
  finish_points(scan, grid);
  return scan;
}

PreparedScan prepare_scan(const OccupancyGrid & grid, std::span<const ScanPoint> filtered)
{
  std::vector<Vec2> points;
  points.reserve(filtered.size());
  for (const auto & p : filtered) {
    if (p.reflected) {
      points.push_back({p.x, p.y});
    }
  }
  return prepare_points(grid, points);
}

namespace
{

std::vector<std::size_t> angle_order(const PreparedScan & scan)
{
  std::vector<std::size_t> order(scan.points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scan.angles[a] < scan.angles[b];
  });
  return order;
}

// Star polygon through the points in angle order. Closes through the sensor
// across the widest angular gap when the points do not surround it.
std::vector<Vec2> star_polygon(const PreparedScan & scan, const std::vector<std::size_t> & order)
{
  const std::size_t n = order.size();
  std::size_t gap_after = n - 1;
  double widest = scan.angles[order.front()] + 2.0 * std::numbers::pi - scan.angles[order.back()];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double gap = scan.angles[order[i + 1]] - scan.angles[order[i]];
    if (gap > widest) {
      widest = gap;
      gap_after = i;
    }
  }
  std::vector<Vec2> polygon;
  polygon.reserve(n + 1);
  for (std::size_t k = 1; k <= n; ++k) {
    polygon.push_back(scan.points[order[(gap_after + k) % n]]);
  }
  if (widest >= std::numbers::pi || n < 3) {
    polygon.push_back(scan.origin);
  }
  return polygon;
}

// Graham pass over a polygon that is star-shaped around the sensor and
// already in counter-clockwise order, so no second sort is needed.
std::vector<Vec2> star_hull(std::vector<Vec2> ring)
{
  if (ring.size() < 3) {
    return ring;
  }
  std::size_t first = 0;
  for (std::size_t i = 1; i < ring.size(); ++i) {
    if (ring[i].y < ring[first].y || (ring[i].y == ring[first].y && ring[i].x < ring[first].x)) {
      first = i;
    }
  }
  std::rotate(ring.begin(), ring.begin() + static_cast<std::ptrdiff_t>(first), ring.end());
  std::vector<Vec2> hull;
  hull.reserve(64);
  for (const auto & p : ring) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0.0) {
      hull.pop_back();
    }
    hull.push_back(p);
  }
  while (hull.size() >= 3 && cross(hull[hull.size() - 2], hull.back(), hull.front()) <= 0.0) {
    hull.pop_back();
  }
  return hull;
}

}  // namespace

std::vector<Vec2> affected_region(const PreparedScan & scan, AreaMode mode)
{
  if (scan.points.empty()) {
    return {};
  }
  std::vector<Vec2> ring = star_polygon(scan, angle_order(scan));
  if (mode == AreaMode::kPolygon) {
    return ring;
  }
  return star_hull(std::move(ring));
}

std::vector<GridIndex> affected_area(const PreparedScan & scan, AreaMode mode, const GridGeometry & grid)
{
  const std::vector<Vec2> region = affected_region(scan, mode);
  return mode == AreaMode::kConvexHull ? rasterize_convex(region, grid) : rasterize_region(region, grid);
}

UpdateStats apply_scan(OccupancyGrid & grid, const PreparedScan & scan, AreaMode mode, std::vector<CellOutcome> * outcomes)
{
  UpdateStats stats;
  stats.n_points = scan.points.size();
  if (outcomes != nullptr) {
    outcomes->clear();
  }
  if (scan.points.empty()) {
    return stats;
  }

  const OgmParams & params = grid.params();
  const std::vector<GridIndex> area = affected_area(scan, mode, grid.geometry());
  stats.affected_cells = area.size();
  if (outcomes != nullptr) {
    outcomes->reserve(area.size());
  }

  const BeamIndex beams(scan);
  const double half_width = params.beam_width / 2.0;
  const double wall = params.wall_depth / params.resolution;
  std::vector<double> & cells = GridAccess::cells(grid);
  const double clamp = params.log_clamp;

  for (const auto & cell : area) {
    const double dx = cell.col + 0.5 - scan.origin.x;
    const double dy = cell.row + 0.5 - scan.origin.y;
    const double cell_dist = std::sqrt(dx * dx + dy * dy);
    const double cell_angle = std::atan2(dy, dx);

    CellBranch branch = CellBranch::kNone;
    const double scan_dist = beams.min_distance_within(cell_angle, half_width);
    if (scan_dist >= 0.0) {
      if (cell_dist < scan_dist - wall) {
        branch = CellBranch::kFree;
      } else if (cell_dist <= scan_dist) {
        branch = CellBranch::kOccupied;
      }
    } else {
      const std::size_t nearest = beams.nearest(cell_angle);
      if (cell_dist < scan.distances[nearest]) {
        branch = CellBranch::kGapFree;
      }
    }

    double & value = cells[static_cast<std::size_t>(cell.row) * params.side + cell.col];
    switch (branch) {
      case CellBranch::kFree:
      case CellBranch::kGapFree:
        value = std::max(-clamp, value - params.log_odd_free);
        break;
      case CellBranch::kOccupied:
        value = std::min(clamp, value + params.log_odd_occ);
        break;
      case CellBranch::kNone:
        break;
    }
    if (branch != CellBranch::kNone) {
      ++stats.updated_cells;
    }
    if (branch == CellBranch::kGapFree) {
      ++stats.gap_cells;
    }
    if (outcomes != nullptr) {
      outcomes->push_back({cell, branch});
    }
  }
  return stats;
}

UpdateStats update(OccupancyGrid & grid, std::span<const ScanPoint> filtered, const Pose2D & world_pose, double speed)
{
  position_circle(grid, speed, world_pose);
  const PreparedScan scan = prepare_scan(grid, filtered);
  return apply_scan(grid, scan, grid.params().area_mode);
}

double occupancy_probability(const OccupancyGrid & grid, const GridIndex & cell)
{
  return 1.0 / (1.0 + std::exp(-grid.log_odds(cell)));
}

double logit(double probability) { return std::log(probability / (1.0 - probability)); }

int slice_occupied_count(const OccupancyGrid & grid, const Vec2 & local_point, double slice_width, double p_occ)
{
  const double half = slice_width / grid.resolution() / 2.0;
  const int n = grid.side();
  const int c_lo = std::max(0, static_cast<int>(std::ceil(local_point.x - half - 0.5)));
  const int c_hi = std::min(n - 1, static_cast<int>(std::ceil(local_point.x + half - 0.5)) - 1);
  const int r_lo = std::max(0, static_cast<int>(std::ceil(local_point.y - half - 0.5)));
  const int r_hi = std::min(n - 1, static_cast<int>(std::ceil(local_point.y + half - 0.5)) - 1);
  const double threshold = logit(p_occ);
  const auto values = grid.cells();
  int count = 0;
  for (int r = r_lo; r <= r_hi; ++r) {
    for (int c = c_lo; c <= c_hi; ++c) {
      if (values[static_cast<std::size_t>(r) * n + c] > threshold) {
        ++count;
      }
    }
  }
  return count;
}

std::vector<std::uint8_t> export_map_image(const OccupancyGrid & grid)
{
  const int n = grid.side();
  const std::string header = "P5\n" + std::to_string(n) + " " + std::to_string(n) + "\n255\n";
  std::vector<std::uint8_t> bytes(header.begin(), header.end());
  bytes.reserve(bytes.size() + static_cast<std::size_t>(n) * n);
  const auto values = grid.cells();
  for (int row = n - 1; row >= 0; --row) {
    for (int col = 0; col < n; ++col) {
      const double p = 1.0 / (1.0 + std::exp(-values[static_cast<std::size_t>(row) * n + col]));
      bytes.push_back(static_cast<std::uint8_t>(std::floor(255.0 * p + 0.5)));
    }
  }
  return bytes;
}

namespace
{

void push_f32_le(std::vector<std::uint8_t> & out, double value)
{
  const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(value));
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<std::uint8_t>((bits >> (8 * i)) & 0xFFu));
  }
}

}  // namespace

std::vector<std::uint8_t> export_raw_dump(const OccupancyGrid & grid)
{
  std::vector<std::uint8_t> out;
  const auto & params = grid.params();
  out.reserve(4 * (8 + grid.cells().size()));
  push_f32_le(out, grid.side());
  push_f32_le(out, params.resolution);
  push_f32_le(out, grid.local_pose().x);
  push_f32_le(out, grid.local_pose().y);
  push_f32_le(out, grid.local_pose().yaw);
  push_f32_le(out, params.log_clamp);
  push_f32_le(out, params.log_odd_occ);
  push_f32_le(out, params.log_odd_free);
  for (double v : grid.cells()) {
    push_f32_le(out, v);
  }
  return out;
}

}  // namespace ogmnav
