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

#include "ogmnav/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "ogmnav/bicycle.hpp"

namespace ogmnav
{

namespace
{
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kBoundaryEps = 1e-9;
}  // namespace

double normalize_angle(double angle)
{
  double a = std::fmod(angle + std::numbers::pi, kTwoPi);
  if (a < 0.0) {
    a += kTwoPi;
  }
  a -= std::numbers::pi;
  // fmod rounding can land exactly on +pi.
  if (a >= std::numbers::pi) {
    a -= kTwoPi;
  }
  return a;
}

double angle_distance(double a, double b)
{
  double d = std::fabs(a - b);
  if (d > std::numbers::pi) {
    d = std::fmod(d, kTwoPi);
    if (d > std::numbers::pi) {
      d = kTwoPi - d;
    }
  }
  return d;
}

PolarPoint cart_to_polar(const Vec3 & p)
{
  PolarPoint out;
  out.rho = std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
  out.theta = normalize_angle(std::atan2(p.y, p.x));
  out.phi = out.rho > 0.0 ? std::asin(std::clamp(p.z / out.rho, -1.0, 1.0)) : 0.0;
  return out;
}

std::vector<PolarPoint> cart_to_polar(std::span<const Vec3> points)
{
  std::vector<PolarPoint> out;
  out.reserve(points.size());
  for (const auto & p : points) {
    out.push_back(cart_to_polar(p));
  }
  return out;
}

Vec3 polar_to_cart(const PolarPoint & p)
{
  const double horizontal = p.rho * std::cos(p.phi);
  return {horizontal * std::cos(p.theta), horizontal * std::sin(p.theta), p.rho * std::sin(p.phi)};
}

std::vector<Vec2> convex_hull(std::span<const Vec2> points)
{
  std::vector<Vec2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const Vec2 & a, const Vec2 & b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) {
    return pts;
  }

  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto & p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) {
      --k;
    }
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= 0.0) {
      --k;
    }
    hull[k++] = *it;
  }
  hull.resize(k - 1);
  return hull;
}

std::vector<GridIndex> rasterize_region(std::span<const Vec2> polygon, const GridGeometry & grid)
{
  std::vector<GridIndex> cells;
  if (polygon.empty() || grid.rows <= 0 || grid.cols <= 0) {
    return cells;
  }

  double ymin = polygon[0].y;
  double ymax = polygon[0].y;
  for (const auto & p : polygon) {
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  // Rows whose center y = row + 0.5 lies in [ymin, ymax].
  const int row_lo = std::max(0, static_cast<int>(std::ceil(ymin - 0.5 - kBoundaryEps)));
  const int row_hi = std::min(grid.rows - 1, static_cast<int>(std::floor(ymax - 0.5 + kBoundaryEps)));
  if (row_lo > row_hi) {
    return cells;
  }

  const int n_rows = row_hi - row_lo + 1;
  // Per-row interior crossings (even-odd, half-open on y) and boundary spans.
  std::vector<std::vector<double>> crossings(n_rows);
  std::vector<std::vector<std::pair<double, double>>> spans(n_rows);

  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 & a = polygon[i];
    const Vec2 & b = polygon[(i + 1) % n];
    const double lo = std::min(a.y, b.y);
    const double hi = std::max(a.y, b.y);
    const int r0 = std::max(row_lo, static_cast<int>(std::ceil(lo - 0.5 - kBoundaryEps)));
    const int r1 = std::min(row_hi, static_cast<int>(std::floor(hi - 0.5 + kBoundaryEps)));
    for (int r = r0; r <= r1; ++r) {
      const double y = r + 0.5;
      const int slot = r - row_lo;
      if (hi - lo <= kBoundaryEps) {
        spans[slot].emplace_back(std::min(a.x, b.x), std::max(a.x, b.x));
        continue;
      }
      const double t = std::clamp((y - a.y) / (b.y - a.y), 0.0, 1.0);
      const double x = a.x + t * (b.x - a.x);
      spans[slot].emplace_back(x, x);
      if ((a.y <= y) != (b.y <= y)) {
        crossings[slot].push_back(x);
      }
    }
  }

  for (int slot = 0; slot < n_rows; ++slot) {
    auto & xs = crossings[slot];
    std::sort(xs.begin(), xs.end());
    auto & row_spans = spans[slot];
    for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
      row_spans.emplace_back(xs[i], xs[i + 1]);
    }
    std::sort(row_spans.begin(), row_spans.end());

    const int row = row_lo + slot;
    int last_col = -1;
    for (const auto & [x0, x1] : row_spans) {
      int c0 = static_cast<int>(std::ceil(x0 - 0.5 - kBoundaryEps));
      const int c1 = std::min(grid.cols - 1, static_cast<int>(std::floor(x1 - 0.5 + kBoundaryEps)));
      c0 = std::max({c0, 0, last_col + 1});
      for (int c = c0; c <= c1; ++c) {
        cells.push_back({row, c});
      }
      last_col = std::max(last_col, c1);
    }
  }
  return cells;
}

std::vector<GridIndex> rasterize_convex(std::span<const Vec2> polygon, const GridGeometry & grid)
{
  std::vector<GridIndex> cells;
  if (polygon.empty() || grid.rows <= 0 || grid.cols <= 0) {
    return cells;
  }
  double ymin = polygon[0].y;
  double ymax = polygon[0].y;
  for (const auto & p : polygon) {
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const int row_lo = std::max(0, static_cast<int>(std::ceil(ymin - 0.5 - kBoundaryEps)));
  const int row_hi = std::min(grid.rows - 1, static_cast<int>(std::floor(ymax - 0.5 + kBoundaryEps)));
  if (row_lo > row_hi) {
    return cells;
  }

  // A convex region meets each row in one interval.
  const int n_rows = row_hi - row_lo + 1;
  std::vector<double> left(n_rows, std::numeric_limits<double>::infinity());
  std::vector<double> right(n_rows, -std::numeric_limits<double>::infinity());
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 & a = polygon[i];
    const Vec2 & b = polygon[(i + 1) % n];
    const double lo = std::min(a.y, b.y);
    const double hi = std::max(a.y, b.y);
    const int r0 = std::max(row_lo, static_cast<int>(std::ceil(lo - 0.5 - kBoundaryEps)));
    const int r1 = std::min(row_hi, static_cast<int>(std::floor(hi - 0.5 + kBoundaryEps)));
    for (int r = r0; r <= r1; ++r) {
      const int slot = r - row_lo;
      double x0 = 0.0;
      double x1 = 0.0;
      if (hi - lo <= kBoundaryEps) {
        x0 = std::min(a.x, b.x);
        x1 = std::max(a.x, b.x);
      } else {
        const double t = std::clamp((r + 0.5 - a.y) / (b.y - a.y), 0.0, 1.0);
        x0 = x1 = a.x + t * (b.x - a.x);
      }
      left[slot] = std::min(left[slot], x0);
      right[slot] = std::max(right[slot], x1);
    }
  }

  for (int slot = 0; slot < n_rows; ++slot) {
    if (left[slot] > right[slot]) {
      continue;
    }
    const int c0 = std::max(0, static_cast<int>(std::ceil(left[slot] - 0.5 - kBoundaryEps)));
    const int c1 = std::min(grid.cols - 1, static_cast<int>(std::floor(right[slot] - 0.5 + kBoundaryEps)));
    for (int c = c0; c <= c1; ++c) {
      cells.push_back({row_lo + slot, c});
    }
  }
  return cells;
}

Vec2 bezier_point(std::span<const Vec2> control_points, double t)
{
  // de Casteljau keeps every sample inside the control hull.
  std::vector<Vec2> work(control_points.begin(), control_points.end());
  for (std::size_t level = work.size(); level > 1; --level) {
    for (std::size_t i = 0; i + 1 < level; ++i) {
      work[i] = work[i] * (1.0 - t) + work[i + 1] * t;
    }
  }
  return work.front();
}

std::vector<Vec2> bezier_sample(std::span<const Vec2> control_points, int n_samples)
{
  if (control_points.size() < 2) {
    throw std::invalid_argument("bezier_sample: degenerate route, need at least 2 control points");
  }
  if (n_samples < 2) {
    throw std::invalid_argument("bezier_sample: n_samples must be >= 2");
  }
  std::vector<Vec2> out;
  out.reserve(static_cast<std::size_t>(n_samples));
  out.push_back(control_points.front());
  for (int i = 1; i + 1 < n_samples; ++i) {
    out.push_back(bezier_point(control_points, static_cast<double>(i) / (n_samples - 1)));
  }
  out.push_back(control_points.back());
  return out;
}

std::vector<Vec2> resample_polyline(std::span<const Vec2> polyline, double max_spacing)
{
  std::vector<Vec2> out;
  if (polyline.empty()) {
    return out;
  }
  double total = 0.0;
  for (std::size_t i = 1; i < polyline.size(); ++i) {
    total += distance(polyline[i - 1], polyline[i]);
  }
  if (total <= 0.0 || max_spacing <= 0.0) {
    out.push_back(polyline.front());
    return out;
  }
  const int n_steps = std::max(1, static_cast<int>(std::ceil(total / max_spacing)));
  const double spacing = total / n_steps;
  out.reserve(static_cast<std::size_t>(n_steps) + 1);
  out.push_back(polyline.front());

  std::size_t seg = 1;
  double seg_start = 0.0;
  for (int k = 1; k < n_steps; ++k) {
    const double s = k * spacing;
    while (seg + 1 < polyline.size() &&
           seg_start + distance(polyline[seg - 1], polyline[seg]) < s) {
      seg_start += distance(polyline[seg - 1], polyline[seg]);
      ++seg;
    }
    const double len = distance(polyline[seg - 1], polyline[seg]);
    const double t = len > 0.0 ? std::clamp((s - seg_start) / len, 0.0, 1.0) : 0.0;
    out.push_back(polyline[seg - 1] * (1.0 - t) + polyline[seg] * t);
  }
  out.push_back(polyline.back());
  return out;
}

bool rect_overlaps_box(
  const Pose2D & center, double half_length, double half_width, const Vec2 & box_center,
  const Vec2 & box_half_extents)
{
  const Vec2 u = center.heading();
  const Vec2 v{-u.y, u.x};
  const Vec2 d = box_center - center.position();

  // Box axes (world x and y).
  const double rect_on_x = std::fabs(u.x) * half_length + std::fabs(v.x) * half_width;
  const double rect_on_y = std::fabs(u.y) * half_length + std::fabs(v.y) * half_width;
  if (std::fabs(d.x) > box_half_extents.x + rect_on_x) {
    return false;
  }
  if (std::fabs(d.y) > box_half_extents.y + rect_on_y) {
    return false;
  }
  // Rectangle axes.
  const double box_on_u = std::fabs(u.x) * box_half_extents.x + std::fabs(u.y) * box_half_extents.y;
  const double box_on_v = std::fabs(v.x) * box_half_extents.x + std::fabs(v.y) * box_half_extents.y;
  if (std::fabs(dot(d, u)) > half_length + box_on_u) {
    return false;
  }
  if (std::fabs(dot(d, v)) > half_width + box_on_v) {
    return false;
  }
  return true;
}

Pose2D bicycle_step(const Pose2D & pose, double speed, double steering, double wheelbase, double dt)
{
  Pose2D next;
  next.x = pose.x + speed * std::cos(pose.yaw) * dt;
  next.y = pose.y + speed * std::sin(pose.yaw) * dt;
  next.yaw = normalize_angle(pose.yaw + speed * std::tan(steering) / wheelbase * dt);
  return next;
}

std::vector<Pose2D> bicycle_predict(const VehicleState & state, const BicycleParams & params)
{
  if (params.wheelbase <= 0.0) {
    throw std::invalid_argument("bicycle_predict: wheelbase must be positive");
  }
  if (params.n_states < 2) {
    throw std::invalid_argument("bicycle_predict: n_states must be >= 2");
  }
  const double steering = std::clamp(state.steering, -params.max_steer, params.max_steer);
  const double dt = params.horizon / (params.n_states - 1);

  std::vector<Pose2D> states;
  states.reserve(static_cast<std::size_t>(params.n_states));
  Pose2D pose = state.pose;
  pose.yaw = normalize_angle(pose.yaw);
  states.push_back(pose);
  for (int k = 1; k < params.n_states; ++k) {
    pose = bicycle_step(pose, state.speed, steering, params.wheelbase, dt);
    states.push_back(pose);
  }
  return states;
}

}  // namespace ogmnav
