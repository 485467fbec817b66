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

// Shared 2D/3D geometry used by every other module.
//
// World frame: x east, y north, yaw counter-clockwise from +x, radians.
// Grid-local continuous coordinates: x along columns, y along rows; cell
// (row, col) covers [col, col + 1) x [row, row + 1) and has its center at
// (col + 0.5, row + 0.5).

#include <cmath>
#include <compare>
#include <numbers>
#include <span>
#include <vector>

namespace ogmnav
{

struct Vec2
{
  double x{0.0};
  double y{0.0};

  constexpr Vec2 operator+(const Vec2 & o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2 & o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Vec2 & operator+=(const Vec2 & o)
  {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr bool operator==(const Vec2 &) const = default;

  double norm() const { return std::sqrt(x * x + y * y); }
};

struct Vec3
{
  double x{0.0};
  double y{0.0};
  double z{0.0};
};

constexpr double dot(const Vec2 & a, const Vec2 & b) { return a.x * b.x + a.y * b.y; }

/// z-component of a x b; positive when b is counter-clockwise from a.
constexpr double cross(const Vec2 & a, const Vec2 & b) { return a.x * b.y - a.y * b.x; }

/// Orientation of the triangle (o, a, b).
constexpr double cross(const Vec2 & o, const Vec2 & a, const Vec2 & b)
{
  return cross(a - o, b - o);
}

inline double distance(const Vec2 & a, const Vec2 & b) { return (a - b).norm(); }

inline Vec2 rotate(const Vec2 & v, double angle)
{
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/// Wraps an angle into [-pi, pi).
double normalize_angle(double angle);

/// Smallest absolute difference between two angles, in [0, pi].
double angle_distance(double a, double b);

constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

struct Pose2D
{
  double x{0.0};
  double y{0.0};
  double yaw{0.0};

  Vec2 position() const { return {x, y}; }
  Vec2 heading() const { return {std::cos(yaw), std::sin(yaw)}; }
};

struct PolarPoint
{
  double rho{0.0};
  double theta{0.0};
  double phi{0.0};
};

struct GridIndex
{
  int row{0};
  int col{0};

  constexpr auto operator<=>(const GridIndex &) const = default;
};

std::vector<PolarPoint> cart_to_polar(std::span<const Vec3> points);
PolarPoint cart_to_polar(const Vec3 & point);
Vec3 polar_to_cart(const PolarPoint & point);

/// Counter-clockwise convex hull (monotone chain). Collinear points on the
/// boundary are dropped; two distinct inputs yield a segment, one a point.
std::vector<Vec2> convex_hull(std::span<const Vec2> points);

struct GridGeometry
{
  int rows{0};
  int cols{0};
};

/// Cells whose centers are inside the (possibly non-convex) polygon or on its
/// boundary, clipped to the grid. Even-odd rule for self-intersections.
/// The output is sorted by (row, col) and duplicate free.
std::vector<GridIndex> rasterize_region(std::span<const Vec2> polygon, const GridGeometry & grid);

/// Same cells as rasterize_region for a convex polygon, one span per row.
std::vector<GridIndex> rasterize_convex(std::span<const Vec2> polygon, const GridGeometry & grid);

/// Evaluates the single Bezier curve of degree control_points.size() - 1 at
/// n_samples uniformly spaced parameters in [0, 1]. Throws
/// std::invalid_argument for fewer than two control points or samples.
std::vector<Vec2> bezier_sample(std::span<const Vec2> control_points, int n_samples);

Vec2 bezier_point(std::span<const Vec2> control_points, double t);

/// Resamples a polyline at constant arc-length spacing, keeping both ends.
std::vector<Vec2> resample_polyline(std::span<const Vec2> polyline, double max_spacing);

/// Oriented rectangle vs axis-aligned box overlap test (separating axes).
bool rect_overlaps_box(
  const Pose2D & center, double half_length, double half_width, const Vec2 & box_center,
  const Vec2 & box_half_extents);

}  // namespace ogmnav
