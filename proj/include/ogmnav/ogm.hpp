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

// Log-odds occupancy grid updated from full scans at once, with the vehicle
// placed on a speed-dependent circle inside a square, never-rotated map.
//
// All map-frame quantities are in continuous cell units (see geometry.hpp);
// the grid axes stay aligned with the world axes. Cell (row, col) is stored
// row-major with row 0 at the south edge.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ogmnav/geometry.hpp"
#include "ogmnav/sensor_sim.hpp"

namespace ogmnav
{

enum class AreaMode { kConvexHull, kPolygon };

struct OgmParams
{
  double resolution{0.5};
  int side{160};
  double log_odd_occ{0.9};
  double log_odd_free{0.7};
  /// Assumed obstacle thickness behind each reflected point, meters.
  double wall_depth{1.0};
  /// Beam width angle, radians.
  double beam_width{deg2rad(2.0)};
  double log_clamp{10.0};
  AreaMode area_mode{AreaMode::kConvexHull};
  /// Position circle: radius = r_max * min(speed / speed_ref, 1) with
  /// r_max = side * radius_fraction cells.
  double speed_ref{20.0};
  double radius_fraction{0.25};

  double r_max() const { return side * radius_fraction; }
  void validate() const;
};

/// Vehicle pose inside the grid: continuous cell coordinates plus world yaw.
struct LocalPose
{
  double x{0.0};
  double y{0.0};
  double yaw{0.0};

  Vec2 position() const { return {x, y}; }
};

class OccupancyGrid
{
public:
  explicit OccupancyGrid(const OgmParams & params = {});

  const OgmParams & params() const { return params_; }
  void set_area_mode(AreaMode mode) { params_.area_mode = mode; }
  int side() const { return params_.side; }
  double resolution() const { return params_.resolution; }
  GridGeometry geometry() const { return {params_.side, params_.side}; }

  bool in_bounds(const GridIndex & cell) const
  {
    return cell.row >= 0 && cell.col >= 0 && cell.row < params_.side && cell.col < params_.side;
  }

  /// Throws std::out_of_range outside the grid.
  double log_odds(const GridIndex & cell) const;
  /// Stores a clamped value. Throws std::out_of_range outside the grid.
  void set_log_odds(const GridIndex & cell, double value);
  void add_log_odds(const GridIndex & cell, double delta);
  std::span<const double> cells() const { return cells_; }

  const LocalPose & local_pose() const { return local_; }
  const Pose2D & world_anchor() const { return anchor_; }
  bool anchored() const { return anchored_; }

  Vec2 world_to_local(const Vec2 & world) const;
  Vec2 local_to_world(const Vec2 & local) const;
  /// Cell containing a local continuous point, nullopt outside.
  std::optional<GridIndex> cell_at(const Vec2 & local) const;

  /// Moves content so that new(row, col) = old(row + dy, col + dx); exposed
  /// cells become 0 (no information).
  void shift(int dx, int dy);
  void clear();

private:
  friend struct GridAccess;
  std::size_t index(const GridIndex & cell) const
  {
    return static_cast<std::size_t>(cell.row) * params_.side + cell.col;
  }

  OgmParams params_;
  std::vector<double> cells_;
  LocalPose local_;
  Pose2D anchor_;
  bool anchored_{false};
};

/// Radius (cells) of the position circle for a speed in m/s.
double position_circle_radius(double speed, const OgmParams & params);

/// Vehicle placement on the circle: map center minus radius along the heading.
Vec2 position_circle_point(double speed, double yaw, const OgmParams & params);

struct PositionUpdate
{
  int shift_x{0};
  int shift_y{0};
  bool reset{false};
  bool initialized{false};
};

/// Compensates vehicle motion since the previous call with integer map
/// shifts and moves the vehicle inside the map by the fractional remainder.
/// The first call anchors the grid without shifting.
PositionUpdate position_circle(OccupancyGrid & grid, double speed, const Pose2D & world_pose);

/// Scan points expressed in the map frame, extended by the wall depth along
/// their beams, with per-point beam angle and distance from the vehicle.
struct PreparedScan
{
  Vec2 origin;
  std::vector<Vec2> points;
  std::vector<double> angles;
  std::vector<double> distances;
};

PreparedScan prepare_scan(const OccupancyGrid & grid, std::span<const ScanPoint> filtered);

/// Map-frame points from sensor-frame (x, y) pairs in meters; exposed for
/// tests that drive the inverse sensor model with synthetic points.
PreparedScan prepare_points(const OccupancyGrid & grid, std::span<const Vec2> sensor_points);

/// Boundary of the region a full scan may update: the convex hull of the
/// extended points and the sensor, or their star-shaped bounding polygon in
/// beam-angle order.
std::vector<Vec2> affected_region(const PreparedScan & scan, AreaMode mode);
std::vector<GridIndex> affected_area(const PreparedScan & scan, AreaMode mode, const GridGeometry & grid);

enum class CellBranch : std::uint8_t { kNone, kFree, kOccupied, kGapFree };

struct CellOutcome
{
  GridIndex cell;
  CellBranch branch;
};

struct UpdateStats
{
  std::size_t n_points{0};
  std::size_t affected_cells{0};
  std::size_t updated_cells{0};
  std::size_t gap_cells{0};
};

/// Applies the inverse sensor model to every affected cell. When outcomes is
/// given, it receives the branch taken for each affected cell.
UpdateStats apply_scan(
  OccupancyGrid & grid, const PreparedScan & scan, AreaMode mode, std::vector<CellOutcome> * outcomes = nullptr);

/// Full update: position circle, then the inverse sensor model over the
/// reflected points of an already filtered scan. An empty scan only moves
/// the map.
UpdateStats update(
  OccupancyGrid & grid, std::span<const ScanPoint> filtered, const Pose2D & world_pose, double speed);

/// Logistic transform of the cell's log-odds. Throws std::out_of_range.
double occupancy_probability(const OccupancyGrid & grid, const GridIndex & cell);

double logit(double probability);

/// Cells with occupancy probability above p_occ inside the slice_width x
/// slice_width (meters) window centered at a local point; the window covers
/// cell centers in [p - h, p + h) and is clipped at the map edges.
int slice_occupied_count(const OccupancyGrid & grid, const Vec2 & local_point, double slice_width, double p_occ);

/// 8-bit binary PGM, one pixel per cell, round(255 * p), row 0 = north.
std::vector<std::uint8_t> export_map_image(const OccupancyGrid & grid);

/// Little-endian float32 dump: 8 header values (side, resolution, local x,
/// local y, local yaw, clamp, occ, free) followed by row-major log-odds
/// (storage order, row 0 = south).
std::vector<std::uint8_t> export_raw_dump(const OccupancyGrid & grid);

}  // namespace ogmnav
