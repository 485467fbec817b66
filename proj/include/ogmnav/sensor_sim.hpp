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

// Multi-layer LiDAR simulation against a World of axis-aligned boxes plus the
// ground plane, scan filtering, and polar grid view (PGV) encoding.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "ogmnav/geometry.hpp"
#include "ogmnav/world.hpp"

namespace ogmnav
{

struct LidarConfig
{
  int n_layers{32};
  double fov_upper{deg2rad(10.0)};
  double fov_lower{deg2rad(-30.0)};
  double azimuth_resolution{deg2rad(1.0)};
  /// First azimuth column, sensor frame.
  double azimuth_start{-std::numbers::pi};
  double azimuth_span{2.0 * std::numbers::pi};
  double max_range{150.0};
  double mount_height{2.0};
  double unreflected_value{0.0};

  int n_columns() const;
  /// Elevation of layer k; layer 0 is the top beam, layers evenly spaced
  /// from fov_upper down to fov_lower inclusive.
  double layer_elevation(int layer) const;
  double column_azimuth(int column) const;
  bool full_circle() const;
  void validate() const;
};

enum class PointLabel : std::uint8_t { kGround, kStatic, kDynamic, kNone };

/// Beam return in the sensor frame (origin at the LiDAR, x forward, z up).
/// Unreflected beams store the unit beam direction in (x, y, z).
struct ScanPoint
{
  double x{0.0};
  double y{0.0};
  double z{0.0};
  PointLabel label{PointLabel::kNone};
  bool reflected{false};
};

/// One beam per (layer, azimuth column), layer-major order. Each beam reports
/// the nearest hit with an obstacle box or the ground within max_range.
std::vector<ScanPoint> raycast_scan(const World & world, const Pose2D & sensor_pose, const LidarConfig & config);

/// Keeps unreflected beams and reflected static points whose world height
/// (z + sensor_height) does not exceed height_threshold.
std::vector<ScanPoint> filter_scan(
  std::span<const ScanPoint> scan, double height_threshold, double sensor_height = 0.0);

/// Keeps points 0, k, 2k, ... Throws std::invalid_argument for k == 0.
std::vector<ScanPoint> downsample_scan(std::span<const ScanPoint> scan, std::size_t k);

struct PgvImage
{
  int rows{0};
  int cols{0};
  double unreflected_value{0.0};
  std::vector<double> depth;
  std::vector<int> contributors;

  double at(int row, int col) const { return depth[static_cast<std::size_t>(row) * cols + col]; }
  int count(int row, int col) const
  {
    return contributors[static_cast<std::size_t>(row) * cols + col];
  }
};

/// Row/column a sensor-frame polar direction falls into; false outside FoV.
bool pgv_bin(const PolarPoint & p, const LidarConfig & config, int & row, int & col);

/// Each reflected point goes to one pixel by elevation and azimuth; the pixel
/// holds the mean range of its contributors or unreflected_value.
PgvImage encode_pgv(std::span<const ScanPoint> scan, const LidarConfig & config);

/// 8-bit binary PGM, pixel = round(255 * depth / max_range), unreflected = 0.
std::vector<std::uint8_t> pgv_to_pgm(const PgvImage & image, double max_range);

void write_file(const std::filesystem::path & path, std::span<const std::uint8_t> bytes);

}  // namespace ogmnav
