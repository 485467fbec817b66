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

#include "ogmnav/sensor_sim.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>

namespace ogmnav
{

int LidarConfig::n_columns() const
{
  return std::max(1, static_cast<int>(std::ceil(azimuth_span / azimuth_resolution - 1e-9)));
}

double LidarConfig::layer_elevation(int layer) const
{
  if (n_layers == 1) {
    return fov_upper;
  }
  return fov_upper - layer * (fov_upper - fov_lower) / (n_layers - 1);
}

double LidarConfig::column_azimuth(int column) const
{
  return normalize_angle(azimuth_start + column * azimuth_resolution);
}

bool LidarConfig::full_circle() const
{
  return azimuth_span >= 2.0 * std::numbers::pi - 1e-9;
}

void LidarConfig::validate() const
{
  if (n_layers < 1) {
    throw std::invalid_argument("LidarConfig: n_layers must be >= 1");
  }
  if (!(fov_lower < fov_upper)) {
    throw std::invalid_argument("LidarConfig: fov_lower must be below fov_upper");
  }
  if (!(max_range > 0.0) || !(azimuth_resolution > 0.0) || !(azimuth_span > 0.0)) {
    throw std::invalid_argument("LidarConfig: range, resolution and span must be positive");
  }
}

namespace
{

struct Candidate
{
  const Box * box;
  double center_angle;
  double half_span;
};

// Slab test; returns the entry distance or +inf. The sensor is never inside a
// box in practice, a ray starting inside reports no hit.
double ray_box(const Vec3 & origin, const Vec3 & dir, const Box & box)
{
  const double lo[3] = {box.center.x - box.half_extents.x, box.center.y - box.half_extents.y, 0.0};
  const double hi[3] = {box.center.x + box.half_extents.x, box.center.y + box.half_extents.y, box.height};
  const double o[3] = {origin.x, origin.y, origin.z};
  const double d[3] = {dir.x, dir.y, dir.z};
  double t_near = -std::numeric_limits<double>::infinity();
  double t_far = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 3; ++axis) {
    if (std::fabs(d[axis]) < 1e-15) {
      if (o[axis] < lo[axis] || o[axis] > hi[axis]) {
        return std::numeric_limits<double>::infinity();
      }
      continue;
    }
    double t0 = (lo[axis] - o[axis]) / d[axis];
    double t1 = (hi[axis] - o[axis]) / d[axis];
    if (t0 > t1) {
      std::swap(t0, t1);
    }
    t_near = std::max(t_near, t0);
    t_far = std::min(t_far, t1);
    if (t_near > t_far) {
      return std::numeric_limits<double>::infinity();
    }
  }
  if (t_near < 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return t_near;
}

double rect_distance(const Vec2 & p, const Box & box)
{
  const double dx = std::max(0.0, std::fabs(p.x - box.center.x) - box.half_extents.x);
  const double dy = std::max(0.0, std::fabs(p.y - box.center.y) - box.half_extents.y);
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

std::vector<ScanPoint> raycast_scan(const World & world, const Pose2D & sensor_pose, const LidarConfig & config)
{
  config.validate();
  const Vec2 origin2{sensor_pose.x, sensor_pose.y};
  const Vec3 origin{sensor_pose.x, sensor_pose.y, config.mount_height};

  std::vector<Candidate> candidates;
  candidates.reserve(world.obstacles.size());
  for (const auto & box : world.obstacles) {
    const double d = rect_distance(origin2, box);
    if (d > config.max_range) {
      continue;
    }
    if (d <= 0.0) {
      // Sensor above the footprint: every column may hit it.
      candidates.push_back({&box, 0.0, std::numbers::pi});
      continue;
    }
    const double center_angle = std::atan2(box.center.y - origin2.y, box.center.x - origin2.x);
    double half_span = 0.0;
    for (int sx = -1; sx <= 1; sx += 2) {
      for (int sy = -1; sy <= 1; sy += 2) {
        const Vec2 corner{box.center.x + sx * box.half_extents.x, box.center.y + sy * box.half_extents.y};
        const double a = std::atan2(corner.y - origin2.y, corner.x - origin2.x);
        half_span = std::max(half_span, angle_distance(a, center_angle));
      }
    }
    candidates.push_back({&box, center_angle, half_span});
  }

  const int n_cols = config.n_columns();
  std::vector<std::vector<const Box *>> per_column(static_cast<std::size_t>(n_cols));
  const double margin = 1e-9;
  for (int c = 0; c < n_cols; ++c) {
    const double world_azimuth = config.column_azimuth(c) + sensor_pose.yaw;
    for (const auto & cand : candidates) {
      if (angle_distance(world_azimuth, cand.center_angle) <= cand.half_span + margin) {
        per_column[static_cast<std::size_t>(c)].push_back(cand.box);
      }
    }
  }

  std::vector<ScanPoint> scan;
  scan.reserve(static_cast<std::size_t>(config.n_layers) * n_cols);
  for (int layer = 0; layer < config.n_layers; ++layer) {
    const double phi = config.layer_elevation(layer);
    const double cos_phi = std::cos(phi);
    const double sin_phi = std::sin(phi);
    for (int c = 0; c < n_cols; ++c) {
      const double theta = config.column_azimuth(c);
      const double world_azimuth = theta + sensor_pose.yaw;
      const Vec3 dir{cos_phi * std::cos(world_azimuth), cos_phi * std::sin(world_azimuth), sin_phi};

      double best_t = std::numeric_limits<double>::infinity();
      PointLabel label = PointLabel::kNone;
      if (sin_phi < 0.0) {
        best_t = config.mount_height / -sin_phi;
        label = PointLabel::kGround;
      }
      for (const Box * box : per_column[static_cast<std::size_t>(c)]) {
        const double t = ray_box(origin, dir, *box);
        if (t < best_t) {
          best_t = t;
          label = box->label == ObstacleLabel::kStatic ? PointLabel::kStatic : PointLabel::kDynamic;
        }
      }

      const Vec3 local_dir{cos_phi * std::cos(theta), cos_phi * std::sin(theta), sin_phi};
      ScanPoint p;
      if (best_t <= config.max_range) {
        p.x = best_t * local_dir.x;
        p.y = best_t * local_dir.y;
        p.z = best_t * local_dir.z;
        p.label = label;
        p.reflected = true;
      } else {
        p.x = local_dir.x;
        p.y = local_dir.y;
        p.z = local_dir.z;
        p.label = PointLabel::kNone;
        p.reflected = false;
      }
      scan.push_back(p);
    }
  }
  return scan;
}

std::vector<ScanPoint> filter_scan(std::span<const ScanPoint> scan, double height_threshold, double sensor_height)
{
  std::vector<ScanPoint> out;
  out.reserve(scan.size());
  for (const auto & p : scan) {
    if (!p.reflected) {
      out.push_back(p);
      continue;
    }
    if (p.label == PointLabel::kStatic && p.z + sensor_height <= height_threshold) {
      out.push_back(p);
    }
  }
  return out;
}

std::vector<ScanPoint> downsample_scan(std::span<const ScanPoint> scan, std::size_t k)
{
  if (k == 0) {
    throw std::invalid_argument("downsample_scan: k must be >= 1");
  }
  std::vector<ScanPoint> out;
  out.reserve((scan.size() + k - 1) / k);
  for (std::size_t i = 0; i < scan.size(); i += k) {
    out.push_back(scan[i]);
  }
  return out;
}

bool pgv_bin(const PolarPoint & p, const LidarConfig & config, int & row, int & col)
{
  if (config.n_layers == 1) {
    if (p.phi < config.fov_lower || p.phi > config.fov_upper) {
      return false;
    }
    row = 0;
  } else {
    const double step = (config.fov_upper - config.fov_lower) / (config.n_layers - 1);
    row = static_cast<int>(std::floor((config.fov_upper - p.phi) / step + 0.5));
    if (row < 0 || row >= config.n_layers) {
      return false;
    }
  }

  const int n_cols = config.n_columns();
  double offset = p.theta - config.azimuth_start;
  if (config.full_circle()) {
    offset = std::fmod(offset, 2.0 * std::numbers::pi);
    if (offset < 0.0) {
      offset += 2.0 * std::numbers::pi;
    }
  }
  col = static_cast<int>(std::floor(offset / config.azimuth_resolution + 0.5));
  if (config.full_circle()) {
    col %= n_cols;
  }
  return col >= 0 && col < n_cols;
}

PgvImage encode_pgv(std::span<const ScanPoint> scan, const LidarConfig & config)
{
  config.validate();
  PgvImage image;
  image.rows = config.n_layers;
  image.cols = config.n_columns();
  image.unreflected_value = config.unreflected_value;
  const std::size_t n = static_cast<std::size_t>(image.rows) * image.cols;
  std::vector<double> sums(n, 0.0);
  image.contributors.assign(n, 0);

  for (const auto & p : scan) {
    if (!p.reflected) {
      continue;
    }
    const PolarPoint polar = cart_to_polar(Vec3{p.x, p.y, p.z});
    int row = 0;
    int col = 0;
    if (!pgv_bin(polar, config, row, col)) {
      continue;
    }
    const std::size_t idx = static_cast<std::size_t>(row) * image.cols + col;
    sums[idx] += polar.rho;
    image.contributors[idx] += 1;
  }

  image.depth.assign(n, config.unreflected_value);
  for (std::size_t i = 0; i < n; ++i) {
    if (image.contributors[i] > 0) {
      image.depth[i] = sums[i] / image.contributors[i];
    }
  }
  return image;
}

std::vector<std::uint8_t> pgv_to_pgm(const PgvImage & image, double max_range)
{
  const std::string header =
    "P5\n" + std::to_string(image.cols) + " " + std::to_string(image.rows) + "\n255\n";
  std::vector<std::uint8_t> bytes(header.begin(), header.end());
  bytes.reserve(bytes.size() + image.depth.size());
  for (std::size_t i = 0; i < image.depth.size(); ++i) {
    if (image.contributors[i] == 0) {
      bytes.push_back(0);
      continue;
    }
    const double v = std::floor(255.0 * std::clamp(image.depth[i] / max_range, 0.0, 1.0) + 0.5);
    bytes.push_back(static_cast<std::uint8_t>(v));
  }
  return bytes;
}

void write_file(const std::filesystem::path & path, std::span<const std::uint8_t> bytes)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace ogmnav
