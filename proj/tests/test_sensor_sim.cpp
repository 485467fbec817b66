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

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "ogmnav/sensor_sim.hpp"
#include "ogmnav/world.hpp"

namespace ogmnav
{
namespace
{

// One horizontal layer, the beam at azimuth 0 is column 180.
LidarConfig flat_config(double elevation_deg = 0.0)
{
  LidarConfig c;
  c.n_layers = 1;
  c.fov_upper = deg2rad(elevation_deg);
  c.fov_lower = c.fov_upper - 0.01;
  return c;
}

const ScanPoint * forward_point(const std::vector<ScanPoint> & scan)
{
  const ScanPoint * best = nullptr;
  double best_angle = 1e9;
  for (const auto & p : scan) {
    const double a = std::fabs(std::atan2(p.y, p.x));
    if ((p.reflected || p.x > 0) && a < best_angle) {
      best_angle = a;
      best = &p;
    }
  }
  return best;
}

TEST(Raycast, HitsBoxFace)
{
  World w;
  w.obstacles.push_back(Box{{13.0, 0.0}, {1.0, 1.0}, 5.0, ObstacleLabel::kStatic});
  const auto scan = raycast_scan(w, Pose2D{}, flat_config());
  ASSERT_EQ(scan.size(), 360u);
  const ScanPoint * p = forward_point(scan);
  ASSERT_NE(p, nullptr);
  EXPECT_TRUE(p->reflected);
  EXPECT_EQ(p->label, PointLabel::kStatic);
  EXPECT_NEAR(std::hypot(p->x, p->y, p->z), 12.0, 1e-9);
}

TEST(Raycast, RotatedSensorStaysInSensorFrame)
{
  World w;
  w.obstacles.push_back(Box{{0.0, 13.0}, {1.0, 1.0}, 5.0, ObstacleLabel::kStatic});
  const auto scan = raycast_scan(w, Pose2D{0, 0, std::numbers::pi / 2}, flat_config());
  const ScanPoint * p = forward_point(scan);
  ASSERT_NE(p, nullptr);
  EXPECT_TRUE(p->reflected);
  EXPECT_NEAR(p->x, 12.0, 1e-6);
}

TEST(Raycast, EmptySpaceIsUnreflected)
{
  const auto scan = raycast_scan(World{}, Pose2D{}, flat_config());
  for (const auto & p : scan) {
    EXPECT_FALSE(p.reflected);
    EXPECT_EQ(p.label, PointLabel::kNone);
  }
}

TEST(Raycast, GroundHitByRightTriangle)
{
  const auto scan = raycast_scan(World{}, Pose2D{}, flat_config(-30.0));
  const ScanPoint * p = forward_point(scan);
  ASSERT_NE(p, nullptr);
  EXPECT_TRUE(p->reflected);
  EXPECT_EQ(p->label, PointLabel::kGround);
  EXPECT_NEAR(std::hypot(p->x, p->y, p->z), 4.0, 1e-9);
}

TEST(Raycast, DynamicLabelPropagates)
{
  World w;
  w.obstacles.push_back(Box{{10.0, 0.0}, {1.0, 1.0}, 3.0, ObstacleLabel::kDynamic});
  const ScanPoint * p = nullptr;
  const auto scan = raycast_scan(w, Pose2D{}, flat_config());
  p = forward_point(scan);
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->label, PointLabel::kDynamic);
}

TEST(Filter, Rules)
{
  std::vector<ScanPoint> scan{
    {1, 0, -2, PointLabel::kGround, true},
    {1, 0, 1.5, PointLabel::kStatic, true},  // world z 3.5
    {1, 0, -1.0, PointLabel::kStatic, true},  // world z 1.0
    {1, 0, 0, PointLabel::kDynamic, true},
    {9, 0, 0, PointLabel::kNone, false},
  };
  const auto out = filter_scan(scan, 3.0, 2.0);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_DOUBLE_EQ(out[0].z, -1.0);
  EXPECT_FALSE(out[1].reflected);
}

TEST(Downsample, Counts)
{
  std::vector<ScanPoint> scan(10);
  for (int i = 0; i < 10; ++i) {
    scan[i].x = i;
  }
  EXPECT_EQ(downsample_scan(scan, 1).size(), 10u);
  const auto half = downsample_scan(scan, 2);
  ASSERT_EQ(half.size(), 5u);
  for (int i = 0; i < 5; ++i) {
    EXPECT_DOUBLE_EQ(half[i].x, 2 * i);
  }
  EXPECT_EQ(downsample_scan(std::span(scan).first(7), 3).size(), 3u);
  EXPECT_THROW(downsample_scan(scan, 0), std::invalid_argument);
}

TEST(Pgv, SingleContributor)
{
  LidarConfig c;
  c.unreflected_value = -1.0;
  // Row 0 is the top layer, column 5 sits 5 degrees past the start azimuth.
  const double theta = c.azimuth_start + 5 * c.azimuth_resolution;
  const double phi = c.fov_upper;
  const Vec3 v = polar_to_cart({7.0, theta, phi});
  const std::vector<ScanPoint> scan{{v.x, v.y, v.z, PointLabel::kStatic, true}};
  const auto img = encode_pgv(scan, c);
  ASSERT_EQ(img.rows, 32);
  ASSERT_EQ(img.cols, 360);
  for (int r = 0; r < img.rows; ++r) {
    for (int k = 0; k < img.cols; ++k) {
      EXPECT_DOUBLE_EQ(img.at(r, k), (r == 0 && k == 5) ? 7.0 : -1.0);
    }
  }
}

TEST(Pgv, MeanOfTwo)
{
  LidarConfig c;
  const double theta = 0.3;
  const double phi = c.layer_elevation(10);
  const Vec3 a = polar_to_cart({4.0, theta, phi});
  const Vec3 b = polar_to_cart({6.0, theta, phi});
  const std::vector<ScanPoint> scan{{a.x, a.y, a.z, PointLabel::kStatic, true}, {b.x, b.y, b.z, PointLabel::kStatic, true}};
  const auto img = encode_pgv(scan, c);
  int row = 0;
  int col = 0;
  ASSERT_TRUE(pgv_bin(cart_to_polar(a), c, row, col));
  EXPECT_EQ(row, 10);
  EXPECT_DOUBLE_EQ(img.at(row, col), 5.0);
  EXPECT_EQ(img.count(row, col), 2);
}

TEST(Pgv, DimensionsFollowResolution)
{
  LidarConfig c;
  c.azimuth_resolution = deg2rad(0.5);
  const auto img = encode_pgv({}, c);
  EXPECT_EQ(img.rows, 32);
  EXPECT_EQ(img.cols, 720);
}

TEST(Pgv, PgmHeader)
{
  LidarConfig c;
  const auto bytes = pgv_to_pgm(encode_pgv({}, c), 150.0);
  const std::string header(bytes.begin(), bytes.begin() + 14);
  EXPECT_EQ(header, "P5\n360 32\n255\n");
  EXPECT_EQ(bytes.size(), 14u + 360u * 32u);
}

TEST(Lidar, ValidateRejectsBadConfig)
{
  LidarConfig c;
  c.fov_lower = c.fov_upper;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  LidarConfig d;
  d.n_layers = 0;
  EXPECT_THROW(d.validate(), std::invalid_argument);
}

TEST(World, ParseErrorsNameTheKey)
{
  EXPECT_THROW(parse_world(R"({"roads":[{"x1":0,"y1":0,"x2":0,"y2":0}]})"), std::invalid_argument);
  try {
    parse_world(R"({"roads":[{"x1":0,"y1":0,"x2":10}]})", "town.json");
    FAIL();
  } catch (const std::invalid_argument & e) {
    EXPECT_NE(std::string(e.what()).find("town.json"), std::string::npos);
  }
}

TEST(World, RoundTrip)
{
  World w;
  w.roads.push_back(Road{{0, 0}, {100, 0}});
  w.obstacles.push_back(Box{{5, 10}, {2, 3}, 8.0, ObstacleLabel::kStatic});
  const World back = parse_world(dump_world(w));
  ASSERT_EQ(back.roads.size(), 1u);
  EXPECT_DOUBLE_EQ(back.roads[0].end.x, 100.0);
  ASSERT_EQ(back.obstacles.size(), 1u);
  EXPECT_DOUBLE_EQ(back.obstacles[0].half_extents.y, 3.0);
}

}  // namespace
}  // namespace ogmnav
