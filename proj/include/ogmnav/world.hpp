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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ogmnav/geometry.hpp"

namespace ogmnav
{

/// Two-lane road along an axis-aligned centerline. lane_width is the width of
/// one lane; the drivable surface spans lane_width on each side.
struct Road
{
  Vec2 start;
  Vec2 end;
  double lane_width{3.5};

  double length() const { return distance(start, end); }
  bool horizontal() const { return std::fabs(end.y - start.y) <= 1e-6; }
  bool vertical() const { return std::fabs(end.x - start.x) <= 1e-6; }
};

enum class ObstacleLabel { kStatic, kDynamic };

/// Axis-aligned box standing on the ground plane.
struct Box
{
  Vec2 center;
  Vec2 half_extents;
  double height{1.0};
  ObstacleLabel label{ObstacleLabel::kStatic};
};

struct World
{
  std::vector<Road> roads;
  std::vector<Box> obstacles;
};

/// Closest point on a road centerline segment.
Vec2 project_onto_road(const Road & road, const Vec2 & p);

/// Index of the road whose centerline is nearest to p; nullopt when empty.
std::optional<std::size_t> nearest_road(const std::vector<Road> & roads, const Vec2 & p);

/// True when p lies on a drivable surface (within lane_width of some
/// centerline, intersection squares included).
bool on_road(const std::vector<Road> & roads, const Vec2 & p);

/// Throws std::invalid_argument when a road is not axis-aligned, a lane width
/// or obstacle dimension is not positive.
void validate_world(const World & world);

World parse_world(const std::string & text, const std::string & origin = "<string>");
World load_world(const std::filesystem::path & path);
std::string dump_world(const World & world);

}  // namespace ogmnav
