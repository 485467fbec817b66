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

#include "ogmnav/world.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ogmnav
{

using nlohmann::json;

Vec2 project_onto_road(const Road & road, const Vec2 & p)
{
  const Vec2 d = road.end - road.start;
  const double len2 = dot(d, d);
  if (len2 <= 0.0) {
    return road.start;
  }
  const double t = std::clamp(dot(p - road.start, d) / len2, 0.0, 1.0);
  return road.start + d * t;
}

std::optional<std::size_t> nearest_road(const std::vector<Road> & roads, const Vec2 & p)
{
  std::optional<std::size_t> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < roads.size(); ++i) {
    const double d = distance(project_onto_road(roads[i], p), p);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

bool on_road(const std::vector<Road> & roads, const Vec2 & p)
{
  for (const auto & road : roads) {
    const double lo_x = std::min(road.start.x, road.end.x);
    const double hi_x = std::max(road.start.x, road.end.x);
    const double lo_y = std::min(road.start.y, road.end.y);
    const double hi_y = std::max(road.start.y, road.end.y);
    const double w = road.lane_width;
    if (p.x >= lo_x - w && p.x <= hi_x + w && p.y >= lo_y - w && p.y <= hi_y + w) {
      return true;
    }
  }
  return false;
}

void validate_world(const World & world)
{
  for (std::size_t i = 0; i < world.roads.size(); ++i) {
    const auto & r = world.roads[i];
    if (!(r.lane_width > 0.0)) {
      throw std::invalid_argument("road " + std::to_string(i) + ": lane_width must be positive");
    }
    if (!r.horizontal() && !r.vertical()) {
      throw std::invalid_argument("road " + std::to_string(i) + ": roads must be axis-aligned");
    }
  }
  for (std::size_t i = 0; i < world.obstacles.size(); ++i) {
    const auto & b = world.obstacles[i];
    if (!(b.height > 0.0) || !(b.half_extents.x > 0.0) || !(b.half_extents.y > 0.0)) {
      throw std::invalid_argument("obstacle " + std::to_string(i) + ": dimensions must be positive");
    }
  }
}

namespace
{

double number_at(const json & j, const char * key, const std::string & where)
{
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw std::invalid_argument(where + ": missing numeric field '" + key + "'");
  }
  return j.at(key).get<double>();
}

}  // namespace

World parse_world(const std::string & text, const std::string & origin)
{
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error & e) {
    throw std::invalid_argument(origin + ": " + e.what());
  }

  World world;
  if (!root.contains("roads") || !root.at("roads").is_array()) {
    throw std::invalid_argument(origin + ": missing 'roads' array");
  }
  const auto & roads = root.at("roads");
  for (std::size_t i = 0; i < roads.size(); ++i) {
    const std::string where = origin + ": roads[" + std::to_string(i) + "]";
    const auto & r = roads[i];
    Road road;
    road.start = {number_at(r, "x1", where), number_at(r, "y1", where)};
    road.end = {number_at(r, "x2", where), number_at(r, "y2", where)};
    road.lane_width = number_at(r, "lane_width", where);
    world.roads.push_back(road);
  }
  if (root.contains("obstacles")) {
    const auto & obstacles = root.at("obstacles");
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
      const std::string where = origin + ": obstacles[" + std::to_string(i) + "]";
      const auto & o = obstacles[i];
      Box box;
      box.center = {number_at(o, "cx", where), number_at(o, "cy", where)};
      box.half_extents = {number_at(o, "hx", where), number_at(o, "hy", where)};
      box.height = number_at(o, "height", where);
      const std::string label = o.value("label", std::string("static"));
      if (label == "static") {
        box.label = ObstacleLabel::kStatic;
      } else if (label == "dynamic") {
        box.label = ObstacleLabel::kDynamic;
      } else {
        throw std::invalid_argument(where + ": unknown label '" + label + "'");
      }
      world.obstacles.push_back(box);
    }
  }
  try {
    validate_world(world);
  } catch (const std::invalid_argument & e) {
    throw std::invalid_argument(origin + ": " + e.what());
  }
  return world;
}

World load_world(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open world file " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_world(buffer.str(), path.string());
}

std::string dump_world(const World & world)
{
  json root;
  root["roads"] = json::array();
  for (const auto & r : world.roads) {
    root["roads"].push_back(
      {{"x1", r.start.x}, {"y1", r.start.y}, {"x2", r.end.x}, {"y2", r.end.y}, {"lane_width", r.lane_width}});
  }
  root["obstacles"] = json::array();
  for (const auto & b : world.obstacles) {
    root["obstacles"].push_back(
      {{"cx", b.center.x},
       {"cy", b.center.y},
       {"hx", b.half_extents.x},
       {"hy", b.half_extents.y},
       {"height", b.height},
       {"label", b.label == ObstacleLabel::kStatic ? "static" : "dynamic"}});
  }
  return root.dump(2);
}

}  // namespace ogmnav
