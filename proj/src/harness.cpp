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

#include "ogmnav/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ogmnav/image.hpp"

namespace ogmnav
{

using nlohmann::json;

namespace
{

std::string read_text(const std::filesystem::path & path, const char * what)
{
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument(std::string("cannot open ") + what + " " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Reads optional fields of one JSON object and rejects keys nobody asked for.
class Section
{
public:
  Section(const json & j, std::string where) : j_(j), where_(std::move(where))
  {
    if (!j_.is_object()) {
      throw std::invalid_argument(where_ + ": expected an object");
    }
  }

  void number(const char * key, double & out)
  {
    if (const json * v = take(key)) {
      if (!v->is_number()) {
        throw std::invalid_argument(where_ + "." + key + ": expected a number");
      }
      out = v->get<double>();
    }
  }

  void integer(const char * key, int & out)
  {
    if (const json * v = take(key)) {
      if (!v->is_number_integer()) {
        throw std::invalid_argument(where_ + "." + key + ": expected an integer");
      }
      out = v->get<int>();
    }
  }

  void degrees(const char * key, double & out_rad)
  {
    double deg = rad2deg(out_rad);
    number(key, deg);
    out_rad = deg2rad(deg);
  }

  void boolean(const char * key, bool & out)
  {
    if (const json * v = take(key)) {
      if (!v->is_boolean()) {
        throw std::invalid_argument(where_ + "." + key + ": expected true or false");
      }
      out = v->get<bool>();
    }
  }

  std::optional<std::string> text(const char * key)
  {
    if (const json * v = take(key)) {
      if (!v->is_string()) {
        throw std::invalid_argument(where_ + "." + key + ": expected a string");
      }
      return v->get<std::string>();
    }
    return std::nullopt;
  }

  std::optional<Section> child(const char * key)
  {
    if (const json * v = take(key)) {
      return Section(*v, where_ + "." + key);
    }
    return std::nullopt;
  }

  const std::string & where() const { return where_; }

  void finish() const
  {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.contains(it.key())) {
        throw std::invalid_argument(where_ + "." + it.key() + ": unknown key");
      }
    }
  }

private:
  const json * take(const char * key)
  {
    used_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  const json & j_;
  std::string where_;
  std::set<std::string> used_;
};

AreaMode parse_area_mode(const std::string & s, const std::string & where)
{
  if (s == "hull" || s == "convex_hull") {
    return AreaMode::kConvexHull;
  }
  if (s == "polygon") {
    return AreaMode::kPolygon;
  }
  throw std::invalid_argument(where + ": area_mode must be hull or polygon");
}

WallMode parse_wall_mode(const std::string & s, const std::string & where)
{
  if (s == "directed") {
    return WallMode::kDirected;
  }
  if (s == "remove_when_left") {
    return WallMode::kRemoveWhenLeft;
  }
  throw std::invalid_argument(where + ": wall_mode must be directed or remove_when_left");
}

}  // namespace

SimConfig parse_config(const std::string & text, const std::string & origin)
{
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error & e) {
    throw std::invalid_argument(origin + ": " + e.what());
  }
  SimConfig c;
  Section top(root, origin);
  if (auto s = top.child("lidar")) {
    s->integer("n_layers", c.lidar.n_layers);
    s->degrees("fov_upper_deg", c.lidar.fov_upper);
    s->degrees("fov_lower_deg", c.lidar.fov_lower);
    s->degrees("azimuth_resolution_deg", c.lidar.azimuth_resolution);
    s->degrees("azimuth_start_deg", c.lidar.azimuth_start);
    s->degrees("azimuth_span_deg", c.lidar.azimuth_span);
    s->number("max_range", c.lidar.max_range);
    s->number("mount_height", c.lidar.mount_height);
    s->number("unreflected_value", c.lidar.unreflected_value);
    s->finish();
  }
  top.number("filter_height", c.filter_height);
  if (auto s = top.child("ogm")) {
    s->number("resolution", c.ogm.resolution);
    s->integer("side", c.ogm.side);
    s->number("log_odd_occ", c.ogm.log_odd_occ);
    s->number("log_odd_free", c.ogm.log_odd_free);
    s->number("wall_depth", c.ogm.wall_depth);
    s->degrees("beam_width_deg", c.ogm.beam_width);
    s->number("log_clamp", c.ogm.log_clamp);
    if (auto mode = s->text("area_mode")) {
      c.ogm.area_mode = parse_area_mode(*mode, s->where());
    }
    s->number("speed_ref", c.ogm.speed_ref);
    s->number("radius_fraction", c.ogm.radius_fraction);
    s->finish();
  }
  if (auto s = top.child("planner")) {
    s->number("resolution", c.planner.planner.resolution);
    s->integer("far_inters", c.planner.planner.far_inters);
    s->integer("inter_exited", c.planner.planner.inter_exited);
    s->degrees("goal_heading_tolerance_deg", c.planner.goal_heading_tolerance);
    s->boolean("blockage_avoidance", c.planner.blockage_avoidance);
    if (auto mode = s->text("wall_mode")) {
      c.planner.wall_mode = parse_wall_mode(*mode, s->where());
    }
    s->finish();
  }
  if (auto s = top.child("blockage")) {
    s->integer("route_pts", c.planner.blockage.route_pts);
    s->number("p_occ", c.planner.blockage.p_occ);
    s->number("slice_width", c.planner.blockage.slice_width);
    s->number("cell_occupied_pts", c.planner.blockage.cell_occupied_pts);
    s->number("distance_scaling", c.planner.blockage.distance_scaling);
    s->integer("bezier_samples", c.planner.blockage.bezier_samples);
    s->finish();
  }
  if (auto s = top.child("rectify")) {
    s->number("max_correction_rad", c.rectify.max_correction);
    s->number("step_rad", c.rectify.step);
    s->number("lookahead", c.rectify.lookahead);
    s->number("horizon", c.rectify.horizon);
    s->integer("n_states", c.rectify.n_states);
    s->number("spacing", c.rectify.spacing);
    s->number("min_check_speed", c.rectify.min_check_speed);
    s->number("clearance", c.rectify.clearance);
    s->number("p_occ", c.rectify.p_occ);
    s->finish();
  }
  if (auto s = top.child("controller")) {
    s->number("cruise_speed", c.controller.cruise_speed);
    s->number("turn_speed", c.controller.turn_speed);
    s->number("min_lookahead", c.controller.min_lookahead);
    s->number("lookahead_gain", c.controller.lookahead_gain);
    s->number("throttle_gain", c.controller.throttle_gain);
    s->number("brake_gain", c.controller.brake_gain);
    s->number("speed_deadband", c.controller.speed_deadband);
    s->number("path_spacing", c.controller.path_spacing);
    s->boolean("rectify", c.controller.rectify);
    s->finish();
  }
  if (auto s = top.child("bicycle")) {
    s->number("wheelbase", c.bicycle.wheelbase);
    s->number("max_steer_rad", c.bicycle.max_steer);
    s->finish();
  }
  if (auto s = top.child("vehicle")) {
    s->number("length", c.vehicle.length);
    s->number("width", c.vehicle.width);
    s->number("max_accel", c.vehicle.max_accel);
    s->number("max_decel", c.vehicle.max_decel);
    s->finish();
  }
  if (auto s = top.child("sim")) {
    s->number("tick_dt", c.tick_dt);
    s->number("lidar_period", c.lidar_period);
    s->number("deadline_speed_kmh", c.deadline_speed_kmh);
    s->integer("controller_cells", c.controller_cells);
    s->finish();
  }
  top.finish();

  try {
    c.lidar.validate();
    c.ogm.validate();
    c.planner.blockage.validate();
    c.rectify.validate();
  } catch (const std::invalid_argument & e) {
    throw std::invalid_argument(origin + ": " + e.what());
  }
  if (!(c.tick_dt > 0.0) || c.lidar_period < c.tick_dt || !(c.deadline_speed_kmh > 0.0)) {
    throw std::invalid_argument(origin + ": sim: need tick_dt > 0, lidar_period >= tick_dt, deadline speed > 0");
  }
  return c;
}

SimConfig load_config(const std::filesystem::path & path)
{
  return parse_config(read_text(path, "config file"), path.string());
}

namespace
{

// Degrees for display; drops conversion noise such as -29.999999999999996.
double out_deg(double rad) { return std::round(rad2deg(rad) * 1e9) / 1e9; }

}  // namespace

std::string dump_config(const SimConfig & c)
{
  json root;
  root["lidar"] = {
    {"n_layers", c.lidar.n_layers},
    {"fov_upper_deg", out_deg(c.lidar.fov_upper)},
    {"fov_lower_deg", out_deg(c.lidar.fov_lower)},
    {"azimuth_resolution_deg", out_deg(c.lidar.azimuth_resolution)},
    {"azimuth_start_deg", out_deg(c.lidar.azimuth_start)},
    {"azimuth_span_deg", out_deg(c.lidar.azimuth_span)},
    {"max_range", c.lidar.max_range},
    {"mount_height", c.lidar.mount_height},
    {"unreflected_value", c.lidar.unreflected_value}};
  root["filter_height"] = c.filter_height;
  root["ogm"] = {
    {"resolution", c.ogm.resolution},
    {"side", c.ogm.side},
    {"log_odd_occ", c.ogm.log_odd_occ},
    {"log_odd_free", c.ogm.log_odd_free},
    {"wall_depth", c.ogm.wall_depth},
    {"beam_width_deg", out_deg(c.ogm.beam_width)},
    {"log_clamp", c.ogm.log_clamp},
    {"area_mode", c.ogm.area_mode == AreaMode::kConvexHull ? "hull" : "polygon"},
    {"speed_ref", c.ogm.speed_ref},
    {"radius_fraction", c.ogm.radius_fraction}};
  root["planner"] = {
    {"resolution", c.planner.planner.resolution},
    {"far_inters", c.planner.planner.far_inters},
    {"inter_exited", c.planner.planner.inter_exited},
    {"goal_heading_tolerance_deg", out_deg(c.planner.goal_heading_tolerance)},
    {"blockage_avoidance", c.planner.blockage_avoidance},
    {"wall_mode", c.planner.wall_mode == WallMode::kDirected ? "directed" : "remove_when_left"}};
  root["blockage"] = {
    {"route_pts", c.planner.blockage.route_pts},
    {"p_occ", c.planner.blockage.p_occ},
    {"slice_width", c.planner.blockage.slice_width},
    {"cell_occupied_pts", c.planner.blockage.cell_occupied_pts},
    {"distance_scaling", c.planner.blockage.distance_scaling},
    {"bezier_samples", c.planner.blockage.bezier_samples}};
  root["rectify"] = {
    {"max_correction_rad", c.rectify.max_correction},
    {"step_rad", c.rectify.step},
    {"lookahead", c.rectify.lookahead},
    {"horizon", c.rectify.horizon},
    {"n_states", c.rectify.n_states},
    {"spacing", c.rectify.spacing},
    {"min_check_speed", c.rectify.min_check_speed},
    {"clearance", c.rectify.clearance},
    {"p_occ", c.rectify.p_occ}};
  root["controller"] = {
    {"cruise_speed", c.controller.cruise_speed},
    {"turn_speed", c.controller.turn_speed},
    {"min_lookahead", c.controller.min_lookahead},
    {"lookahead_gain", c.controller.lookahead_gain},
    {"throttle_gain", c.controller.throttle_gain},
    {"brake_gain", c.controller.brake_gain},
    {"speed_deadband", c.controller.speed_deadband},
    {"path_spacing", c.controller.path_spacing},
    {"rectify", c.controller.rectify}};
  root["bicycle"] = {{"wheelbase", c.bicycle.wheelbase}, {"max_steer_rad", c.bicycle.max_steer}};
  root["vehicle"] = {
    {"length", c.vehicle.length},
    {"width", c.vehicle.width},
    {"max_accel", c.vehicle.max_accel},
    {"max_decel", c.vehicle.max_decel}};
  root["sim"] = {
    {"tick_dt", c.tick_dt},
    {"lidar_period", c.lidar_period},
    {"deadline_speed_kmh", c.deadline_speed_kmh},
    {"controller_cells", c.controller_cells}};
  return root.dump(2);
}

std::string_view to_string(BlockageKind kind)
{
  switch (kind) {
    case BlockageKind::kFull:
      return "full";
    case BlockageKind::kOppositeLane:
      return "opposite_lane";
    case BlockageKind::kOffLane:
      return "off_lane";
  }
  return "?";
}

bool Scenario::reroute_mandatory() const
{
  return std::any_of(blockages.begin(), blockages.end(), [](const Blockage & b) { return b.kind == BlockageKind::kFull; });
}

namespace
{

double required_number(const json & j, const char * key, const std::string & where)
{
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw std::invalid_argument(where + ": missing numeric field '" + key + "'");
  }
  return j.at(key).get<double>();
}

Pose2D parse_pose(const json & j, const std::string & where)
{
  if (!j.is_object()) {
    throw std::invalid_argument(where + ": expected an object");
  }
  return {required_number(j, "x", where), required_number(j, "y", where), deg2rad(required_number(j, "yaw_deg", where))};
}

json pose_json(const Pose2D & p) { return {{"x", p.x}, {"y", p.y}, {"yaw_deg", rad2deg(p.yaw)}}; }

}  // namespace

std::vector<Scenario> parse_scenarios(const std::string & text, const std::string & origin)
{
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error & e) {
    throw std::invalid_argument(origin + ": " + e.what());
  }
  if (!root.contains("scenarios") || !root.at("scenarios").is_array()) {
    throw std::invalid_argument(origin + ": missing 'scenarios' array");
  }
  std::vector<Scenario> out;
  const auto & list = root.at("scenarios");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = origin + ": scenarios[" + std::to_string(i) + "]";
    const auto & s = list[i];
    Scenario sc;
    sc.id = s.value("id", fmt::format("s{:03d}", i));
    sc.town = s.value("town", std::string());
    if (!s.contains("start") || !s.contains("destination")) {
      throw std::invalid_argument(where + ": start and destination are required");
    }
    sc.start = parse_pose(s.at("start"), where + ".start");
    sc.destination = parse_pose(s.at("destination"), where + ".destination");
    sc.seed = s.value("seed", std::uint64_t{0});
    sc.tick_dt = s.value("tick_dt", 0.0);
    if (s.contains("blockages")) {
      const auto & bl = s.at("blockages");
      for (std::size_t k = 0; k < bl.size(); ++k) {
        const std::string bw = where + ".blockages[" + std::to_string(k) + "]";
        const auto & b = bl[k];
        Blockage blk;
        blk.box.center = {required_number(b, "cx", bw), required_number(b, "cy", bw)};
        blk.box.half_extents = {required_number(b, "hx", bw), required_number(b, "hy", bw)};
        blk.box.height = b.value("height", 1.8);
        const std::string kind = b.value("kind", std::string("full"));
        if (kind == "full") {
          blk.kind = BlockageKind::kFull;
        } else if (kind == "opposite_lane") {
          blk.kind = BlockageKind::kOppositeLane;
        } else if (kind == "off_lane") {
          blk.kind = BlockageKind::kOffLane;
        } else {
          throw std::invalid_argument(bw + ": unknown kind '" + kind + "'");
        }
        if (!(blk.box.half_extents.x > 0.0) || !(blk.box.half_extents.y > 0.0) || !(blk.box.height > 0.0)) {
          throw std::invalid_argument(bw + ": dimensions must be positive");
        }
        sc.blockages.push_back(blk);
      }
    }
    out.push_back(std::move(sc));
  }
  return out;
}

std::vector<Scenario> load_scenarios(const std::filesystem::path & path)
{
  return parse_scenarios(read_text(path, "scenario file"), path.string());
}

std::string dump_scenarios(const std::vector<Scenario> & scenarios)
{
  json root;
  root["scenarios"] = json::array();
  for (const auto & s : scenarios) {
    json j = {
      {"id", s.id},
      {"town", s.town},
      {"start", pose_json(s.start)},
      {"destination", pose_json(s.destination)},
      {"seed", s.seed},
      {"blockages", json::array()}};
    if (s.tick_dt > 0.0) {
      j["tick_dt"] = s.tick_dt;
    }
    for (const auto & b : s.blockages) {
      j["blockages"].push_back(
        {{"kind", std::string(to_string(b.kind))},
         {"cx", b.box.center.x},
         {"cy", b.box.center.y},
         {"hx", b.box.half_extents.x},
         {"hy", b.box.half_extents.y},
         {"height", b.box.height}});
    }
    root["scenarios"].push_back(j);
  }
  return root.dump(2);
}

double deadline_for(double shortest_route_length, double speed_kmh)
{
  if (shortest_route_length < 0.0) {
    throw std::invalid_argument("deadline_for: negative length");
  }
  return shortest_route_length / (speed_kmh * 1000.0 / 3600.0);
}

std::string_view to_string(Outcome outcome)
{
  switch (outcome) {
    case Outcome::kSuccess:
      return "success";
    case Outcome::kTimeout:
      return "timeout";
    case Outcome::kCollision:
      return "collision";
    case Outcome::kPlanningFailure:
      return "planning_failure";
  }
  return "?";
}

World scenario_world(const World & town, const Scenario & scenario)
{
  World world = town;
  for (const auto & b : scenario.blockages) {
    world.obstacles.push_back(b.box);
  }
  return world;
}

ScenarioResult run_scenario(
  const World & town, const Scenario & scenario, const SimConfig & config, const RunOptions & options)
{
  ScenarioResult result;
  Metrics & m = result.metrics;
  m.id = scenario.id;
  m.reroute_mandatory = scenario.reroute_mandatory();
  m.n_blockages = scenario.blockages.size();

  const World world = scenario_world(town, scenario);
  const double dt = scenario.tick_dt > 0.0 ? scenario.tick_dt : config.tick_dt;
  const int lidar_every = std::max(1, static_cast<int>(std::lround(config.lidar_period / dt)));

  RoutePlannerConfig planner_cfg = config.planner;
  planner_cfg.blockage_avoidance = options.blockage_avoidance;
  planner_cfg.wall_mode = options.wall_mode;
  RoutePlanner planner(world.roads, scenario.destination, planner_cfg);

  OgmParams ogm_params = config.ogm;
  if (options.area_mode) {
    ogm_params.area_mode = *options.area_mode;
  }
  OccupancyGrid grid(ogm_params);
  const OccupancyGrid * grid_ptr = options.blockage_avoidance ? &grid : nullptr;

  const auto length = planner.shortest_route_length(scenario.start);
  if (!length) {
    m.outcome = Outcome::kPlanningFailure;
    return result;
  }
  m.route_length = *length;
  m.deadline = deadline_for(*length, config.deadline_speed_kmh);
  const double time_cap = options.max_time > 0.0 ? std::min(options.max_time, m.deadline) : m.deadline;

  VehicleState state;
  state.pose = scenario.start;
  std::map<GridIndex, int> visits;
  std::optional<GridIndex> last_cell;
  bool was_off_road = false;
  double t = 0.0;
  double meters = 0.0;
  std::string & log = result.tick_log;
  if (options.tick_log) {
    log +=
      "tick,time,x,y,yaw,speed,wheel_angle,steering,throttle,brake,command,row,col,replanned,rect_blocked,"
      "detection_range\n";
  }

  bool done = false;
  for (long tick = 0; !done; ++tick) {
    if (options.blockage_avoidance && tick % lidar_every == 0) {
      const auto scan = raycast_scan(world, state.pose, config.lidar);
      const auto filtered = filter_scan(scan, config.filter_height, config.lidar.mount_height);
      update(grid, filtered, state.pose, state.speed);
    }

    const PlanOutput plan = planner.plan_step(state.pose, grid_ptr);
    if (plan.replanned) {
      result.routes.push_back(planner.route().cells);
    }
    if (plan.event) {
      result.events.push_back(*plan.event);
      m.detection_ranges.push_back(plan.event->range);
    }
    if (!last_cell || *last_cell != plan.car_cell) {
      visits[plan.car_cell] += 1;
      last_cell = plan.car_cell;
    }
    if (plan.status == PlanStatus::kGoalReached) {
      m.success = true;
      m.outcome = Outcome::kSuccess;
      break;
    }
    if (plan.status == PlanStatus::kPlanningFailure) {
      m.outcome = Outcome::kPlanningFailure;
      break;
    }

    const auto lane = planner.lane_points(static_cast<std::size_t>(config.controller_cells));
    const FollowResult follow =
      follow_step(state, plan.command, lane, grid_ptr, config.controller, config.rectify, config.bicycle);

    const double accel =
      follow.controls.throttle * config.vehicle.max_accel - follow.controls.brake * config.vehicle.max_decel;
    const double speed_before = state.speed;
    state.pose = bicycle_step(state.pose, state.speed, follow.wheel_angle, config.bicycle.wheelbase, dt);
    state.pose.yaw = normalize_angle(state.pose.yaw);
    state.speed = std::max(0.0, state.speed + accel * dt);
    state.steering = follow.wheel_angle;
    meters += speed_before * dt;
    t += dt;

    if (options.tick_log) {
      log += fmt::format(
        "{},{:.3f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{},{},{},{},{},{}\n", tick, t,
        state.pose.x, state.pose.y, state.pose.yaw, state.speed, follow.wheel_angle, follow.controls.steering,
        follow.controls.throttle, follow.controls.brake, to_string(plan.command), plan.car_cell.row,
        plan.car_cell.col, plan.replanned ? 1 : 0, follow.rectify.blocked ? 1 : 0,
        plan.event ? fmt::format("{:.3f}", plan.event->range) : std::string());
    }

    for (const auto & box : world.obstacles) {
      if (rect_overlaps_box(
            state.pose, config.vehicle.length / 2.0, config.vehicle.width / 2.0, box.center, box.half_extents)) {
        m.static_collisions += 1;
        m.outcome = Outcome::kCollision;
        done = true;
        break;
      }
    }
    const bool off = !on_road(world.roads, state.pose.position());
    if (off && !was_off_road) {
      m.off_road += 1;
    }
    was_off_road = off;

    if (!done && t >= time_cap - 1e-9) {
      m.outcome = Outcome::kTimeout;
      done = true;
    }
  }

  m.time_used = t;
  m.km_traveled = meters / 1000.0;
  m.a_star_runs = planner.a_star_runs();
  for (const auto & [cell, n] : visits) {
    m.max_cell_visits = std::max(m.max_cell_visits, n);
  }
  if (m.success || m.route_length <= 0.0) {
    m.distance_to_goal_pct = 100.0;
  } else {
    const double remaining = planner.remaining_distance(state.pose.position());
    m.distance_to_goal_pct = std::clamp(100.0 * (1.0 - remaining / m.route_length), 0.0, 100.0);
  }

  if (options.export_dir) {
    std::filesystem::create_directories(*options.export_dir);
    write_file(*options.export_dir / (scenario.id + "_ogm.pgm"), export_map_image(grid));
    write_file(
      *options.export_dir / (scenario.id + "_planning.png"),
      render_planning_map(planner.map(), planner.route().cells));
  }
  return result;
}

namespace
{

Vec2 unit_of(Direction d)
{
  switch (d) {
    case Direction::kNorth:
      return {0.0, 1.0};
    case Direction::kEast:
      return {1.0, 0.0};
    case Direction::kSouth:
      return {0.0, -1.0};
    case Direction::kWest:
      return {-1.0, 0.0};
  }
  return {};
}

Vec2 right_of(const Vec2 & u) { return {u.y, -u.x}; }

Box oriented_box(const Vec2 & center, const Vec2 & along, double half_along, double half_across, double height)
{
  Box box;
  box.center = center;
  box.height = height;
  if (std::fabs(along.x) > 0.5) {
    box.half_extents = {half_along, half_across};
  } else {
    box.half_extents = {half_across, half_along};
  }
  return box;
}

double min_node_distance(const RoadGraph & g, const Vec2 & p)
{
  double best = std::numeric_limits<double>::infinity();
  for (const auto & n : g.nodes) {
    best = std::min(best, distance(n, p));
  }
  return best;
}

struct Placement
{
  Pose2D pose;
  std::size_t road;
};

Placement lane_pose(const RoadGraph & g, std::size_t road, double s, bool forward)
{
  const Road & r = g.roads[road];
  const Vec2 a = forward ? r.start : r.end;
  const Vec2 b = forward ? r.end : r.start;
  const Vec2 u = (b - a) / distance(a, b);
  const Vec2 p = a + u * s + right_of(u) * (r.lane_width / 2.0);
  return {{p.x, p.y, std::atan2(u.y, u.x)}, road};
}

}  // namespace

std::vector<Scenario> generate_blockage_scenarios(
  const World & town, const std::string & town_name, int n, std::uint64_t seed, const SimConfig & config)
{
  if (n < 0) {
    throw std::invalid_argument("generate_blockage_scenarios: n must be >= 0");
  }
  const RoadGraph graph = build_world_graph(town.roads);
  const PlanningMap base = build_planning_map(graph, config.planner.planner.resolution);
  const std::set<GridIndex> inters = intersection_cells(base, graph);
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto pick = [&rng](std::size_t count) { return std::uniform_int_distribution<std::size_t>(0, count - 1)(rng); };

  std::vector<std::size_t> long_roads;
  for (std::size_t i = 0; i < graph.roads.size(); ++i) {
    if (graph.roads[i].length() >= 40.0) {
      long_roads.push_back(i);
    }
  }
  if (long_roads.size() < 2) {
    throw std::runtime_error("generate_blockage_scenarios: town has too few roads");
  }

  std::vector<Scenario> out;
  for (int idx = 0; idx < n; ++idx) {
    const bool mandatory = idx % 2 == 0;
    const int count = std::uniform_int_distribution<int>(1, 5)(rng);
    bool placed = false;
    for (int attempt = 0; attempt < 2000 && !placed; ++attempt) {
      const std::size_t ra = long_roads[pick(long_roads.size())];
      const std::size_t rb = long_roads[pick(long_roads.size())];
      if (ra == rb) {
        continue;
      }
      const Placement start =
        lane_pose(graph, ra, uniform(15.0, graph.roads[ra].length() - 15.0), uniform(0.0, 1.0) < 0.5);
      const Placement dest =
        lane_pose(graph, rb, uniform(15.0, graph.roads[rb].length() - 15.0), uniform(0.0, 1.0) < 0.5);

      PlanningMap map = base;
      const GridIndex dest_cell = car_cell_of(map, graph.roads, dest.pose.position());
      const GridIndex start_cell = car_cell_of(map, graph.roads, start.pose.position());
      if (inters.contains(dest_cell) || inters.contains(start_cell) || dest_cell == start_cell) {
        continue;
      }
      add_wall_ahead(map, dest_cell, dest.pose.yaw);
      PlanningMap first = map;
      add_wall_behind(first, start_cell, start.pose.yaw);
      const auto route = a_star(first, start_cell, dest_cell);
      if (!route || route->size() < 20) {
        continue;
      }
      const auto & cells = *route;

      Scenario sc;
      sc.id = fmt::format("{}_{:03d}", town_name, idx);
      sc.town = town_name;
      sc.start = start.pose;
      sc.destination = dest.pose;
      sc.seed = seed;

      std::vector<Vec2> used;
      if (mandatory) {
        std::vector<std::size_t> candidates;
        for (std::size_t i = 3; i + 4 < cells.size(); ++i) {
          if (!inters.contains(cells[i])) {
            continue;
          }
          const auto d_in = direction_between(cells[i - 1], cells[i]);
          const auto d_out = direction_between(cells[i], cells[i + 1]);
          if (d_in && d_out && *d_in == *d_out) {
            candidates.push_back(i);
          }
        }
        if (candidates.empty()) {
          continue;
        }
        const std::size_t i = candidates[pick(candidates.size())];
        const Direction d = *direction_between(cells[i], cells[i + 1]);
        // Node position of this intersection cell.
        Vec2 node;
        for (std::size_t nidx : graph.intersections) {
          if (base.cell_of_point(graph.nodes[nidx]) == cells[i]) {
            node = graph.nodes[nidx];
          }
        }
        const Vec2 u = unit_of(d);
        const Vec2 center = node + u * uniform(10.0, 20.0);
        const GridIndex block_cell = car_cell_of(base, graph.roads, center);
        const auto pos = std::find(cells.begin(), cells.end(), block_cell);
        if (pos == cells.end() || pos == cells.end() - 1 || static_cast<std::size_t>(pos - cells.begin()) <= i) {
          continue;
        }
        if (min_node_distance(graph, center) < 9.0) {
          continue;
        }
        // Reroute must exist from the intersection with the way back closed.
        PlanningMap truth = map;
        truth.add_full_wall(block_cell);
        truth.add_full_wall(cells[i - 1]);
        if (!a_star(truth, cells[i], dest_cell)) {
          continue;
        }
        sc.blockages.push_back({oriented_box(center, u, 1.0, 3.6, 1.8), BlockageKind::kFull});
        used.push_back(center);
      }

      const int partial = mandatory ? count - 1 : count;
      int tries = 0;
      while (static_cast<int>(sc.blockages.size()) < (mandatory ? 1 : 0) + partial && tries < 500) {
        ++tries;
        const std::size_t j = 2 + pick(cells.size() - 4);
        const auto d_in = direction_between(cells[j - 1], cells[j]);
        const auto d_out = direction_between(cells[j], cells[j + 1]);
        if (!d_in || !d_out || *d_in != *d_out || inters.contains(cells[j]) || cells[j] == dest_cell) {
          continue;
        }
        const Vec2 u = unit_of(*d_in);
        const Vec2 c = base.cell_center(cells[j]);
        const auto road = nearest_road(graph.roads, c);
        const Vec2 foot = project_onto_road(graph.roads[*road], c) + u * uniform(-3.0, 3.0);
        if (min_node_distance(graph, foot) < 20.0) {
          continue;
        }
        if (std::any_of(used.begin(), used.end(), [&](const Vec2 & q) { return distance(q, foot) < 15.0; })) {
          continue;
        }
        const double lane = graph.roads[*road].lane_width;
        Blockage blk;
        if (uniform(0.0, 1.0) < 0.5) {
          blk.kind = BlockageKind::kOppositeLane;
          blk.box = oriented_box(foot - right_of(u) * (lane / 2.0), u, 1.0, 1.3, 1.8);
        } else {
          blk.kind = BlockageKind::kOffLane;
          const double side = uniform(0.0, 1.0) < 0.5 ? 1.0 : -1.0;
          blk.box = oriented_box(foot + right_of(u) * (side * 5.0), u, 1.0, 1.0, 1.8);
        }
        sc.blockages.push_back(blk);
        used.push_back(foot);
      }
      if (static_cast<int>(sc.blockages.size()) != count) {
        continue;
      }
      out.push_back(std::move(sc));
      placed = true;
    }
    if (!placed) {
      throw std::runtime_error(
        fmt::format("generate_blockage_scenarios: no valid placement for scenario {} in {}", idx, town_name));
    }
  }
  return out;
}

Summary compute_metrics(const std::vector<Metrics> & runs)
{
  if (runs.empty()) {
    throw std::invalid_argument("compute_metrics: no runs");
  }
  Summary s;
  s.n = runs.size();
  double pct = 0.0;
  double range_sum = 0.0;
  for (const auto & m : runs) {
    s.successes += m.success ? 1 : 0;
    pct += m.distance_to_goal_pct;
    s.km_traveled += m.km_traveled;
    s.static_collisions += m.static_collisions;
    s.off_road += m.off_road;
    for (double r : m.detection_ranges) {
      range_sum += r;
      ++s.detections;
    }
  }
  s.success_rate_pct = 100.0 * static_cast<double>(s.successes) / static_cast<double>(s.n);
  s.mean_distance_to_goal_pct = pct / static_cast<double>(s.n);
  s.mean_detection_range = s.detections > 0 ? range_sum / static_cast<double>(s.detections) : 0.0;
  return s;
}

std::string km_per_infraction(double km, int count)
{
  if (count == 0) {
    return fmt::format(">= {:.3f} km, no infraction", km);
  }
  return fmt::format("{:.3f}", km / count);
}

std::string metrics_csv(const std::vector<Metrics> & runs)
{
  std::vector<const Metrics *> sorted;
  for (const auto & m : runs) {
    sorted.push_back(&m);
  }
  std::sort(sorted.begin(), sorted.end(), [](const Metrics * a, const Metrics * b) { return a->id < b->id; });
  std::string out =
    "id,success,outcome,reroute_mandatory,n_blockages,time_used,deadline,route_length,distance_to_goal_pct,"
    "km_traveled,static_collisions,off_road,a_star_runs,max_cell_visits,n_detections,mean_detection_range\n";
  for (const Metrics * m : sorted) {
    const double mean_range =
      m->detection_ranges.empty()
        ? 0.0
        : std::accumulate(m->detection_ranges.begin(), m->detection_ranges.end(), 0.0) / m->detection_ranges.size();
    out += fmt::format(
      "{},{},{},{},{},{:.3f},{:.3f},{:.3f},{:.3f},{:.6f},{},{},{},{},{},{:.3f}\n", m->id, m->success ? 1 : 0,
      to_string(m->outcome), m->reroute_mandatory ? 1 : 0, m->n_blockages, m->time_used, m->deadline,
      m->route_length, m->distance_to_goal_pct, m->km_traveled, m->static_collisions, m->off_road, m->a_star_runs,
      m->max_cell_visits, m->detection_ranges.size(), mean_range);
  }
  return out;
}

std::string summary_csv(const Summary & s, const std::string & label)
{
  return fmt::format(
    "label,n,successes,success_rate_pct,mean_distance_to_goal_pct,km_traveled,static_collisions,"
    "km_per_static_collision,off_road,km_per_off_road,detections,mean_detection_range\n"
    "{},{},{},{:.2f},{:.2f},{:.6f},{},\"{}\",{},\"{}\",{},{:.3f}\n",
    label, s.n, s.successes, s.success_rate_pct, s.mean_distance_to_goal_pct, s.km_traveled, s.static_collisions,
    km_per_infraction(s.km_traveled, s.static_collisions), s.off_road, km_per_infraction(s.km_traveled, s.off_road),
    s.detections, s.mean_detection_range);
}

namespace
{

// Keeps the timed region computation from being optimized away.
volatile std::size_t g_bench_sink = 0;

double median(std::vector<double> v)
{
  if (v.empty()) {
    return 0.0;
  }
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

AreaBenchMode bench_mode(
  const std::vector<std::vector<ScanPoint>> & scans, int reps, const OgmParams & params, AreaMode mode)
{
  using clock = std::chrono::steady_clock;
  std::vector<double> region_times;
  std::vector<double> update_times;
  double cells = 0.0;
  for (const auto & scan : scans) {
    OccupancyGrid grid(params);
    position_circle(grid, 0.0, Pose2D{});
    const PreparedScan prepared = prepare_scan(grid, scan);
    if (prepared.points.empty()) {
      continue;
    }

    std::size_t sink = 0;
    auto t0 = clock::now();
    for (int r = 0; r < reps; ++r) {
      sink += affected_area(prepared, mode, grid.geometry()).size();
    }
    auto t1 = clock::now();
    region_times.push_back(std::chrono::duration<double>(t1 - t0).count() / reps);

    UpdateStats stats;
    t0 = clock::now();
    for (int r = 0; r < reps; ++r) {
      stats = apply_scan(grid, prepared, mode);
    }
    t1 = clock::now();
    update_times.push_back(std::chrono::duration<double>(t1 - t0).count() / reps);
    cells += static_cast<double>(stats.affected_cells);
    g_bench_sink = sink;
  }
  AreaBenchMode out;
  out.region_seconds = median(region_times);
  out.update_seconds = median(update_times);
  out.mean_cells = region_times.empty() ? 0.0 : cells / static_cast<double>(region_times.size());
  return out;
}

}  // namespace

AreaBenchReport bench_affected_area(
  const std::vector<std::vector<ScanPoint>> & scans, int repetitions, const OgmParams & params)
{
  if (repetitions < 1) {
    throw std::invalid_argument("bench_affected_area: repetitions must be >= 1");
  }
  AreaBenchReport report;
  report.n_scans = scans.size();
  report.repetitions = repetitions;
  report.hull = bench_mode(scans, repetitions, params, AreaMode::kConvexHull);
  report.polygon = bench_mode(scans, repetitions, params, AreaMode::kPolygon);
  return report;
}

std::string bench_report_text(const AreaBenchReport & r)
{
  return fmt::format(
    "scans,{}\nrepetitions,{}\n"
    "mode,region_ms,update_ms,mean_cells\n"
    "hull,{:.4f},{:.4f},{:.1f}\n"
    "polygon,{:.4f},{:.4f},{:.1f}\n"
    "ratio_hull_over_polygon,{:.3f},{:.3f},{:.3f}\n",
    r.n_scans, r.repetitions, r.hull.region_seconds * 1e3, r.hull.update_seconds * 1e3, r.hull.mean_cells,
    r.polygon.region_seconds * 1e3, r.polygon.update_seconds * 1e3, r.polygon.mean_cells, r.region_ratio(),
    r.update_ratio(), r.cells_ratio());
}

}  // namespace ogmnav
