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

// Closed-loop scenario runner, blockage scenario generation, metrics and the
// affected-area micro-benchmark.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ogmnav/bicycle.hpp"
#include "ogmnav/blockage.hpp"
#include "ogmnav/controller.hpp"
#include "ogmnav/ogm.hpp"
#include "ogmnav/route_planner.hpp"
#include "ogmnav/sensor_sim.hpp"
#include "ogmnav/world.hpp"

namespace ogmnav
{

struct VehicleParams
{
  double length{4.5};
  double width{2.0};
  double max_accel{3.0};
  double max_decel{8.0};
};

struct SimConfig
{
  LidarConfig lidar;
  /// Static points above this world height are dropped before mapping.
  double filter_height{2.5};
  OgmParams ogm;
  RoutePlannerConfig planner;
  RectifyParams rectify;
  ControllerParams controller;
  BicycleParams bicycle;
  VehicleParams vehicle;
  double tick_dt{0.05};
  double lidar_period{0.1};
  /// Deadline speed along the initial shortest route, km/h.
  double deadline_speed_kmh{10.0};
  /// Lane cells handed to the controller.
  int controller_cells{8};
};

/// Reads a JSON config; every key is optional and unknown keys are errors.
/// Angles are given in degrees. Errors name the file and key.
SimConfig parse_config(const std::string & text, const std::string & origin = "<string>");
SimConfig load_config(const std::filesystem::path & path);
std::string dump_config(const SimConfig & config);

enum class BlockageKind : std::uint8_t { kFull, kOppositeLane, kOffLane };

std::string_view to_string(BlockageKind kind);

struct Blockage
{
  Box box;
  BlockageKind kind{BlockageKind::kFull};
};

struct Scenario
{
  std::string id;
  std::string town;
  Pose2D start;
  Pose2D destination;
  std::vector<Blockage> blockages;
  std::uint64_t seed{0};
  /// Overrides the config tick when positive.
  double tick_dt{0.0};

  bool reroute_mandatory() const;
};

std::vector<Scenario> parse_scenarios(const std::string & text, const std::string & origin = "<string>");
std::vector<Scenario> load_scenarios(const std::filesystem::path & path);
std::string dump_scenarios(const std::vector<Scenario> & scenarios);

/// Seconds allowed for a route of the given length at 10 km/h.
double deadline_for(double shortest_route_length, double speed_kmh = 10.0);

enum class Outcome : std::uint8_t { kSuccess, kTimeout, kCollision, kPlanningFailure };

std::string_view to_string(Outcome outcome);

struct Metrics
{
  std::string id;
  bool success{false};
  Outcome outcome{Outcome::kTimeout};
  bool reroute_mandatory{false};
  std::size_t n_blockages{0};
  double time_used{0.0};
  double deadline{0.0};
  double route_length{0.0};
  double distance_to_goal_pct{0.0};
  double km_traveled{0.0};
  int static_collisions{0};
  int off_road{0};
  std::size_t a_star_runs{0};
  int max_cell_visits{0};
  std::vector<double> detection_ranges;
};

struct RunOptions
{
  bool blockage_avoidance{true};
  WallMode wall_mode{WallMode::kDirected};
  std::optional<AreaMode> area_mode;
  bool tick_log{true};
  /// Writes final OGM and planning map images here when set.
  std::optional<std::filesystem::path> export_dir;
  /// Hard cap on simulated time; 0 means deadline only.
  double max_time{0.0};
};

struct ScenarioResult
{
  Metrics metrics;
  std::string tick_log;
  std::vector<BlockageEvent> events;
  std::vector<std::vector<GridIndex>> routes;
};

/// World used by a run: town buildings plus the scenario blockages.
World scenario_world(const World & town, const Scenario & scenario);

ScenarioResult run_scenario(
  const World & town, const Scenario & scenario, const SimConfig & config, const RunOptions & options = {});

/// Scenarios alternate between one full road closure (plus partial
/// blockages) and partial blockages only, so ceil(n / 2) mandate a reroute.
/// Blockage counts are uniform in [1, 5]. Throws std::runtime_error when the
/// town offers no reroutable placement.
std::vector<Scenario> generate_blockage_scenarios(
  const World & town, const std::string & town_name, int n, std::uint64_t seed, const SimConfig & config);

struct Summary
{
  std::size_t n{0};
  std::size_t successes{0};
  double success_rate_pct{0.0};
  double mean_distance_to_goal_pct{0.0};
  double km_traveled{0.0};
  int static_collisions{0};
  int off_road{0};
  std::size_t detections{0};
  double mean_detection_range{0.0};
};

/// Throws std::invalid_argument on empty input.
Summary compute_metrics(const std::vector<Metrics> & runs);

/// "2.000" km per infraction, or ">= 5.000 km, no infraction".
std::string km_per_infraction(double km, int count);

std::string metrics_csv(const std::vector<Metrics> & runs);
std::string summary_csv(const Summary & summary, const std::string & label);

struct AreaBenchMode
{
  double region_seconds{0.0};
  double update_seconds{0.0};
  double mean_cells{0.0};
};

struct AreaBenchReport
{
  std::size_t n_scans{0};
  int repetitions{0};
  AreaBenchMode hull;
  AreaBenchMode polygon;

  double region_ratio() const { return hull.region_seconds / polygon.region_seconds; }
  double update_ratio() const { return hull.update_seconds / polygon.update_seconds; }
  double cells_ratio() const { return hull.mean_cells / polygon.mean_cells; }
};

/// Median per-scan wall clock of the affected-area computation and of the
/// full inverse-model update, for both area modes. Scans are filtered
/// sensor-frame scans; each is applied to a fresh grid.
AreaBenchReport bench_affected_area(
  const std::vector<std::vector<ScanPoint>> & scans, int repetitions, const OgmParams & params);

std::string bench_report_text(const AreaBenchReport & report);

}  // namespace ogmnav
