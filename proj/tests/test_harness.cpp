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

#include <algorithm>
#include <filesystem>

#include "ogmnav/harness.hpp"
#include "ogmnav/scan_corpus.hpp"

namespace ogmnav
{
namespace
{

const std::filesystem::path kData{OGMNAV_DATA_DIR};

TEST(Deadline, TenKmPerHour)
{
  EXPECT_DOUBLE_EQ(deadline_for(500.0), 180.0);
  EXPECT_DOUBLE_EQ(deadline_for(1000.0), 360.0);
  EXPECT_DOUBLE_EQ(deadline_for(0.0), 0.0);
}

TEST(Metrics, Aggregates)
{
  std::vector<Metrics> runs(4);
  for (int i = 0; i < 4; ++i) {
    runs[i].id = std::to_string(i);
    runs[i].success = i != 2;
    runs[i].km_traveled = 0.5;
    runs[i].distance_to_goal_pct = i == 2 ? 40.0 : 100.0;
  }
  runs[2].static_collisions = 1;
  const Summary s = compute_metrics(runs);
  EXPECT_EQ(s.successes, 3u);
  EXPECT_DOUBLE_EQ(s.success_rate_pct, 75.0);
  EXPECT_DOUBLE_EQ(s.km_traveled, 2.0);
  EXPECT_DOUBLE_EQ(s.mean_distance_to_goal_pct, 85.0);
  EXPECT_EQ(km_per_infraction(s.km_traveled, s.static_collisions), "2.000");
  EXPECT_EQ(km_per_infraction(5.0, 0), ">= 5.000 km, no infraction");
  EXPECT_THROW(compute_metrics({}), std::invalid_argument);
}

TEST(Metrics, CsvHeaderAndRows)
{
  std::vector<Metrics> runs(2);
  runs[0].id = "b";
  runs[1].id = "a";
  const std::string csv = metrics_csv(runs);
  EXPECT_EQ(csv.rfind("id,success,outcome,", 0), 0u);
  EXPECT_LT(csv.find("\na,"), csv.find("\nb,"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(Config, DefaultsRoundTrip)
{
  const SimConfig c = parse_config(dump_config(SimConfig{}));
  EXPECT_DOUBLE_EQ(c.ogm.log_odd_occ, 0.9);
  EXPECT_DOUBLE_EQ(c.ogm.log_odd_free, 0.7);
  EXPECT_NEAR(c.ogm.beam_width, deg2rad(2.0), 1e-12);
  EXPECT_DOUBLE_EQ(c.planner.planner.resolution, 8.215);
  EXPECT_EQ(c.planner.blockage.route_pts, 5);
  EXPECT_DOUBLE_EQ(c.rectify.max_correction, 0.15);
  EXPECT_EQ(c.lidar.n_layers, 32);
}

TEST(Config, Overrides)
{
  const SimConfig c = parse_config(R"({"ogm": {"area_mode": "polygon", "side": 80}, "sim": {"tick_dt": 0.1}})");
  EXPECT_EQ(c.ogm.area_mode, AreaMode::kPolygon);
  EXPECT_EQ(c.ogm.side, 80);
  EXPECT_DOUBLE_EQ(c.tick_dt, 0.1);
}

TEST(Config, ErrorsNameFileAndKey)
{
  try {
    parse_config(R"({"ogm": {"sidee": 80}})", "my.json");
    FAIL();
  } catch (const std::invalid_argument & e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("my.json"), std::string::npos);
    EXPECT_NE(what.find("sidee"), std::string::npos);
  }
  EXPECT_THROW(parse_config(R"({"ogm": {"resolution": -1}})"), std::invalid_argument);
  EXPECT_THROW(parse_config(R"({"ogm": {"area_mode": "circle"}})"), std::invalid_argument);
  EXPECT_THROW(parse_config("{not json"), std::invalid_argument);
}

TEST(Scenarios, RoundTrip)
{
  const auto scenarios = load_scenarios(kData / "loop_scenario.json");
  ASSERT_EQ(scenarios.size(), 1u);
  const auto back = parse_scenarios(dump_scenarios(scenarios));
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].id, "loop");
  EXPECT_NEAR(back[0].destination.yaw, deg2rad(90.0), 1e-12);
  ASSERT_EQ(back[0].blockages.size(), 1u);
  EXPECT_EQ(back[0].blockages[0].kind, BlockageKind::kFull);
}

TEST(Generator, DeterministicAndBalanced)
{
  const World town = load_world(kData / "town2.json");
  const auto a = generate_blockage_scenarios(town, "town2", 20, 5, SimConfig{});
  const auto b = generate_blockage_scenarios(town, "town2", 20, 5, SimConfig{});
  EXPECT_EQ(dump_scenarios(a), dump_scenarios(b));
  ASSERT_EQ(a.size(), 20u);
  int mandatory = 0;
  for (const auto & s : a) {
    mandatory += s.reroute_mandatory() ? 1 : 0;
    EXPECT_GE(s.blockages.size(), 1u);
    EXPECT_LE(s.blockages.size(), 5u);
  }
  EXPECT_EQ(mandatory, 10);
  const auto c = generate_blockage_scenarios(town, "town2", 20, 6, SimConfig{});
  EXPECT_NE(dump_scenarios(a), dump_scenarios(c));
}

TEST(Run, StartAtDestinationSucceedsImmediately)
{
  const World town = load_world(kData / "straight_town.json");
  Scenario s;
  s.id = "here";
  s.start = {100, -1.75, 0};
  s.destination = s.start;
  const auto r = run_scenario(town, s, SimConfig{});
  EXPECT_TRUE(r.metrics.success);
  EXPECT_DOUBLE_EQ(r.metrics.distance_to_goal_pct, 100.0);
  EXPECT_DOUBLE_EQ(r.metrics.time_used, 0.0);
}

TEST(Run, FreeStraightRoadPlansOnce)
{
  const World town = load_world(kData / "straight_town.json");
  const auto scenarios = load_scenarios(kData / "straight_scenarios.json");
  const auto r = run_scenario(town, scenarios.at(0), SimConfig{}, RunOptions{});
  EXPECT_TRUE(r.metrics.success);
  EXPECT_EQ(r.metrics.a_star_runs, 1u);
  EXPECT_EQ(r.metrics.static_collisions, 0);
  EXPECT_EQ(r.metrics.off_road, 0);
}

TEST(Run, ClosedRoadStopsWithoutCollision)
{
  const World town = load_world(kData / "straight_town.json");
  const auto scenarios = load_scenarios(kData / "straight_scenarios.json");
  const auto r = run_scenario(town, scenarios.at(1), SimConfig{}, RunOptions{});
  EXPECT_FALSE(r.metrics.success);
  EXPECT_EQ(r.metrics.outcome, Outcome::kTimeout);
  EXPECT_EQ(r.metrics.static_collisions, 0);
  ASSERT_FALSE(r.metrics.detection_ranges.empty());
  EXPECT_GE(r.metrics.a_star_runs, 2u);
}

TEST(Run, ClosedRoadWithoutAvoidanceCollides)
{
  const World town = load_world(kData / "straight_town.json");
  const auto scenarios = load_scenarios(kData / "straight_scenarios.json");
  RunOptions off;
  off.blockage_avoidance = false;
  const auto r = run_scenario(town, scenarios.at(1), SimConfig{}, off);
  EXPECT_EQ(r.metrics.outcome, Outcome::kCollision);
  EXPECT_EQ(r.metrics.static_collisions, 1);
}

TEST(Run, AlternateRouteReplans)
{
  const World town = load_world(kData / "loop_town.json");
  const auto scenarios = load_scenarios(kData / "loop_scenario.json");
  const auto r = run_scenario(town, scenarios.at(0), SimConfig{}, RunOptions{});
  EXPECT_TRUE(r.metrics.success);
  EXPECT_GE(r.metrics.a_star_runs, 2u);
  EXPECT_GE(r.routes.size(), 2u);
}

TEST(Run, TickLogIsDeterministic)
{
  const World town = load_world(kData / "straight_town.json");
  const auto scenarios = load_scenarios(kData / "straight_scenarios.json");
  RunOptions opt;
  opt.max_time = 20.0;
  const auto a = run_scenario(town, scenarios.at(1), SimConfig{}, opt);
  const auto b = run_scenario(town, scenarios.at(1), SimConfig{}, opt);
  EXPECT_FALSE(a.tick_log.empty());
  EXPECT_EQ(a.tick_log, b.tick_log);
}

TEST(Run, PlanningFailureIsReported)
{
  const World town = load_world(kData / "straight_town.json");
  Scenario s;
  s.id = "backwards";
  s.start = {20, -1.75, 0};
  s.destination = {10, -1.75, 0};
  const auto r = run_scenario(town, s, SimConfig{});
  EXPECT_EQ(r.metrics.outcome, Outcome::kPlanningFailure);
  EXPECT_FALSE(r.metrics.success);
}

TEST(ScanCorpus, RoundTrip)
{
  const World town = load_world(kData / "town1.json");
  const auto corpus = generate_scan_corpus(town, 2, 1, SimConfig{});
  ASSERT_EQ(corpus.size(), 2u);
  const auto back = parse_scan_corpus(dump_scan_corpus(corpus));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].size(), corpus[0].size());
  EXPECT_NEAR(back[0][0].x, corpus[0][0].x, 1e-5);
  EXPECT_THROW(parse_scan_corpus("hello"), std::invalid_argument);
}

TEST(Bench, ReportsBothModes)
{
  const World town = load_world(kData / "town1.json");
  const auto corpus = generate_scan_corpus(town, 3, 2, SimConfig{});
  const auto report = bench_affected_area(corpus, 1, OgmParams{});
  EXPECT_EQ(report.n_scans, 3u);
  EXPECT_GT(report.hull.mean_cells, report.polygon.mean_cells);
  EXPECT_NE(bench_report_text(report).find("ratio_hull_over_polygon"), std::string::npos);
  EXPECT_THROW(bench_affected_area(corpus, 0, OgmParams{}), std::invalid_argument);
}

}  // namespace
}  // namespace ogmnav
