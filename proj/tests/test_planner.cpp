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
#include <random>

#include "ogmnav/planner.hpp"
#include "ogmnav/route_planner.hpp"
#include "support/reference.hpp"

namespace ogmnav
{
namespace
{

PlanningMap open_map(int rows, int cols)
{
  PlanningMap map(rows, cols, 1.0, {0, 0});
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      map.set_free({r, c}, true);
    }
  }
  return map;
}

std::vector<Road> cross_roads()
{
  return {Road{{-50, 0}, {50, 0}}, Road{{0, -50}, {0, 50}}};
}

TEST(Graph, FourWayCross)
{
  const RoadGraph g = build_world_graph(cross_roads());
  EXPECT_EQ(g.nodes.size(), 5u);
  ASSERT_EQ(g.intersections.size(), 1u);
  const Vec2 center = g.nodes[g.intersections[0]];
  EXPECT_DOUBLE_EQ(center.x, 0.0);
  EXPECT_DOUBLE_EQ(center.y, 0.0);
  EXPECT_EQ(g.degree(g.intersections[0]), 4);
}

TEST(Graph, DisjointParallelRoads)
{
  const RoadGraph g = build_world_graph({Road{{0, 0}, {100, 0}}, Road{{0, 20}, {100, 20}}});
  EXPECT_EQ(g.nodes.size(), 4u);
  EXPECT_TRUE(g.intersections.empty());
}

TEST(Graph, TJunctionWeights)
{
  const RoadGraph g = build_world_graph({Road{{-30, 0}, {0, 0}}, Road{{0, 0}, {40, 0}}, Road{{0, 0}, {0, 50}}});
  std::multiset<double> weights;
  for (const auto & e : g.edges) {
    weights.insert(e.weight);
  }
  EXPECT_EQ(weights, (std::multiset<double>{30, 30, 40, 40, 50, 50}));
  EXPECT_EQ(g.intersections.size(), 1u);
}

TEST(Graph, Errors)
{
  EXPECT_THROW(build_world_graph({}), std::invalid_argument);
  EXPECT_THROW(build_world_graph({Road{{1, 1}, {1, 1}}}), std::invalid_argument);
}

TEST(PlanningMapTest, StraightCorridor)
{
  const PlanningMap map = build_planning_map(build_world_graph({Road{{0, 0}, {82.15, 0}}}), 8.215);
  EXPECT_EQ(map.rows(), 1);
  EXPECT_EQ(map.cols(), 10);
  for (int c = 0; c < 10; ++c) {
    EXPECT_TRUE(map.is_free({0, c}));
  }
}

TEST(PlanningMapTest, CrossSharesOneCell)
{
  const PlanningMap map = build_planning_map(build_world_graph(cross_roads()), 10.0);
  int free = 0;
  for (int r = 0; r < map.rows(); ++r) {
    for (int c = 0; c < map.cols(); ++c) {
      free += map.is_free({r, c}) ? 1 : 0;
    }
  }
  EXPECT_EQ(map.rows(), 10);
  EXPECT_EQ(free, 10 + 10 - 1);
  EXPECT_THROW(build_planning_map(RoadGraph{}, 8.215), std::invalid_argument);
}

TEST(Walls, DirectedWallIsOneWay)
{
  PlanningMap map = open_map(3, 3);
  const GridIndex c{1, 1};
  map.add_directed_wall(c, Direction::kWest);
  EXPECT_FALSE(map.can_enter(c, Direction::kWest));
  EXPECT_TRUE(map.can_enter(c, Direction::kSouth));
  map.add_directed_wall(c, Direction::kEast);
  EXPECT_FALSE(map.can_enter(c, Direction::kEast));
  EXPECT_TRUE(map.can_enter(c, Direction::kNorth));
  EXPECT_EQ(map.blocked_mask(c), direction_bit(Direction::kWest) | direction_bit(Direction::kEast));
  map.add_full_wall(c);
  for (Direction d : {Direction::kNorth, Direction::kEast, Direction::kSouth, Direction::kWest}) {
    EXPECT_FALSE(map.can_enter(c, d));
  }
  map.clear_walls(c);
  EXPECT_EQ(map.blocked_mask(c), 0);
}

TEST(Walls, AStarHonorsApproach)
{
  PlanningMap map = open_map(3, 3);
  map.add_directed_wall({1, 1}, Direction::kWest);
  // West to east through the middle is refused, the detour enters from the south.
  const auto path = a_star(map, {1, 0}, {1, 2});
  ASSERT_TRUE(path);
  EXPECT_EQ(std::find(path->begin(), path->end(), GridIndex{1, 1}), path->end());
  const auto up = a_star(map, {0, 1}, {2, 1});
  ASSERT_TRUE(up);
  EXPECT_EQ(up->size(), 3u);
}

TEST(AStar, Identity)
{
  const PlanningMap map = open_map(4, 4);
  const auto path = a_star(map, {2, 2}, {2, 2});
  ASSERT_TRUE(path);
  EXPECT_EQ(*path, (std::vector<GridIndex>{GridIndex{2, 2}}));
}

TEST(AStar, StraightLine)
{
  const PlanningMap map = open_map(10, 10);
  const auto path = a_star(map, {0, 0}, {0, 5});
  ASSERT_TRUE(path);
  EXPECT_EQ(path->size(), 6u);
  EXPECT_EQ(count_turns(*path), 0);
}

TEST(AStar, PrefersFewerTurns)
{
  // Two equal-length routes around a block: one is an L, the other zig-zags.
  PlanningMap map(8, 8, 1.0, {0, 0});
  for (int c = 0; c < 5; ++c) {
    map.set_free({0, c}, true);
  }
  for (int r = 0; r < 5; ++r) {
    map.set_free({r, 4}, true);
  }
  map.set_free({1, 0}, true);
  map.set_free({1, 1}, true);
  map.set_free({2, 1}, true);
  map.set_free({2, 2}, true);
  map.set_free({3, 2}, true);
  map.set_free({3, 3}, true);
  map.set_free({4, 3}, true);
  const auto path = a_star(map, {0, 0}, {4, 4});
  ASSERT_TRUE(path);
  EXPECT_EQ(path->size(), 9u);
  EXPECT_EQ(count_turns(*path), 1);
}

TEST(AStar, MatchesBfsOnRandomGrids)
{
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0, 1);
  for (int trial = 0; trial < 30; ++trial) {
    PlanningMap map(30, 30, 1.0, {0, 0});
    for (int r = 0; r < 30; ++r) {
      for (int c = 0; c < 30; ++c) {
        map.set_free({r, c}, unit(rng) < 0.7);
        if (unit(rng) < 0.05) {
          map.add_directed_wall({r, c}, static_cast<Direction>(rng() % 4));
        }
      }
    }
    const GridIndex s{static_cast<int>(rng() % 30), static_cast<int>(rng() % 30)};
    const GridIndex g{static_cast<int>(rng() % 30), static_cast<int>(rng() % 30)};
    const auto path = a_star(map, s, g);
    const auto expected = reference::bfs_length(map, s, g);
    ASSERT_EQ(path.has_value(), expected.has_value()) << "trial " << trial;
    if (path) {
      EXPECT_EQ(path->size(), *expected);
      EXPECT_TRUE(reference::path_is_legal(map, *path));
    }
  }
}

TEST(AStar, MinimizesTurnsAmongShortest)
{
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unit(0, 1);
  for (int trial = 0; trial < 40; ++trial) {
    PlanningMap map(6, 6, 1.0, {0, 0});
    for (int r = 0; r < 6; ++r) {
      for (int c = 0; c < 6; ++c) {
        map.set_free({r, c}, unit(rng) < 0.8);
      }
    }
    map.set_free({0, 0}, true);
    map.set_free({5, 5}, true);
    const auto path = a_star(map, {0, 0}, {5, 5});
    const auto best = reference::min_turns_over_shortest(map, {0, 0}, {5, 5});
    ASSERT_EQ(path.has_value(), best.has_value());
    if (path) {
      EXPECT_EQ(count_turns(*path), *best) << "trial " << trial;
    }
  }
}

TEST(AStar, Unreachable)
{
  PlanningMap map = open_map(1, 5);
  map.set_free({0, 2}, false);
  EXPECT_FALSE(a_star(map, {0, 0}, {0, 4}));
  EXPECT_FALSE(a_star(map, {0, 0}, {0, 2}));
}

TEST(Commands, LeftTurnWindow)
{
  // East along row 0 to column 6, then north.
  std::vector<GridIndex> cells;
  for (int c = 0; c <= 6; ++c) {
    cells.push_back({0, c});
  }
  for (int r = 1; r <= 4; ++r) {
    cells.push_back({r, 6});
  }
  const std::set<GridIndex> inter{{0, 6}};
  const auto cmds = assign_commands(cells, inter, PlannerParams{});
  ASSERT_EQ(cmds.size(), cells.size());
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    const bool in_window = i >= 2 && i <= 7;
    EXPECT_EQ(cmds[i], in_window ? NavCommand::kGoLeft : NavCommand::kFollowLane) << "i=" << i;
  }
}

TEST(Commands, RightTurnAndStraight)
{
  std::vector<GridIndex> right;
  for (int c = 0; c <= 5; ++c) {
    right.push_back({5, c});
  }
  for (int r = 4; r >= 0; --r) {
    right.push_back({r, 5});
  }
  EXPECT_EQ(assign_commands(right, {{5, 5}}, PlannerParams{})[5], NavCommand::kGoRight);

  std::vector<GridIndex> straight;
  for (int c = 0; c <= 10; ++c) {
    straight.push_back({0, c});
  }
  const auto cmds = assign_commands(straight, {{0, 5}}, PlannerParams{});
  EXPECT_EQ(cmds[5], NavCommand::kGoStraight);
  EXPECT_EQ(cmds[1], NavCommand::kGoStraight);
  EXPECT_EQ(cmds[6], NavCommand::kGoStraight);
  EXPECT_EQ(cmds[7], NavCommand::kFollowLane);
  const auto none = assign_commands(straight, {}, PlannerParams{});
  EXPECT_TRUE(std::all_of(none.begin(), none.end(), [](NavCommand c) { return c == NavCommand::kFollowLane; }));
  // Intersection at the route end has no outgoing direction.
  EXPECT_EQ(assign_commands(straight, {{0, 10}}, PlannerParams{})[10], NavCommand::kGoStraight);
}

TEST(Progress, Rules)
{
  Route route = make_route({{0, 0}, {0, 1}, {0, 2}, {0, 3}}, std::vector<NavCommand>(4, NavCommand::kFollowLane));
  EXPECT_EQ(route.next, 1u);
  EXPECT_EQ(route_progress(route, {0, 0}), Progress::kUnchanged);
  EXPECT_EQ(route_progress(route, {0, 1}), Progress::kAdvanced);
  EXPECT_EQ(route.next, 2u);
  EXPECT_EQ(route_progress(route, {0, 1}), Progress::kUnchanged);
  EXPECT_EQ(route_progress(route, {5, 5}), Progress::kExited);
  EXPECT_TRUE(route.route_exited);
}

TEST(RoutePlannerTest, StraightRoadFollowsLane)
{
  const std::vector<Road> roads{Road{{0, 0}, {200, 0}}};
  RoutePlanner planner(roads, Pose2D{180, -1.75, 0}, RoutePlannerConfig{});
  const auto out = planner.plan_step(Pose2D{10, -1.75, 0}, nullptr);
  EXPECT_EQ(out.status, PlanStatus::kOk);
  EXPECT_EQ(out.command, NavCommand::kFollowLane);
  EXPECT_TRUE(out.replanned);
  const auto & cells = planner.route().cells;
  ASSERT_FALSE(cells.empty());
  EXPECT_EQ(cells.front(), planner.cell_of({10, -1.75}));
  EXPECT_EQ(cells.back(), planner.destination_cell());
  const auto again = planner.plan_step(Pose2D{11, -1.75, 0}, nullptr);
  EXPECT_FALSE(again.replanned);
  EXPECT_EQ(planner.a_star_runs(), 1u);
}

TEST(RoutePlannerTest, GoalReachedNeedsHeading)
{
  const std::vector<Road> roads{Road{{0, 0}, {200, 0}}};
  RoutePlanner planner(roads, Pose2D{100, -1.75, 0}, RoutePlannerConfig{});
  EXPECT_EQ(planner.plan_step(Pose2D{100, -1.75, 0.2}, nullptr).status, PlanStatus::kGoalReached);
  RoutePlanner other(roads, Pose2D{100, -1.75, 0}, RoutePlannerConfig{});
  EXPECT_NE(other.plan_step(Pose2D{100, 1.75, std::numbers::pi}, nullptr).status, PlanStatus::kGoalReached);
}

TEST(RoutePlannerTest, ReplanAvoidsBlockedApproach)
{
  // Ring road: the blocked eastbound approach forces the long way round.
  const std::vector<Road> roads{
    Road{{0, 0}, {100, 0}}, Road{{100, 0}, {100, 100}}, Road{{100, 100}, {0, 100}}, Road{{0, 100}, {0, 0}},
    Road{{100, 0}, {200, 0}}};
  RoutePlanner planner(roads, Pose2D{180, -1.75, 0}, RoutePlannerConfig{});
  ASSERT_EQ(planner.plan_step(Pose2D{10, -1.75, 0}, nullptr).status, PlanStatus::kOk);
  PlanningMap walled = planner.map();
  const GridIndex blocked = planner.cell_of({50, 0});
  walled.add_directed_wall(blocked, Direction::kWest);
  // Same query on the walled map: reachable, and never enters the wall.
  const auto path = a_star(walled, planner.route().cells.front(), planner.destination_cell());
  ASSERT_TRUE(path);
  EXPECT_TRUE(reference::path_is_legal(walled, *path));
  EXPECT_EQ(std::find(path->begin(), path->end(), blocked), path->end());
}

TEST(RoutePlannerTest, NoRouteIsPlanningFailure)
{
  const std::vector<Road> roads{Road{{0, 0}, {100, 0}}};
  // Destination faces the car; it cannot turn around on a one-way corridor.
  RoutePlanner planner(roads, Pose2D{50, 1.75, std::numbers::pi}, RoutePlannerConfig{});
  EXPECT_EQ(planner.plan_step(Pose2D{10, -1.75, 0}, nullptr).status, PlanStatus::kPlanningFailure);
}

TEST(Render, PngSignature)
{
  const PlanningMap map = build_planning_map(build_world_graph(cross_roads()), 10.0);
  const auto png = render_planning_map(map, {});
  ASSERT_GT(png.size(), 8u);
  EXPECT_EQ(png[1], 'P');
  EXPECT_EQ(png[2], 'N');
  EXPECT_EQ(png[3], 'G');
}

}  // namespace
}  // namespace ogmnav
