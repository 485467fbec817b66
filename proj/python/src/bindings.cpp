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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "ogmnav/harness.hpp"
#include "ogmnav/ogm.hpp"
#include "ogmnav/planner.hpp"
#include "ogmnav/sensor_sim.hpp"

namespace py = pybind11;
using namespace ogmnav;

namespace
{

AreaMode area_mode_of(const std::string & name)
{
  if (name == "hull") {
    return AreaMode::kConvexHull;
  }
  if (name == "polygon") {
    return AreaMode::kPolygon;
  }
  throw std::invalid_argument("area mode must be 'hull' or 'polygon', got '" + name + "'");
}

WallMode wall_mode_of(const std::string & name)
{
  if (name == "directed") {
    return WallMode::kDirected;
  }
  if (name == "remove_when_left") {
    return WallMode::kRemoveWhenLeft;
  }
  throw std::invalid_argument("wall mode must be 'directed' or 'remove_when_left', got '" + name + "'");
}

py::array_t<double> grid_values(const OccupancyGrid & grid)
{
  const auto cells = grid.cells();
  py::array_t<double> out({grid.side(), grid.side()});
  std::copy(cells.begin(), cells.end(), out.mutable_data());
  return out;
}

py::dict stats_dict(const UpdateStats & s)
{
  py::dict d;
  d["n_points"] = s.n_points;
  d["affected_cells"] = s.affected_cells;
  d["updated_cells"] = s.updated_cells;
  d["gap_cells"] = s.gap_cells;
  return d;
}

// Points in the sensor frame, meters, shape (n, 2).
UpdateStats apply_points(OccupancyGrid & grid, py::array_t<double, py::array::c_style | py::array::forcecast> pts,
  const std::string & mode)
{
  if (pts.ndim() != 2 || pts.shape(1) != 2) {
    throw std::invalid_argument("points must have shape (n, 2)");
  }
  std::vector<Vec2> v(static_cast<std::size_t>(pts.shape(0)));
  const auto r = pts.unchecked<2>();
  for (py::ssize_t i = 0; i < pts.shape(0); ++i) {
    v[i] = {r(i, 0), r(i, 1)};
  }
  return apply_scan(grid, prepare_points(grid, v), area_mode_of(mode));
}

py::object plan(py::array_t<bool, py::array::c_style | py::array::forcecast> free, std::pair<int, int> start,
  std::pair<int, int> goal)
{
  if (free.ndim() != 2) {
    throw std::invalid_argument("free mask must be 2-D");
  }
  const int rows = static_cast<int>(free.shape(0));
  const int cols = static_cast<int>(free.shape(1));
  PlanningMap map(rows, cols, 1.0, {0.0, 0.0});
  const auto f = free.unchecked<2>();
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      map.set_free({r, c}, f(r, c));
    }
  }
  const auto path = a_star(map, {start.first, start.second}, {goal.first, goal.second});
  if (!path) {
    return py::none();
  }
  py::list out;
  for (const auto & cell : *path) {
    out.append(py::make_tuple(cell.row, cell.col));
  }
  return out;
}

py::tuple town_pgv(const std::string & town_path, double x, double y, double yaw)
{
  const World town = load_world(town_path);
  const LidarConfig lidar;
  const PgvImage img = encode_pgv(raycast_scan(town, {x, y, yaw}, lidar), lidar);
  py::array_t<double> depth({img.rows, img.cols});
  py::array_t<int> count({img.rows, img.cols});
  std::copy(img.depth.begin(), img.depth.end(), depth.mutable_data());
  std::copy(img.contributors.begin(), img.contributors.end(), count.mutable_data());
  return py::make_tuple(depth, count);
}

py::dict run(const std::string & town_path, const std::string & scenarios_path, std::size_t index,
  bool blockage_avoidance, const std::string & wall_mode)
{
  const World town = load_world(town_path);
  const auto scenarios = load_scenarios(scenarios_path);
  if (index >= scenarios.size()) {
    throw std::out_of_range("scenario index out of range");
  }
  RunOptions opt;
  opt.blockage_avoidance = blockage_avoidance;
  opt.wall_mode = wall_mode_of(wall_mode);
  opt.tick_log = false;
  const Metrics m = run_scenario(town, scenarios[index], SimConfig{}, opt).metrics;
  py::dict d;
  d["id"] = m.id;
  d["success"] = m.success;
  d["outcome"] = std::string(to_string(m.outcome));
  d["time_used"] = m.time_used;
  d["deadline"] = m.deadline;
  d["route_length"] = m.route_length;
  d["distance_to_goal_pct"] = m.distance_to_goal_pct;
  d["km_traveled"] = m.km_traveled;
  d["static_collisions"] = m.static_collisions;
  d["a_star_runs"] = m.a_star_runs;
  d["max_cell_visits"] = m.max_cell_visits;
  d["detection_ranges"] = m.detection_ranges;
  return d;
}

}  // namespace

PYBIND11_MODULE(_ogmnav, m)
{
  m.doc() = "Local occupancy grid navigation with blockage avoidance";

  m.def("deadline_for", &deadline_for, py::arg("route_length"), py::arg("speed_kmh") = 10.0,
    "Time budget in seconds for a route length in meters.");
  m.def("default_config", [] { return dump_config(SimConfig{}); }, "Default configuration as JSON text.");

  py::class_<OccupancyGrid>(m, "OccupancyGrid")
    .def(py::init([](int side, double resolution) {
      OgmParams p;
      p.side = side;
      p.resolution = resolution;
      return OccupancyGrid(p);
    }),
      py::arg("side") = 160, py::arg("resolution") = 0.5)
    .def_property_readonly("side", &OccupancyGrid::side)
    .def_property_readonly("resolution", &OccupancyGrid::resolution)
    .def(
      "position",
      [](OccupancyGrid & g, double speed, double x, double y, double yaw) {
        const auto u = position_circle(g, speed, {x, y, yaw});
        return py::make_tuple(u.reset, g.local_pose().x, g.local_pose().y);
      },
      py::arg("speed"), py::arg("x"), py::arg("y"), py::arg("yaw"),
      "Moves the map for a new vehicle pose. Returns (reset, local_x, local_y).")
    .def(
      "apply_points",
      [](OccupancyGrid & g, py::array_t<double, py::array::c_style | py::array::forcecast> pts, const std::string & mode) {
        return stats_dict(apply_points(g, pts, mode));
      },
      py::arg("points"), py::arg("mode") = "hull", "Inverse sensor model for sensor-frame (n, 2) points.")
    .def("log_odds", &grid_values, "Copy of the log-odds as a (side, side) array, row = y.")
    .def("clear", &OccupancyGrid::clear);

  m.def("a_star", &plan, py::arg("free"), py::arg("start"), py::arg("goal"),
    "Shortest path with fewest turns on a boolean grid; list of (row, col) or None.");
  m.def("town_pgv", &town_pgv, py::arg("town"), py::arg("x"), py::arg("y"), py::arg("yaw"),
    "Simulated scan of a town file as (depth, contributors) arrays.");
  m.def("run_scenario", &run, py::arg("town"), py::arg("scenarios"), py::arg("index") = 0,
    py::arg("blockage_avoidance") = true, py::arg("wall_mode") = "directed", "Runs one scenario; returns its metrics.");
}
