# Copyright 2026 The ogmnav Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import math
import pathlib

import numpy as np
import pytest

import ogmnav

DATA = pathlib.Path(__file__).resolve().parents[2] / "data"


def test_deadline():
    assert ogmnav.deadline_for(500.0) == pytest.approx(180.0)
    assert ogmnav.deadline_for(0.0) == 0.0


def test_default_config_is_json():
    cfg = json.loads(ogmnav.default_config())
    assert cfg["ogm"]["side"] == 160


def test_grid_wall_ahead():
    grid = ogmnav.OccupancyGrid()
    reset, lx, ly = grid.position(0.0, 0.0, 0.0, 0.0)
    assert (lx, ly) == (80.0, 80.0)
    angles = np.deg2rad(np.arange(-10.0, 10.5, 0.5))
    pts = np.stack([10.0 * np.cos(angles), 10.0 * np.sin(angles)], axis=1)
    stats = grid.apply_points(pts)
    assert stats["updated_cells"] > 0
    lo = grid.log_odds()
    assert lo.shape == (160, 160)
    assert lo[80, 90] == pytest.approx(-0.7)
    assert lo[80, 100] == pytest.approx(0.9)
    with pytest.raises(ValueError):
        grid.apply_points(pts, mode="circle")


def test_a_star_detour():
    free = np.ones((5, 5), dtype=bool)
    free[1:4, 2] = False
    path = ogmnav.a_star(free, (2, 0), (2, 4))
    assert path[0] == (2, 0) and path[-1] == (2, 4)
    assert len(path) == 9
    free[:, 2] = False
    assert ogmnav.a_star(free, (2, 0), (2, 4)) is None


def test_town_pgv_shape():
    depth, count = ogmnav.town_pgv(str(DATA / "town1.json"), 50.0, -1.75, 0.0)
    assert depth.shape == (32, 360)
    assert count.shape == (32, 360)
    assert count.max() >= 1


def test_straight_run():
    m = ogmnav.run_scenario(str(DATA / "straight_town.json"), str(DATA / "straight_scenarios.json"), 0)
    assert m["success"]
    assert m["a_star_runs"] == 1
    assert m["time_used"] <= m["deadline"]
    assert not math.isnan(m["km_traveled"])
