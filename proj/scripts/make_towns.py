#!/usr/bin/env python3
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
"""Writes the packaged town and scenario files under data/."""

import argparse
import json
import pathlib

LANE = 3.5
INSET = 8.5
HEIGHT = 8.0
STRIP = 12.0


def road(x1, y1, x2, y2):
    return {"x1": x1, "y1": y1, "x2": x2, "y2": y2, "lane_width": LANE}


def box(x0, y0, x1, y1, height=HEIGHT, label="static"):
    return {
        "cx": (x0 + x1) / 2.0,
        "cy": (y0 + y1) / 2.0,
        "hx": (x1 - x0) / 2.0,
        "hy": (y1 - y0) / 2.0,
        "height": height,
        "label": label,
    }


def block(x0, y0, x1, y1):
    # Building filling the block between four road centerlines.
    return box(x0 + INSET, y0 + INSET, x1 - INSET, y1 - INSET)


def strips(x0, y0, x1, y1):
    # Buildings just outside the outer roads of a rectangular town.
    return [
        box(x0 - INSET, y0 - INSET - STRIP, x1 + INSET, y0 - INSET),
        box(x0 - INSET, y1 + INSET, x1 + INSET, y1 + INSET + STRIP),
        box(x0 - INSET - STRIP, y0 - INSET, x0 - INSET, y1 + INSET),
        box(x1 + INSET, y0 - INSET, x1 + INSET + STRIP, y1 + INSET),
    ]


def town1():
    # Ladder of rungs every 100 m plus a loop on top of the west half.
    roads = [
        road(0, 0, 400, 0),
        road(0, 100, 400, 100),
        road(0, 200, 200, 200),
        road(0, 0, 0, 200),
        road(100, 0, 100, 100),
        road(200, 0, 200, 200),
        road(300, 0, 300, 100),
        road(400, 0, 400, 100),
    ]
    obstacles = [block(x, 0, x + 100, 100) for x in (0, 100, 200, 300)]
    obstacles.append(block(0, 100, 200, 200))
    obstacles += [
        box(-INSET, -INSET - STRIP, 400 + INSET, -INSET),
        box(-INSET, 200 + INSET, 200 + INSET, 200 + INSET + STRIP),
        box(-INSET - STRIP, -INSET, -INSET, 200 + INSET),
        box(400 + INSET, -INSET, 400 + INSET + STRIP, 100 + INSET),
        box(200 + INSET, 100 + INSET, 400 + INSET, 200 + INSET),
    ]
    return {"roads": roads, "obstacles": obstacles}


def town2():
    # 4 x 4 grid, 80 m blocks.
    xs = [0, 80, 160, 240]
    roads = [road(0, y, 240, y) for y in xs] + [road(x, 0, x, 240) for x in xs]
    obstacles = [block(x, y, x + 80, y + 80) for x in xs[:-1] for y in xs[:-1]]
    obstacles += strips(0, 0, 240, 240)
    return {"roads": roads, "obstacles": obstacles}


LOOP_NODES = {
    "W": (-400, 0),
    "A": (0, 0),
    "B": (60, 0),
    "C": (160, 0),
    "N": (160, 100),
    "S0": (0, -50),
    "S1": (60, -50),
    "S2": (60, -200),
    "T": (160, -200),
}
LOOP_EDGES = [
    ("W", "A"), ("A", "B"), ("B", "C"), ("C", "N"), ("A", "S0"),
    ("S0", "S1"), ("B", "S1"), ("S1", "S2"), ("S2", "T"), ("T", "C"),
]


def loop_town():
    roads = [road(*LOOP_NODES[a], *LOOP_NODES[b]) for a, b in LOOP_EDGES]
    obstacles = [
        block(0, -50, 60, 0),
        block(60, -200, 160, 0),
        box(-400, INSET, 160 - INSET, INSET + STRIP),
        box(-400, -INSET - STRIP, -INSET, -INSET),
        box(INSET, -200, 60 - INSET, -50 - INSET),
        box(160 + INSET, -200, 160 + INSET + STRIP, 100),
    ]
    return {"roads": roads, "obstacles": obstacles}


def straight_town():
    roads = [road(0, 0, 400, 0)]
    obstacles = [
        box(-INSET, INSET, 400 + INSET, INSET + STRIP),
        box(-INSET, -INSET - STRIP, 400 + INSET, -INSET),
    ]
    return {"roads": roads, "obstacles": obstacles}


def pose(x, y, yaw_deg):
    return {"x": x, "y": y, "yaw_deg": yaw_deg}


def loop_scenarios():
    half = LANE / 2.0
    return {
        "scenarios": [
            {
                "id": "loop",
                "town": "loop_town.json",
                "start": pose(-380, -half, 0),
                "destination": pose(160 + half, 60, 90),
                "seed": 0,
                # Eastbound lane closed between B and C.
                "blockages": [
                    {"kind": "full", "cx": 75.0, "cy": -half, "hx": 1.0, "hy": half, "height": 1.8},
                ],
            }
        ]
    }


def straight_scenarios():
    half = LANE / 2.0
    closed = {"kind": "full", "cx": 250.0, "cy": 0.0, "hx": 1.0, "hy": 3.6, "height": 1.8}
    return {
        "scenarios": [
            {
                "id": "straight_free",
                "town": "straight_town.json",
                "start": pose(20, -half, 0),
                "destination": pose(380, -half, 0),
                "seed": 0,
                "blockages": [],
            },
            {
                "id": "straight_closed",
                "town": "straight_town.json",
                "start": pose(20, -half, 0),
                "destination": pose(380, -half, 0),
                "seed": 0,
                "blockages": [closed],
            },
        ]
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data"))
    args = parser.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "town1.json": town1(),
        "town2.json": town2(),
        "loop_town.json": loop_town(),
        "straight_town.json": straight_town(),
        "loop_scenario.json": loop_scenarios(),
        "straight_scenarios.json": straight_scenarios(),
    }
    for name, content in files.items():
        (out / name).write_text(json.dumps(content, indent=2) + "\n")
        print(out / name)


if __name__ == "__main__":
    main()
