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
"""Local occupancy grid navigation with blockage avoidance."""

from ogmnav._ogmnav import (
    OccupancyGrid,
    a_star,
    deadline_for,
    default_config,
    run_scenario,
    town_pgv,
)

__all__ = [
    "OccupancyGrid",
    "a_star",
    "deadline_for",
    "default_config",
    "run_scenario",
    "town_pgv",
]
