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

#include <vector>

#include "ogmnav/geometry.hpp"

namespace ogmnav
{

struct BicycleParams
{
  double wheelbase{2.7};
  double max_steer{0.6};
  double horizon{3.0};
  int n_states{5};
};

struct VehicleState
{
  Pose2D pose;
  double speed{0.0};
  /// Front wheel angle in radians, positive turns left.
  double steering{0.0};
};

/// One forward-Euler step of the kinematic bicycle model.
Pose2D bicycle_step(const Pose2D & pose, double speed, double steering, double wheelbase, double dt);

/// Constant speed and steering rollout. Returns n_states poses at times
/// k * horizon / (n_states - 1), the first being the initial pose. Steering is
/// clamped to +-max_steer. Throws std::invalid_argument on invalid params.
std::vector<Pose2D> bicycle_predict(const VehicleState & state, const BicycleParams & params);

}  // namespace ogmnav
