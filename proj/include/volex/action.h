// Copyright 2026 The Volex Authors.
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

// Robot dynamics and the ground-set elements of the planning problem: one
// robot paired with an L-step control sequence.

#ifndef VOLEX_ACTION_H_
#define VOLEX_ACTION_H_

#include <span>
#include <string_view>
#include <vector>

#include "volex/sensing.h"

namespace volex {

inline constexpr double kTranslationStep = 0.3;

enum class Control {
  kForward,
  kBack,
  kUp,
  kDown,
  kYawLeft,   // +pi/2
  kYawRight,  // -pi/2
  kLeft,
  kRight,
};

std::string_view ControlName(Control u);

// Default 6-action set and the 8-action variant with lateral translations.
// Order is the fixed tie-break order used by the planners.
std::span<const Control> SixControls();
std::span<const Control> EightControls();

bool IsYaw(Control u);

RobotState ApplyDynamics(const RobotState& state, Control u,
                         double step = kTranslationStep);

struct TrajectoryAction {
  int robot = 0;
  std::vector<Control> controls;
  // states[0] is the current state; states[l] = f(states[l-1], controls[l-1]).
  std::vector<RobotState> states;

  static TrajectoryAction FromControls(int robot, const RobotState& start,
                                       std::span<const Control> controls);
  int horizon() const { return static_cast<int>(controls.size()); }
  bool operator==(const TrajectoryAction& other) const {
    return robot == other.robot && controls == other.controls &&
           states.front() == other.states.front();
  }
};

// At most one action per robot: an independent set of the partition matroid.
using Assignment = std::vector<TrajectoryAction>;

bool IsIndependent(std::span<const TrajectoryAction> assignment);

}  // namespace volex

#endif  // VOLEX_ACTION_H_
