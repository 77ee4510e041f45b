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

#include "volex/action.h"

#include <array>
#include <set>

namespace volex {
namespace {

constexpr std::array<Control, 6> kSix = {
    Control::kForward, Control::kBack,    Control::kUp,
    Control::kDown,    Control::kYawLeft, Control::kYawRight};

constexpr std::array<Control, 8> kEight = {
    Control::kForward, Control::kBack,     Control::kUp,   Control::kDown,
    Control::kYawLeft, Control::kYawRight, Control::kLeft, Control::kRight};

}  // namespace

std::string_view ControlName(Control u) {
  switch (u) {
    case Control::kForward:
      return "forward";
    case Control::kBack:
      return "back";
    case Control::kUp:
      return "up";
    case Control::kDown:
      return "down";
    case Control::kYawLeft:
      return "yaw+";
    case Control::kYawRight:
      return "yaw-";
    case Control::kLeft:
      return "left";
    case Control::kRight:
      return "right";
  }
  return "?";
}

std::span<const Control> SixControls() { return kSix; }
std::span<const Control> EightControls() { return kEight; }

bool IsYaw(Control u) {
  return u == Control::kYawLeft || u == Control::kYawRight;
}

RobotState ApplyDynamics(const RobotState& state, Control u, double step) {
  RobotState next = state;
  Eigen::Vector3d body = Eigen::Vector3d::Zero();
  switch (u) {
    case Control::kForward:
      body.x() = step;
      break;
    case Control::kBack:
      body.x() = -step;
      break;
    case Control::kLeft:
      body.y() = step;
      break;
    case Control::kRight:
      body.y() = -step;
      break;
    case Control::kUp:
      body.z() = step;
      break;
    case Control::kDown:
      body.z() = -step;
      break;
    case Control::kYawLeft:
      next.yaw_quarters = (state.yaw_quarters + 1) % 4;
      return next;
    case Control::kYawRight:
      next.yaw_quarters = (state.yaw_quarters + 3) % 4;
      return next;
  }
  next.position += RotateByQuarters(body, state.yaw_quarters);
  return next;
}

TrajectoryAction TrajectoryAction::FromControls(
    int robot, const RobotState& start, std::span<const Control> controls) {
  TrajectoryAction action;
  action.robot = robot;
  action.controls.assign(controls.begin(), controls.end());
  action.states.reserve(controls.size() + 1);
  action.states.push_back(start);
  for (Control u : controls) {
    action.states.push_back(ApplyDynamics(action.states.back(), u));
  }
  return action;
}

bool IsIndependent(std::span<const TrajectoryAction> assignment) {
  std::set<int> robots;
  for (const TrajectoryAction& a : assignment) {
    if (!robots.insert(a.robot).second) return false;
  }
  return true;
}

}  // namespace volex
