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

#include "volex/sensing.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "absl/strings/str_cat.h"

namespace volex {

absl::Status CameraModel::Validate() const {
  if (!(max_range > 0.0)) {
    return absl::InvalidArgumentError("camera max_range must be positive");
  }
  if (columns < 1 || rows < 1) {
    return absl::InvalidArgumentError("camera resolution must be >= 1");
  }
  for (double fov : {fov_horizontal_deg, fov_vertical_deg}) {
    if (!(fov > 0.0 && fov < 180.0)) {
      return absl::InvalidArgumentError("camera fov must lie in (0, 180)");
    }
  }
  return absl::OkStatus();
}

int CameraModel::MountedHorizontalPixels() const {
  return long_axis_vertical ? std::min(columns, rows)
                            : columns;
}

int CameraModel::MountedVerticalPixels() const {
  return long_axis_vertical ? std::max(columns, rows) : rows;
}

double CameraModel::MountedHorizontalFovDeg() const {
  if (!long_axis_vertical) return fov_horizontal_deg;
  return columns >= rows ? fov_vertical_deg : fov_horizontal_deg;
}

double CameraModel::MountedVerticalFovDeg() const {
  if (!long_axis_vertical) return fov_vertical_deg;
  return columns >= rows ? fov_horizontal_deg : fov_vertical_deg;
}

double RobotState::Yaw() const {
  return yaw_quarters * std::numbers::pi / 2.0;
}

Eigen::Vector3d RotateByQuarters(const Eigen::Vector3d& body, int quarters) {
  switch (((quarters % 4) + 4) % 4) {
    case 0:
      return body;
    case 1:
      return {-body.y(), body.x(), body.z()};
    case 2:
      return {-body.x(), -body.y(), body.z()};
    default:
      return {body.y(), -body.x(), body.z()};
  }
}

RayResult CastRay(const GroundTruthEnvironment& env,
                  const Eigen::Vector3d& origin,
                  const Eigen::Vector3d& direction, double max_range) {
  RayResult result;
  TraverseSegment(env.grid, origin, direction, max_range, [&](CellId id) {
    result.cells.push_back(id);
    if (env.IsOccupied(id)) {
      result.hit = true;
      return true;
    }
    return false;
  });
  return result;
}

std::vector<Eigen::Vector3d> CameraRayDirections(const CameraModel& cam,
                                                 int yaw_quarters) {
  const int nh = cam.MountedHorizontalPixels();
  const int nv = cam.MountedVerticalPixels();
  const double fov_h = cam.MountedHorizontalFovDeg() * std::numbers::pi / 180.0;
  const double fov_v = cam.MountedVerticalFovDeg() * std::numbers::pi / 180.0;
  std::vector<Eigen::Vector3d> rays;
  rays.reserve(static_cast<std::size_t>(nh) * nv);
  for (int v = 0; v < nv; ++v) {
    const double elevation = -fov_v / 2.0 + (v + 0.5) * fov_v / nv;
    for (int h = 0; h < nh; ++h) {
      const double azimuth = -fov_h / 2.0 + (h + 0.5) * fov_h / nh;
      const Eigen::Vector3d body(std::cos(elevation) * std::cos(azimuth),
                                 std::cos(elevation) * std::sin(azimuth),
                                 std::sin(elevation));
      rays.push_back(RotateByQuarters(body, yaw_quarters));
    }
  }
  return rays;
}

std::vector<CellId> CameraVisibleSet(const RobotState& state,
                                     const GroundTruthEnvironment& env,
                                     const CameraModel& cam) {
  std::vector<CellId> cells;
  cells.reserve(static_cast<std::size_t>(cam.RayCount()) * 8);
  for (const Eigen::Vector3d& dir :
       CameraRayDirections(cam, state.yaw_quarters)) {
    TraverseSegment(env.grid, state.position, dir, cam.max_range,
                    [&](CellId id) {
                      cells.push_back(id);
                      return env.IsOccupied(id);
                    });
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

Observation Observe(const RobotState& state, const GroundTruthEnvironment& env,
                    const CameraModel& cam) {
  Observation obs;
  for (CellId id : CameraVisibleSet(state, env, cam)) {
    obs.cells.emplace_back(id, env.IsOccupied(id));
  }
  return obs;
}

absl::Status FuseObservation(BeliefMap& belief, const Observation& obs) {
  for (const auto& [id, occupied] : obs.cells) {
    if (id >= belief.grid.size()) {
      return absl::OutOfRangeError(absl::StrCat("observed cell ", id,
                                                " outside the belief grid"));
    }
    const CellState want = occupied ? CellState::kOccupied : CellState::kFree;
    const CellState have = belief.grid[id];
    if (have != CellState::kUnknown && have != want) {
      return absl::InternalError(absl::StrCat(
          "integrity error: observation contradicts known cell ", id));
    }
  }
  for (const auto& [id, occupied] : obs.cells) {
    belief.grid[id] = occupied ? CellState::kOccupied : CellState::kFree;
  }
  return absl::OkStatus();
}

}  // namespace volex
