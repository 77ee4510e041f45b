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

// Depth camera model, voxel ray traversal and noiseless observation fusion.

#ifndef VOLEX_SENSING_H_
#define VOLEX_SENSING_H_

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "absl/status/status.h"
#include "volex/grid.h"

namespace volex {

// Forward-facing depth camera. `columns` x `rows` and `fov_*` describe the
// sensor in its nominal landscape orientation; with `long_axis_vertical` the
// long image axis (and its field of view) is mounted vertically.
struct CameraModel {
  double max_range = 2.4;
  int columns = 19;
  int rows = 12;
  double fov_horizontal_deg = 43.6;
  double fov_vertical_deg = 34.6;
  bool long_axis_vertical = true;

  absl::Status Validate() const;

  // Pixel counts and full field-of-view angles after mounting.
  int MountedHorizontalPixels() const;
  int MountedVerticalPixels() const;
  double MountedHorizontalFovDeg() const;
  double MountedVerticalFovDeg() const;
  int RayCount() const { return columns * rows; }
};

// Position plus yaw quantized to quarter turns.
struct RobotState {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  int yaw_quarters = 0;  // in {0,1,2,3}; yaw = yaw_quarters * pi/2

  double Yaw() const;
  bool operator==(const RobotState& other) const {
    return position == other.position && yaw_quarters == other.yaw_quarters;
  }
};

// Rotates a body-frame vector into the world frame by whole quarter turns.
// Exact: components are permuted and negated, never multiplied by cos/sin.
Eigen::Vector3d RotateByQuarters(const Eigen::Vector3d& body, int quarters);

struct RayResult {
  std::vector<CellId> cells;  // traversal order
  bool hit = false;           // last cell is occupied
};

// Walks the segment [origin, origin + max_range * direction] through the
// lattice. `visit(cell)` is called in traversal order and returns true to
// stop. The origin is nudged by +1e-9 * resolution on every axis; crossings
// at exactly equal parameters are stepped together so that no cell whose
// overlap with the segment has zero length is reported. Returns false if
// the origin lies outside the lattice.
template <typename Grid, typename Visit>
bool TraverseSegment(const Grid& grid, const Eigen::Vector3d& origin,
                     const Eigen::Vector3d& direction, double max_range,
                     Visit&& visit);

RayResult CastRay(const GroundTruthEnvironment& env,
                  const Eigen::Vector3d& origin,
                  const Eigen::Vector3d& direction, double max_range);

// World-frame unit ray directions for every pixel center at the given yaw.
// Angles are spaced uniformly across each full field of view.
std::vector<Eigen::Vector3d> CameraRayDirections(const CameraModel& cam,
                                                 int yaw_quarters);

// F_cam: sorted, unique cells revealed by a view.
std::vector<CellId> CameraVisibleSet(const RobotState& state,
                                     const GroundTruthEnvironment& env,
                                     const CameraModel& cam);

struct Observation {
  std::vector<std::pair<CellId, bool>> cells;  // (cell, occupied)
};

Observation Observe(const RobotState& state, const GroundTruthEnvironment& env,
                    const CameraModel& cam);

// Marks observed cells known. A contradiction with an existing known cell is
// an integrity error and leaves the belief untouched.
absl::Status FuseObservation(BeliefMap& belief, const Observation& obs);

// ---------------------------------------------------------------------------
// Implementation.

template <typename Grid, typename Visit>
bool TraverseSegment(const Grid& grid, const Eigen::Vector3d& origin,
                     const Eigen::Vector3d& direction, double max_range,
                     Visit&& visit) {
  const double res = grid.resolution();
  const Eigen::Vector3d o = origin.array() + 1e-9 * res;
  std::optional<CellIndex> start = grid.WorldToCell(o);
  if (!start) return false;
  int cell[3] = {start->x, start->y, start->z};
  int step[3];
  for (int a = 0; a < 3; ++a) step[a] = direction[a] > 0 ? 1 : -1;
  const auto& dims = grid.dims();

  // Parameter at which the ray crosses the next boundary on `axis`.
  auto crossing = [&](int a) {
    if (direction[a] == 0.0) return std::numeric_limits<double>::infinity();
    const int plane = cell[a] + (step[a] > 0 ? 1 : 0);
    return (plane * res - o[a]) / direction[a];
  };

  double t_next[3] = {crossing(0), crossing(1), crossing(2)};
  while (true) {
    if (visit(grid.Flatten({cell[0], cell[1], cell[2]}))) return true;
    const double t = std::min({t_next[0], t_next[1], t_next[2]});
    if (!(t < max_range)) return true;
    for (int a = 0; a < 3; ++a) {
      if (t_next[a] == t) {
        cell[a] += step[a];
        if (cell[a] < 0 || cell[a] >= dims[a]) return true;
      }
    }
    for (int a = 0; a < 3; ++a) {
      if (t_next[a] == t) t_next[a] = crossing(a);
    }
  }
}

}  // namespace volex

#endif  // VOLEX_SENSING_H_
