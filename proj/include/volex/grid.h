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

// Dense voxel lattices for ground-truth environments and belief maps.
//
// Cell (0,0,0) spans [0, resolution)^3; the lattice origin is the world
// origin. Storage is row-major with x fastest, matching the voxel file format.

#ifndef VOLEX_GRID_H_
#define VOLEX_GRID_H_

#include <array>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace volex {

// Flat cell id into a VoxelGrid3 payload.
using CellId = std::uint32_t;

struct CellIndex {
  int x = 0;
  int y = 0;
  int z = 0;

  auto operator<=>(const CellIndex&) const = default;
};

using Dims = std::array<int, 3>;

template <typename T>
class VoxelGrid3 {
 public:
  VoxelGrid3() = default;
  VoxelGrid3(Dims dims, double resolution, T fill = T{})
      : dims_(dims),
        resolution_(resolution),
        cells_(static_cast<std::size_t>(dims[0]) * dims[1] * dims[2], fill) {}

  const Dims& dims() const { return dims_; }
  double resolution() const { return resolution_; }
  std::size_t size() const { return cells_.size(); }

  bool Contains(const CellIndex& c) const {
    return c.x >= 0 && c.y >= 0 && c.z >= 0 && c.x < dims_[0] &&
           c.y < dims_[1] && c.z < dims_[2];
  }

  CellId Flatten(const CellIndex& c) const {
    return static_cast<CellId>(c.x + dims_[0] * (c.y + dims_[1] * c.z));
  }

  CellIndex Unflatten(CellId id) const {
    const int nx = dims_[0];
    const int ny = dims_[1];
    const int flat = static_cast<int>(id);
    return {flat % nx, (flat / nx) % ny, flat / (nx * ny)};
  }

  // Out-of-bounds points yield nullopt.
  std::optional<CellIndex> WorldToCell(const Eigen::Vector3d& p) const {
    int index[3];
    for (int axis = 0; axis < 3; ++axis) {
      const double f = std::floor(p[axis] / resolution_);
      if (!(f >= 0.0 && f < dims_[axis])) return std::nullopt;
      index[axis] = static_cast<int>(f);
    }
    return CellIndex{index[0], index[1], index[2]};
  }

  Eigen::Vector3d CellToWorld(const CellIndex& c) const {
    return {(c.x + 0.5) * resolution_, (c.y + 0.5) * resolution_,
            (c.z + 0.5) * resolution_};
  }

  Eigen::Vector3d Extent() const {
    return {dims_[0] * resolution_, dims_[1] * resolution_,
            dims_[2] * resolution_};
  }

  double CellVolume() const { return resolution_ * resolution_ * resolution_; }

  T& operator[](CellId id) { return cells_[id]; }
  const T& operator[](CellId id) const { return cells_[id]; }
  T& at(const CellIndex& c) { return cells_[Flatten(c)]; }
  const T& at(const CellIndex& c) const { return cells_[Flatten(c)]; }

  std::span<T> cells() { return cells_; }
  std::span<const T> cells() const { return cells_; }

  bool operator==(const VoxelGrid3& other) const = default;

 private:
  Dims dims_{1, 1, 1};
  double resolution_ = 0.1;
  std::vector<T> cells_ = std::vector<T>(1);
};

// Binary ground truth: every cell is free (0) or occupied (1).
struct GroundTruthEnvironment {
  VoxelGrid3<std::uint8_t> grid;

  bool IsOccupied(CellId id) const { return grid[id] != 0; }
  std::size_t OccupiedCount() const;
  bool operator==(const GroundTruthEnvironment&) const = default;
};

enum class CellState : std::uint8_t { kUnknown = 0, kFree = 1, kOccupied = 2 };

// Tri-state knowledge plus a uniform Bernoulli prior for unknown cells.
struct BeliefMap {
  VoxelGrid3<CellState> grid;
  double occupancy_prior = 0.125;

  static BeliefMap AllUnknown(const Dims& dims, double resolution,
                              double occupancy_prior);

  bool IsKnown(CellId id) const { return grid[id] != CellState::kUnknown; }
  std::size_t UnknownCount() const;
  std::size_t KnownCount() const { return grid.size() - UnknownCount(); }
  bool operator==(const BeliefMap&) const = default;
};

// Environment with every unknown cell of `belief` free and known cells copied.
GroundTruthEnvironment OptimisticEnvironment(const BeliefMap& belief);

absl::StatusOr<GroundTruthEnvironment> GenerateEmpty(
    const Eigen::Vector3d& extent, double resolution = 0.1);

struct BoxesParams {
  Eigen::Vector3d extent{4.0, 4.0, 2.0};
  int box_count = 8;
  double min_box_size = 0.3;
  double max_box_size = 1.0;
  double resolution = 0.1;
  // Defaults to the center of the extent when unset.
  std::optional<Eigen::Vector3d> start;
  // Edge length of the cube around `start` forced free.
  double start_clearance = 1.0;
};

// Axis-aligned boxes placed uniformly inside the extent. Cells whose centers
// fall inside a box are occupied; the start cube is carved free afterwards.
absl::StatusOr<GroundTruthEnvironment> GenerateBoxes(std::uint64_t seed,
                                                     const BoxesParams& params);

Eigen::Vector3d DefaultStart(const Eigen::Vector3d& extent);

// Voxel file format (text):
//   voxgrid 1
//   dims nx ny nz
//   resolution r
//   <nx*ny*nz characters of 0/1, x fastest, whitespace ignored>
//
// Parse failures map to distinct status codes:
//   kInvalidArgument  malformed header or a payload character other than 0/1
//   kOutOfRange       dimension mismatch (non-positive or oversized dims)
//   kDataLoss         payload length differs from nx*ny*nz
//   kNotFound         file could not be opened
std::string SerializeEnvironment(const GroundTruthEnvironment& env);
absl::StatusOr<GroundTruthEnvironment> ParseEnvironment(std::string_view text);
absl::Status SaveEnvironment(const GroundTruthEnvironment& env,
                             const std::string& path);
absl::StatusOr<GroundTruthEnvironment> LoadEnvironment(const std::string& path);

// Known cells copied verbatim; each unknown cell occupied independently with
// probability belief.occupancy_prior.
GroundTruthEnvironment SampleEnvironment(const BeliefMap& belief,
                                         std::uint64_t seed);

// 64-bit FNV-1a over dims, resolution and payload.
std::uint64_t EnvironmentHash(const GroundTruthEnvironment& env);

}  // namespace volex

#endif  // VOLEX_GRID_H_
