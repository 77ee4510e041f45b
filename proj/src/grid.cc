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

#include "volex/grid.h"

#include <algorithm>
#include <bit>
#include <cctype>
#include <fstream>
#include <sstream>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "volex/rng.h"

namespace volex {
namespace {

// Largest accepted cell count for a loaded or generated grid.
constexpr std::int64_t kMaxCells = std::int64_t{1} << 30;

absl::StatusOr<Dims> DimsForExtent(const Eigen::Vector3d& extent,
                                   double resolution) {
  if (!(resolution > 0.0)) {
    return absl::InvalidArgumentError("resolution must be positive");
  }
  Dims dims;
  std::int64_t total = 1;
  for (int axis = 0; axis < 3; ++axis) {
    if (!(extent[axis] > 0.0)) {
      return absl::InvalidArgumentError("extent must be positive");
    }
    // Tolerate extents that are a whole number of cells up to rounding.
    const double cells = extent[axis] / resolution;
    dims[axis] = std::max(1, static_cast<int>(std::ceil(cells - 1e-9)));
    total *= dims[axis];
  }
  if (total > kMaxCells) return absl::InvalidArgumentError("grid too large");
  return dims;
}

}  // namespace

std::size_t GroundTruthEnvironment::OccupiedCount() const {
  return static_cast<std::size_t>(
      std::count_if(grid.cells().begin(), grid.cells().end(),
                    [](std::uint8_t v) { return v != 0; }));
}

BeliefMap BeliefMap::AllUnknown(const Dims& dims, double resolution,
                                double occupancy_prior) {
  BeliefMap belief;
  belief.grid = VoxelGrid3<CellState>(dims, resolution, CellState::kUnknown);
  belief.occupancy_prior = occupancy_prior;
  return belief;
}

std::size_t BeliefMap::UnknownCount() const {
  return static_cast<std::size_t>(
      std::count(grid.cells().begin(), grid.cells().end(), CellState::kUnknown));
}

GroundTruthEnvironment OptimisticEnvironment(const BeliefMap& belief) {
  GroundTruthEnvironment env;
  env.grid = VoxelGrid3<std::uint8_t>(belief.grid.dims(),
                                      belief.grid.resolution(), 0);
  for (CellId id = 0; id < belief.grid.size(); ++id) {
    env.grid[id] = belief.grid[id] == CellState::kOccupied ? 1 : 0;
  }
  return env;
}

absl::StatusOr<GroundTruthEnvironment> GenerateEmpty(
    const Eigen::Vector3d& extent, double resolution) {
  absl::StatusOr<Dims> dims = DimsForExtent(extent, resolution);
  if (!dims.ok()) return dims.status();
  GroundTruthEnvironment env;
  env.grid = VoxelGrid3<std::uint8_t>(*dims, resolution, 0);
  return env;
}

Eigen::Vector3d DefaultStart(const Eigen::Vector3d& extent) {
  return extent / 2.0;
}

absl::StatusOr<GroundTruthEnvironment> GenerateBoxes(
    std::uint64_t seed, const BoxesParams& params) {
  absl::StatusOr<Dims> dims = DimsForExtent(params.extent, params.resolution);
  if (!dims.ok()) return dims.status();
  if (params.box_count < 0) {
    return absl::InvalidArgumentError("box_count must be non-negative");
  }
  if (!(params.min_box_size > 0.0) ||
      params.max_box_size < params.min_box_size ||
      params.max_box_size > params.extent.minCoeff()) {
    return absl::InvalidArgumentError(
        "box size range must be positive, ordered and within the extent");
  }
  const Eigen::Vector3d start =
      params.start.value_or(DefaultStart(params.extent));
  for (int axis = 0; axis < 3; ++axis) {
    if (!(start[axis] >= 0.0 && start[axis] < params.extent[axis])) {
      return absl::InvalidArgumentError("start lies outside the extent");
    }
  }

  GroundTruthEnvironment env;
  env.grid = VoxelGrid3<std::uint8_t>(*dims, params.resolution, 0);
  const double res = params.resolution;
  Rng rng(seed);
  for (int b = 0; b < params.box_count; ++b) {
    Eigen::Vector3d lo, hi;
    for (int axis = 0; axis < 3; ++axis) {
      const double size = rng.Uniform(params.min_box_size, params.max_box_size);
      lo[axis] = rng.Uniform(0.0, params.extent[axis] - size);
      hi[axis] = lo[axis] + size;
    }
    // Cells whose centers lie in [lo, hi).
    int first[3], last[3];
    for (int axis = 0; axis < 3; ++axis) {
      first[axis] = std::max(0, static_cast<int>(std::ceil(lo[axis] / res - 0.5)));
      last[axis] = std::min((*dims)[axis] - 1,
                            static_cast<int>(std::ceil(hi[axis] / res - 0.5)) - 1);
    }
    for (int z = first[2]; z <= last[2]; ++z) {
      for (int y = first[1]; y <= last[1]; ++y) {
        for (int x = first[0]; x <= last[0]; ++x) {
          env.grid.at({x, y, z}) = 1;
        }
      }
    }
  }

  // Carve the start cube.
  const double half = params.start_clearance / 2.0;
  for (CellId id = 0; id < env.grid.size(); ++id) {
    const Eigen::Vector3d center = env.grid.CellToWorld(env.grid.Unflatten(id));
    if (((center - start).cwiseAbs().array() <= half).all()) env.grid[id] = 0;
  }
  if (auto c = env.grid.WorldToCell(start)) env.grid.at(*c) = 0;

  if (params.box_count > 0 && env.OccupiedCount() == 0) {
    return absl::InvalidArgumentError(
        "start clearance removes every box; parameters are vacuous");
  }
  return env;
}

std::string SerializeEnvironment(const GroundTruthEnvironment& env) {
  const Dims& d = env.grid.dims();
  std::ostringstream out;
  out.precision(17);
  out << "voxgrid 1\n"
      << "dims " << d[0] << ' ' << d[1] << ' ' << d[2] << '\n'
      << "resolution " << env.grid.resolution() << '\n';
  std::string payload(env.grid.size(), '0');
  for (CellId id = 0; id < env.grid.size(); ++id) {
    if (env.IsOccupied(id)) payload[id] = '1';
  }
  out << payload << '\n';
  return out.str();
}

absl::StatusOr<GroundTruthEnvironment> ParseEnvironment(std::string_view text) {
  // Split off the three header lines.
  // absl may be built with its own string_view; stay in its type here.
  absl::string_view header[3];
  absl::string_view rest(text.data(), text.size());
  for (auto& line : header) {
    const std::size_t eol = rest.find('\n');
    if (eol == absl::string_view::npos) {
      return absl::InvalidArgumentError("malformed header: missing lines");
    }
    line = absl::StripAsciiWhitespace(rest.substr(0, eol));
    rest.remove_prefix(eol + 1);
  }
  if (header[0] != "voxgrid 1") {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed header: bad magic '", header[0], "'"));
  }
  std::vector<absl::string_view> dims_fields =
      absl::StrSplit(header[1], ' ', absl::SkipEmpty());
  if (dims_fields.size() != 4 || dims_fields[0] != "dims") {
    return absl::InvalidArgumentError("malformed header: bad dims line");
  }
  std::int64_t parsed[3];
  for (int axis = 0; axis < 3; ++axis) {
    if (!absl::SimpleAtoi(dims_fields[axis + 1], &parsed[axis])) {
      return absl::InvalidArgumentError("malformed header: dims not integers");
    }
  }
  std::vector<absl::string_view> res_fields =
      absl::StrSplit(header[2], ' ', absl::SkipEmpty());
  double resolution = 0.0;
  if (res_fields.size() != 2 || res_fields[0] != "resolution" ||
      !absl::SimpleAtod(res_fields[1], &resolution)) {
    return absl::InvalidArgumentError("malformed header: bad resolution line");
  }
  if (!(resolution > 0.0)) {
    return absl::InvalidArgumentError(
        "malformed header: resolution must be positive");
  }
  std::int64_t total = 1;
  for (std::int64_t n : parsed) {
    if (n < 1 || n > kMaxCells) {
      return absl::OutOfRangeError("dimension mismatch: dims must be >= 1");
    }
    total *= n;
    if (total > kMaxCells) {
      return absl::OutOfRangeError("dimension mismatch: grid too large");
    }
  }

  GroundTruthEnvironment env;
  env.grid = VoxelGrid3<std::uint8_t>(
      {static_cast<int>(parsed[0]), static_cast<int>(parsed[1]),
       static_cast<int>(parsed[2])},
      resolution, 0);
  std::int64_t count = 0;
  for (char ch : rest) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    if (ch != '0' && ch != '1') {
      return absl::InvalidArgumentError(
          absl::StrCat("payload: unexpected character '", std::string(1, ch),
                       "'"));
    }
    if (count < total) env.grid[static_cast<CellId>(count)] = ch == '1';
    ++count;
  }
  if (count != total) {
    return absl::DataLossError(absl::StrCat("payload length mismatch: expected ",
                                            total, " cells, found ", count));
  }
  return env;
}

absl::Status SaveEnvironment(const GroundTruthEnvironment& env,
                             const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  out << SerializeEnvironment(env);
  if (!out) return absl::InternalError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

absl::StatusOr<GroundTruthEnvironment> LoadEnvironment(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseEnvironment(buffer.str());
}

GroundTruthEnvironment SampleEnvironment(const BeliefMap& belief,
                                         std::uint64_t seed) {
  GroundTruthEnvironment env;
  env.grid = VoxelGrid3<std::uint8_t>(belief.grid.dims(),
                                      belief.grid.resolution(), 0);
  Rng rng(seed);
  for (CellId id = 0; id < belief.grid.size(); ++id) {
    switch (belief.grid[id]) {
      case CellState::kFree:
        env.grid[id] = 0;
        break;
      case CellState::kOccupied:
        env.grid[id] = 1;
        break;
      case CellState::kUnknown:
        env.grid[id] = rng.Bernoulli(belief.occupancy_prior) ? 1 : 0;
        break;
    }
  }
  return env;
}

std::uint64_t EnvironmentHash(const GroundTruthEnvironment& env) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xff;
      h *= 0x00000100000001b3ull;
    }
  };
  for (int d : env.grid.dims()) mix(static_cast<std::uint64_t>(d));
  mix(std::bit_cast<std::uint64_t>(env.grid.resolution()));
  for (std::uint8_t v : env.grid.cells()) {
    h ^= v;
    h *= 0x00000100000001b3ull;
  }
  return h;
}

}  // namespace volex
