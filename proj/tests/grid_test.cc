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

#include <filesystem>
#include <fstream>

#include "gtest/gtest.h"
#include "volex/simulator.h"

namespace volex {
namespace {

TEST(VoxelGridTest, WorldToCellFloors) {
  VoxelGrid3<std::uint8_t> grid({10, 10, 10}, 0.1);
  EXPECT_EQ(grid.WorldToCell({0.05, 0.05, 0.05}), (CellIndex{0, 0, 0}));
  EXPECT_EQ(grid.WorldToCell({0.10, 0.19, 0.29}), (CellIndex{1, 1, 2}));
  EXPECT_FALSE(grid.WorldToCell({-0.01, 0.0, 0.0}).has_value());
  EXPECT_FALSE(grid.WorldToCell({1.0, 0.5, 0.5}).has_value());
}

TEST(VoxelGridTest, FlattenRoundTrips) {
  VoxelGrid3<int> grid({3, 4, 5}, 0.2);
  for (CellId id = 0; id < grid.size(); ++id) {
    EXPECT_EQ(grid.Flatten(grid.Unflatten(id)), id);
  }
  EXPECT_EQ(grid.Flatten({1, 0, 0}), 1u);
  EXPECT_EQ(grid.Flatten({0, 1, 0}), 3u);
  EXPECT_EQ(grid.Flatten({0, 0, 1}), 12u);
}

TEST(GenerateTest, EmptyCubicMeterHasThousandFreeCells) {
  absl::StatusOr<GroundTruthEnvironment> env =
      GenerateEmpty({1.0, 1.0, 1.0}, 0.1);
  ASSERT_TRUE(env.ok());
  EXPECT_EQ(env->grid.size(), 1000u);
  EXPECT_EQ(env->OccupiedCount(), 0u);
  EXPECT_EQ(ExplorationVolumeCells(*env, DefaultStart(env->grid.Extent())),
            1000u);
}

TEST(GenerateTest, NoBoxesMeansEverythingFree) {
  BoxesParams params;
  params.extent = {10, 10, 5};
  params.box_count = 0;
  absl::StatusOr<GroundTruthEnvironment> env = GenerateBoxes(3, params);
  ASSERT_TRUE(env.ok());
  EXPECT_EQ(env->OccupiedCount(), 0u);
  EXPECT_DOUBLE_EQ(env->grid.size() * env->grid.CellVolume(), 500.0);
  EXPECT_EQ(ExplorationVolumeCells(*env, DefaultStart(params.extent)),
            env->grid.size());
}

TEST(GenerateTest, SameSeedSameGrid) {
  BoxesParams params;
  absl::StatusOr<GroundTruthEnvironment> a = GenerateBoxes(17, params);
  absl::StatusOr<GroundTruthEnvironment> b = GenerateBoxes(17, params);
  absl::StatusOr<GroundTruthEnvironment> c = GenerateBoxes(18, params);
  ASSERT_TRUE(a.ok() && b.ok() && c.ok());
  EXPECT_EQ(*a, *b);
  EXPECT_NE(*a, *c);
  EXPECT_GT(a->OccupiedCount(), 0u);
}

TEST(GenerateTest, SingleHalfMeterBoxIsAtMostFiveCubed) {
  BoxesParams params;
  params.extent = {2, 2, 2};
  params.box_count = 1;
  params.min_box_size = 0.5;
  params.max_box_size = 0.5;
  params.start = Eigen::Vector3d(0.01, 0.01, 0.01);
  params.start_clearance = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    absl::StatusOr<GroundTruthEnvironment> env = GenerateBoxes(seed, params);
    ASSERT_TRUE(env.ok());
    // The occupied cells form one axis-aligned block; only clipping at the
    // boundary can make it smaller than 5x5x5.
    CellIndex lo{1000, 1000, 1000}, hi{-1, -1, -1};
    for (CellId id = 0; id < env->grid.size(); ++id) {
      if (!env->IsOccupied(id)) continue;
      const CellIndex c = env->grid.Unflatten(id);
      lo = {std::min(lo.x, c.x), std::min(lo.y, c.y), std::min(lo.z, c.z)};
      hi = {std::max(hi.x, c.x), std::max(hi.y, c.y), std::max(hi.z, c.z)};
    }
    const int sx = hi.x - lo.x + 1, sy = hi.y - lo.y + 1, sz = hi.z - lo.z + 1;
    EXPECT_EQ(env->OccupiedCount(), static_cast<std::size_t>(sx * sy * sz));
    EXPECT_LE(env->OccupiedCount(), 125u);
    const auto clipped = [](int lo_cell, int hi_cell, int size) {
      return size == 5 || lo_cell == 0 || hi_cell == 19;
    };
    EXPECT_TRUE(clipped(lo.x, hi.x, sx) && clipped(lo.y, hi.y, sy) &&
                clipped(lo.z, hi.z, sz))
        << "seed " << seed;
  }
}

TEST(GenerateTest, StartCubeIsCarvedFree) {
  BoxesParams params;
  params.box_count = 40;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    absl::StatusOr<GroundTruthEnvironment> env = GenerateBoxes(seed, params);
    ASSERT_TRUE(env.ok());
    const CellIndex start = *env->grid.WorldToCell(DefaultStart(params.extent));
    for (int dx = -4; dx <= 4; ++dx) {
      for (int dy = -4; dy <= 4; ++dy) {
        for (int dz = -4; dz <= 4; ++dz) {
          EXPECT_EQ(env->grid.at({start.x + dx, start.y + dy, start.z + dz}), 0);
        }
      }
    }
  }
}

TEST(GenerateTest, RejectsBadParameters) {
  BoxesParams params;
  params.min_box_size = 2.0;
  params.max_box_size = 1.0;
  EXPECT_EQ(GenerateBoxes(1, params).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_FALSE(GenerateEmpty({1, -1, 1}).ok());
}

TEST(VoxelFileTest, HandBuiltFileDecodes) {
  absl::StatusOr<GroundTruthEnvironment> env =
      ParseEnvironment("voxgrid 1\ndims 2 2 1\nresolution 0.1\n0110\n");
  ASSERT_TRUE(env.ok()) << env.status();
  EXPECT_EQ(env->OccupiedCount(), 2u);
  EXPECT_EQ(env->grid.at({1, 0, 0}), 1);
  EXPECT_EQ(env->grid.at({0, 1, 0}), 1);
  EXPECT_EQ(env->grid.at({0, 0, 0}), 0);
  EXPECT_EQ(env->grid.at({1, 1, 0}), 0);
}

TEST(VoxelFileTest, ParseErrorsHaveDistinctCodes) {
  EXPECT_EQ(ParseEnvironment("voxgrid 2\ndims 1 1 1\nresolution 0.1\n0\n")
                .status()
                .code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(ParseEnvironment("voxgrid 1\ndims 2 2 1\nresolution 0.1\n01x0\n")
                .status()
                .code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(ParseEnvironment("voxgrid 1\ndims 0 2 1\nresolution 0.1\n\n")
                .status()
                .code(),
            absl::StatusCode::kOutOfRange);
  EXPECT_EQ(ParseEnvironment("voxgrid 1\ndims 2 2 1\nresolution 0.1\n011\n")
                .status()
                .code(),
            absl::StatusCode::kDataLoss);
  EXPECT_EQ(LoadEnvironment("/nonexistent/volex/file.vox").status().code(),
            absl::StatusCode::kNotFound);
}

TEST(VoxelFileTest, SaveLoadRoundTrip) {
  BoxesParams params;
  params.extent = {1.2, 0.8, 0.6};
  params.min_box_size = 0.2;
  params.max_box_size = 0.4;
  params.start_clearance = 0.2;
  absl::StatusOr<GroundTruthEnvironment> env = GenerateBoxes(5, params);
  ASSERT_TRUE(env.ok()) << env.status();
  const std::string path =
      (std::filesystem::temp_directory_path() / "volex_grid_test.vox").string();
  ASSERT_TRUE(SaveEnvironment(*env, path).ok());
  absl::StatusOr<GroundTruthEnvironment> loaded = LoadEnvironment(path);
  ASSERT_TRUE(loaded.ok());
  EXPECT_EQ(*loaded, *env);
  EXPECT_EQ(EnvironmentHash(*loaded), EnvironmentHash(*env));
  std::filesystem::remove(path);
}

TEST(VoxelFileTest, TruncatedPayloadIsDataLoss) {
  absl::StatusOr<GroundTruthEnvironment> env = GenerateEmpty({0.3, 0.3, 0.3});
  ASSERT_TRUE(env.ok());
  std::string text = SerializeEnvironment(*env);
  text.resize(text.size() - 5);
  EXPECT_EQ(ParseEnvironment(text).status().code(),
            absl::StatusCode::kDataLoss);
}

TEST(SampleEnvironmentTest, FullyKnownBeliefIsReproduced) {
  BeliefMap belief = BeliefMap::AllUnknown({4, 3, 2}, 0.1, 0.4);
  for (CellId id = 0; id < belief.grid.size(); ++id) {
    belief.grid[id] = id % 3 == 0 ? CellState::kOccupied : CellState::kFree;
  }
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const GroundTruthEnvironment env = SampleEnvironment(belief, seed);
    for (CellId id = 0; id < belief.grid.size(); ++id) {
      EXPECT_EQ(env.IsOccupied(id), id % 3 == 0);
    }
  }
}

TEST(SampleEnvironmentTest, TinyPriorSamplesFree) {
  const BeliefMap belief = BeliefMap::AllUnknown({10, 10, 10}, 0.1, 1e-12);
  EXPECT_EQ(SampleEnvironment(belief, 9).OccupiedCount(), 0u);
}

TEST(SampleEnvironmentTest, OccupiedFractionMatchesPrior) {
  const BeliefMap belief = BeliefMap::AllUnknown({100, 10, 10}, 0.1, 0.125);
  const double fraction =
      SampleEnvironment(belief, 2026).OccupiedCount() / 10000.0;
  EXPECT_NEAR(fraction, 0.125, 0.01);
}

}  // namespace
}  // namespace volex
