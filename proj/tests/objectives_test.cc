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

#include "volex/objectives.h"

#include <cmath>
#include <numeric>

#include "gtest/gtest.h"
#include "oracles.h"
#include "volex/rng.h"

namespace volex {
namespace {

TrajectoryAction Action(int robot, const RobotState& start,
                        std::vector<Control> controls) {
  return TrajectoryAction::FromControls(robot, start, controls);
}

// The view at states[1] faces `yaw`.
TrajectoryAction View(int robot, const Eigen::Vector3d& p, int yaw) {
  return Action(robot, {p, (yaw + 3) % 4}, {Control::kYawLeft});
}

// Random small belief: known cells copy a random truth, `unknown` cells
// (never the cells in `keep_known`) stay unknown.
BeliefMap RandomBelief(Rng& rng, const Dims& dims, int unknown, double prior,
                       const std::vector<CellId>& keep_known) {
  BeliefMap belief = BeliefMap::AllUnknown(dims, 0.1, prior);
  std::vector<CellId> ids(belief.grid.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::shuffle(ids.begin(), ids.end(), rng.engine());
  int left = unknown;
  for (CellId id : ids) {
    const bool keep = std::find(keep_known.begin(), keep_known.end(), id) !=
                      keep_known.end();
    if (!keep && left > 0) {
      --left;
      continue;
    }
    belief.grid[id] =
        !keep && rng.Bernoulli(0.2) ? CellState::kOccupied : CellState::kFree;
  }
  return belief;
}

TEST(WeightsTest, EntropyOfHalfIsOneBit) {
  EXPECT_DOUBLE_EQ(BinaryEntropyBits(0.5), 1.0);
  EXPECT_EQ(BinaryEntropyBits(0.0), 0.0);
  EXPECT_EQ(BinaryEntropyBits(1.0), 0.0);
  BeliefMap belief = BeliefMap::AllUnknown({2, 2, 1}, 0.1, 0.5);
  belief.grid[0] = CellState::kFree;
  belief.grid[1] = CellState::kOccupied;
  const std::vector<double> w = CellWeights(belief, Weighting::kEntropy);
  EXPECT_EQ(w, (std::vector<double>{0.0, 0.0, 1.0, 1.0}));
  belief.occupancy_prior = 0.125;
  const std::vector<double> scaled =
      CellWeights(belief, Weighting::kScaledEntropy);
  EXPECT_DOUBLE_EQ(scaled[2], 1.0);
  EXPECT_EQ(CellWeights(belief, Weighting::kUnitNewCell)[3], 1.0);
}

TEST(CoveredCellsTest, UnionOfFutureViews) {
  GroundTruthEnvironment env;
  env.grid = VoxelGrid3<std::uint8_t>({30, 30, 10}, 0.1, 0);
  const CameraModel cam;
  EXPECT_TRUE(CoveredCells({}, env, cam).empty());

  const RobotState s{{0.55, 1.55, 0.55}, 0};
  const TrajectoryAction a = View(0, s.position, 0);
  const TrajectoryAction one[] = {a};
  EXPECT_EQ(CoveredCells(one, env, cam), CameraVisibleSet(s, env, cam));

  const TrajectoryAction b = View(1, {0.85, 1.55, 0.55}, 0);
  const TrajectoryAction both[] = {a, b};
  const std::size_t na = CameraVisibleSet(a.states[1], env, cam).size();
  const std::size_t nb = CameraVisibleSet(b.states[1], env, cam).size();
  EXPECT_LT(CoveredCells(both, env, cam).size(), na + nb);
}

TEST(ExpectedCoverageTest, FullyKnownMapIsWorthNothing) {
  BeliefMap belief = BeliefMap::AllUnknown({6, 6, 3}, 0.1, 0.3);
  for (CellId id = 0; id < belief.grid.size(); ++id) {
    belief.grid[id] = CellState::kFree;
  }
  const TrajectoryAction a[] = {View(0, {0.05, 0.25, 0.15}, 0)};
  for (Weighting w : {Weighting::kUnitNewCell, Weighting::kEntropy,
                      Weighting::kScaledEntropy}) {
    for (EnvironmentMode mode : {EnvironmentMode::Optimistic(),
                                 EnvironmentMode::MonteCarlo(4, 1),
                                 EnvironmentMode::Exact()}) {
      ObjectiveSpec spec;
      spec.weighting = w;
      spec.env = mode;
      EXPECT_EQ(*ExpectedCoverage(a, belief, spec, CameraModel{}), 0.0);
    }
  }
}

TEST(ExpectedCoverageTest, TwoUnknownCellsMatchEnumeration) {
  // 2x2x1 grid, the robot in (0,0) looking along +x past one unknown cell,
  // with a second unknown cell beside it.
  BeliefMap belief = BeliefMap::AllUnknown({2, 2, 1}, 0.1, 0.125);
  belief.grid[belief.grid.Flatten({0, 0, 0})] = CellState::kFree;
  belief.grid[belief.grid.Flatten({0, 1, 0})] = CellState::kFree;
  const CameraModel cam;
  const std::vector<TrajectoryAction> views = {
      View(0, belief.grid.CellToWorld({0, 0, 0}), 0)};
  for (Weighting w : {Weighting::kUnitNewCell, Weighting::kEntropy}) {
    ObjectiveSpec spec;
    spec.weighting = w;
    spec.env = EnvironmentMode::Exact();
    const double expected = oracle::ExpectedCoverageByEnumeration(
        views, belief, cam, CellWeights(belief, w), 1.0);
    EXPECT_GT(expected, 0.0);
    EXPECT_NEAR(*ExpectedCoverage(views, belief, spec, cam), expected, 1e-12);
  }
}

TEST(ExpectedCoverageTest, ExactModeMatchesEnumerationOnRandomInstances) {
  Rng rng(21);
  const CameraModel cam;
  for (int trial = 0; trial < 60; ++trial) {
    const Dims dims = {3 + static_cast<int>(rng.Below(3)),
                       3 + static_cast<int>(rng.Below(3)),
                       1 + static_cast<int>(rng.Below(2))};
    const CellId origin_a = 0;
    const CellId origin_b = static_cast<CellId>(dims[0] - 1);
    const BeliefMap belief =
        RandomBelief(rng, dims, 2 + static_cast<int>(rng.Below(8)),
                     rng.Uniform(0.05, 0.95), {origin_a, origin_b});
    const VoxelGrid3<CellState>& g = belief.grid;
    std::vector<TrajectoryAction> actions = {
        Action(0, {g.CellToWorld(g.Unflatten(origin_a)), 3},
               {Control::kYawLeft, Control::kYawLeft}),
        Action(1, {g.CellToWorld(g.Unflatten(origin_b)), 0},
               {Control::kYawLeft, Control::kYawLeft})};
    const Weighting w = static_cast<Weighting>(rng.Below(3));
    const double gamma = rng.Bernoulli(0.5) ? 1.0 : 0.7;
    ObjectiveSpec spec;
    spec.weighting = w;
    spec.discount = gamma;
    spec.env = EnvironmentMode::Exact();
    const double expected = oracle::ExpectedCoverageByEnumeration(
        actions, belief, cam, CellWeights(belief, w), gamma);
    EXPECT_NEAR(*ExpectedCoverage(actions, belief, spec, cam), expected, 1e-10)
        << "trial " << trial;
  }
}

TEST(ExpectedCoverageTest, MonteCarloConvergesToExact) {
  Rng rng(4);
  const Dims dims = {5, 5, 2};
  const BeliefMap belief = RandomBelief(rng, dims, 12, 0.3, {0});
  const std::vector<TrajectoryAction> views = {
      View(0, belief.grid.CellToWorld({0, 0, 0}), 0),
      View(1, belief.grid.CellToWorld({0, 0, 0}), 1)};
  const CameraModel cam;
  ObjectiveSpec exact;
  exact.env = EnvironmentMode::Exact();
  const double truth = *ExpectedCoverage(views, belief, exact, cam);
  ObjectiveSpec mc;
  mc.env = EnvironmentMode::MonteCarlo(4000, 99);
  const double estimate = *ExpectedCoverage(views, belief, mc, cam);
  // At most 12 unit-weight cells: the standard error is below 12/sqrt(4000).
  EXPECT_NEAR(estimate, truth, 4 * 12 / std::sqrt(4000.0));
  EXPECT_GT(truth, 1.0);
}

TEST(ExpectedCoverageTest, ExactModeRefusesLargeEnumerations) {
  const BeliefMap belief = BeliefMap::AllUnknown({30, 30, 10}, 0.1, 0.1);
  const TrajectoryAction a[] = {View(0, {1.5, 1.5, 0.5}, 0)};
  ObjectiveSpec spec;
  spec.env = EnvironmentMode::Exact(10);
  EXPECT_EQ(ExpectedCoverage(a, belief, spec, CameraModel{}).status().code(),
            absl::StatusCode::kResourceExhausted);
  const ViewObjective f(belief, CameraModel{}, spec);
  EXPECT_THROW(f.Value(a), std::length_error);
}

TEST(MutualInformationTest, NoUnknownCellsInView) {
  BeliefMap belief = BeliefMap::AllUnknown({4, 4, 1}, 0.1, 0.3);
  for (int x = 0; x < 4; ++x) {
    belief.grid[belief.grid.Flatten({x, 0, 0})] = CellState::kFree;
  }
  belief.grid[belief.grid.Flatten({3, 0, 0})] = CellState::kOccupied;
  const TrajectoryAction a[] = {View(0, belief.grid.CellToWorld({0, 0, 0}), 0)};
  // Narrow camera that only looks down the known row.
  CameraModel cam;
  cam.columns = 1;
  cam.rows = 1;
  EXPECT_EQ(*NoiselessMutualInformation(a, belief, cam, 20), 0.0);
}

TEST(MutualInformationTest, SingleAlwaysVisibleCellGivesItsEntropy) {
  for (double p : {0.05, 0.125, 0.5, 0.9}) {
    BeliefMap belief = BeliefMap::AllUnknown({2, 1, 1}, 0.1, p);
    belief.grid[0] = CellState::kFree;
    const TrajectoryAction a[] = {View(0, belief.grid.CellToWorld({0, 0, 0}), 0)};
    EXPECT_NEAR(*NoiselessMutualInformation(a, belief, CameraModel{}, 20),
                BinaryEntropyBits(p), 1e-15);
  }
}

TEST(MutualInformationTest, MatchesEntropyChainOnRandomInstances) {
  Rng rng(12);
  const CameraModel cam;
  for (int trial = 0; trial < 40; ++trial) {
    const BeliefMap belief =
        RandomBelief(rng, {3, 3, 1}, 6, rng.Uniform(0.05, 0.95), {0, 2});
    std::vector<TrajectoryAction> views = {
        View(0, belief.grid.CellToWorld({0, 0, 0}), 0),
        View(1, belief.grid.CellToWorld({2, 0, 0}), 1)};
    views.resize(1 + rng.Below(2));
    const double chain = oracle::MutualInformationByChain(views, belief, cam);
    EXPECT_NEAR(*NoiselessMutualInformation(views, belief, cam, 20), chain,
                1e-12);
    ObjectiveSpec spec;
    spec.weighting = Weighting::kEntropy;
    spec.env = EnvironmentMode::Exact();
    EXPECT_NEAR(*ExpectedCoverage(views, belief, spec, cam), chain, 1e-12);
  }
}

TEST(RaySumTest, SingleRayEqualsExpectedCoverage) {
  Rng rng(8);
  CameraModel cam;
  cam.columns = 1;
  cam.rows = 1;
  for (int trial = 0; trial < 20; ++trial) {
    const BeliefMap belief =
        RandomBelief(rng, {8, 1, 1}, 5, rng.Uniform(0.1, 0.9), {0});
    const TrajectoryAction a[] = {View(0, belief.grid.CellToWorld({0, 0, 0}), 0)};
    ObjectiveSpec exact;
    exact.env = EnvironmentMode::Exact();
    exact.weighting = Weighting::kEntropy;
    ObjectiveSpec rays = exact;
    rays.ray_sum = true;
    EXPECT_NEAR(*RaySumInformation(a, belief, rays, cam),
                *ExpectedCoverage(a, belief, exact, cam), 1e-12);
  }
}

TEST(RaySumTest, CoincidentViewsCountTwice) {
  const BeliefMap belief = BeliefMap::AllUnknown({20, 20, 10}, 0.1, 0.2);
  ObjectiveSpec spec;
  spec.ray_sum = true;
  const TrajectoryAction one[] = {View(0, {1.05, 1.05, 0.55}, 2)};
  const TrajectoryAction two[] = {View(0, {1.05, 1.05, 0.55}, 2),
                                  View(1, {1.05, 1.05, 0.55}, 2)};
  const CameraModel cam;
  const double single = *RaySumInformation(one, belief, spec, cam);
  EXPECT_GT(single, 0.0);
  EXPECT_DOUBLE_EQ(*RaySumInformation(two, belief, spec, cam), 2 * single);
}

TEST(RaySumTest, DominatesJointCoverage) {
  Rng rng(31);
  const CameraModel cam;
  for (int trial = 0; trial < 30; ++trial) {
    const BeliefMap belief =
        RandomBelief(rng, {4, 4, 2}, 10, rng.Uniform(0.05, 0.95), {0, 3});
    const std::vector<TrajectoryAction> views = {
        View(0, belief.grid.CellToWorld({0, 0, 0}), 0),
        View(1, belief.grid.CellToWorld({3, 0, 0}), 1)};
    ObjectiveSpec exact;
    exact.env = EnvironmentMode::Exact();
    exact.weighting = static_cast<Weighting>(rng.Below(3));
    ObjectiveSpec rays = exact;
    rays.ray_sum = true;
    EXPECT_GE(*RaySumInformation(views, belief, rays, cam) + 1e-12,
              *ExpectedCoverage(views, belief, exact, cam));
  }
}

TEST(DiscountTest, HandEvaluatedTwoStepAction) {
  // One forward ray. Step 1 looks down +x over 5 unknown cells, step 2 looks
  // down +y over 3 more.
  CameraModel cam;
  cam.columns = 1;
  cam.rows = 1;
  BeliefMap belief = BeliefMap::AllUnknown({6, 4, 1}, 0.1, 0.125);
  for (CellId id = 0; id < belief.grid.size(); ++id) {
    const CellIndex c = belief.grid.Unflatten(id);
    const bool unknown = (c.y == 0 && c.x >= 1) || (c.x == 0 && c.y >= 1);
    if (!unknown) belief.grid[id] = CellState::kFree;
  }
  belief.grid[0] = CellState::kFree;
  const TrajectoryAction a = Action(0, {belief.grid.CellToWorld({0, 0, 0}), 3},
                                    {Control::kYawLeft, Control::kYawLeft});
  ObjectiveSpec spec;
  spec.discount = 0.7;
  DistanceRewardConfig no_goals;
  no_goals.view_sample_count = 0;
  const TrajectoryAction x[] = {a};
  EXPECT_NEAR(*CombinedObjective(x, belief, spec, cam, no_goals),
              5 * 0.7 + 3 * 0.49, 1e-12);
  spec.discount = 1.0;
  EXPECT_NEAR(*CombinedObjective(x, belief, spec, cam, no_goals), 8.0, 1e-12);
  EXPECT_EQ(*CombinedObjective({}, belief, spec, cam, no_goals), 0.0);
}

TEST(MarginalGainTest, GainEqualsValueDifference) {
  Rng rng(17);
  const CameraModel cam;
  for (int trial = 0; trial < 24; ++trial) {
    const BeliefMap belief = RandomBelief(rng, {12, 12, 4}, 14, 0.2, {0});
    ObjectiveSpec spec;
    spec.discount = rng.Bernoulli(0.5) ? 0.7 : 1.0;
    spec.weighting = static_cast<Weighting>(rng.Below(3));
    switch (trial % 4) {
      case 0:
        spec.env = EnvironmentMode::Optimistic();
        break;
      case 1:
        spec.env = EnvironmentMode::MonteCarlo(5, trial);
        break;
      case 2:
        spec.env = EnvironmentMode::Exact();
        break;
      default:
        spec.ray_sum = true;
    }
    const ViewObjective f(belief, cam, spec);
    std::vector<TrajectoryAction> base;
    for (int r = 0; r < 2; ++r) {
      base.push_back(Action(r, {{0.55 + 0.2 * r, 0.55, 0.25}, r},
                            {Control::kYawLeft, Control::kForward}));
    }
    const TrajectoryAction x = Action(2, {{0.45, 0.65, 0.25}, 0},
                                      {Control::kForward, Control::kYawRight});
    ViewObjective::Conditioned marginal = f.Condition(base);
    std::vector<TrajectoryAction> joint = base;
    joint.push_back(x);
    EXPECT_NEAR(marginal.Gain(x), f.Value(joint) - f.Value(base), 1e-9)
        << "trial " << trial;
    // A second query on the same evaluator must not see the first.
    EXPECT_NEAR(marginal.Gain(x), f.Value(joint) - f.Value(base), 1e-9);
  }
}

TEST(InformativeViewsTest, ThresholdBehaviour) {
  BeliefMap belief = BeliefMap::AllUnknown({40, 40, 20}, 0.1, 0.125);
  // Known-free interior cube, unknown everywhere else.
  for (int x = 15; x < 25; ++x) {
    for (int y = 15; y < 25; ++y) {
      for (int z = 5; z < 15; ++z) {
        belief.grid[belief.grid.Flatten({x, y, z})] = CellState::kFree;
      }
    }
  }
  const CameraModel cam;
  DistanceRewardConfig cfg;
  cfg.view_value_threshold = 300;
  cfg.view_sample_count = 20;
  cfg.sample_seed = 1;
  const std::vector<RobotState> views = SampleInformativeViews(belief, cam, cfg);
  ASSERT_FALSE(views.empty());
  ViewObjective f(belief, cam, ObjectiveSpec{});
  for (const RobotState& v : views) {
    EXPECT_GE(f.OptimisticNewCells(v), 300u);
    std::size_t unknown_seen = 0;
    GroundTruthEnvironment open = OptimisticEnvironment(belief);
    for (CellId c : CameraVisibleSet(v, open, cam)) {
      unknown_seen += !belief.IsKnown(c);
    }
    EXPECT_EQ(unknown_seen, f.OptimisticNewCells(v));
  }

  cfg.view_value_threshold = 0;
  const std::vector<RobotState> all = SampleInformativeViews(belief, cam, cfg);
  EXPECT_GE(all.size(), views.size());
  EXPECT_LE(all.size(), 20u);

  for (CellId id = 0; id < belief.grid.size(); ++id) {
    belief.grid[id] = CellState::kFree;
  }
  cfg.view_value_threshold = 1;
  EXPECT_TRUE(SampleInformativeViews(belief, cam, cfg).empty());
}

TEST(DistanceFieldTest, GoalCorridorAndDetour) {
  BeliefMap belief = BeliefMap::AllUnknown({10, 7, 1}, 0.1, 0.125);
  for (CellId id = 0; id < belief.grid.size(); ++id) {
    belief.grid[id] = CellState::kFree;
  }
  // Wall at x = 5 with a gap at y = 6.
  for (int y = 0; y < 6; ++y) {
    belief.grid[belief.grid.Flatten({5, y, 0})] = CellState::kOccupied;
  }
  const RobotState goal{belief.grid.CellToWorld({8, 0, 0}), 0};
  const RobotState goals[] = {goal};
  const DistanceField field = ComputeDistanceField(belief, goals);
  EXPECT_EQ(field.At(goal.position), 0.0);
  // Corridor on the goal side: distance grows by one cell per step.
  EXPECT_DOUBLE_EQ(field.At(belief.grid.CellToWorld({9, 0, 0})), 0.1);
  EXPECT_DOUBLE_EQ(field.At(belief.grid.CellToWorld({6, 0, 0})), 0.2);
  const std::vector<double> hops = oracle::RelaxedDistances(
      belief, {belief.grid.Flatten({8, 0, 0})});
  for (CellId id = 0; id < belief.grid.size(); ++id) {
    const double got = field.meters[id];
    if (std::isinf(hops[id])) {
      EXPECT_TRUE(std::isinf(got));
    } else {
      EXPECT_NEAR(got, hops[id] * 0.1, 1e-12);
    }
  }
  // Behind the wall the path detours through the gap.
  EXPECT_NEAR(field.At(belief.grid.CellToWorld({4, 0, 0})), 1.6, 1e-12);
}

TEST(DistanceRewardTest, ProgressFractions) {
  BeliefMap belief = BeliefMap::AllUnknown({20, 1, 1}, 0.1, 0.125);
  for (CellId id = 0; id < belief.grid.size(); ++id) {
    belief.grid[id] = CellState::kFree;
  }
  const RobotState goals[] = {{belief.grid.CellToWorld({18, 0, 0}), 0}};
  const DistanceField field = ComputeDistanceField(belief, goals);
  const double alpha = 500.0;
  // d0 = 1.2 m; two forward steps reach the goal.
  const RobotState start{belief.grid.CellToWorld({6, 0, 0}), 0};
  EXPECT_DOUBLE_EQ(
      DistanceReward(Action(0, start, {Control::kForward, Control::kForward,
                                       Control::kForward, Control::kForward}),
                     field, alpha),
      alpha);
  EXPECT_EQ(DistanceReward(Action(0, start, {Control::kYawLeft}), field, alpha),
            0.0);
  // Two steps of 0.3 m halve the 1.2 m distance.
  EXPECT_DOUBLE_EQ(DistanceReward(Action(0, start, {Control::kForward,
                                                    Control::kForward}),
                                  field, alpha),
                   alpha / 2);
  const DistanceField none = ComputeDistanceField(belief, {});
  EXPECT_EQ(DistanceReward(Action(0, start, {Control::kForward}), none, alpha),
            0.0);
}

TEST(ObjectiveTest, DistanceRewardIsPerRobotMaximum) {
  BeliefMap belief = BeliefMap::AllUnknown({20, 1, 1}, 0.1, 0.125);
  for (CellId id = 0; id < belief.grid.size(); ++id) {
    belief.grid[id] = CellState::kFree;
  }
  const RobotState goals[] = {{belief.grid.CellToWorld({18, 0, 0}), 0}};
  const Objective f(belief, CameraModel{}, ObjectiveSpec{},
                    ComputeDistanceField(belief, goals), 100.0);
  const RobotState start{belief.grid.CellToWorld({6, 0, 0}), 0};
  const TrajectoryAction near =
      Action(0, start, {Control::kForward, Control::kForward});
  const TrajectoryAction far = Action(
      0, start, {Control::kForward, Control::kForward, Control::kForward,
                 Control::kForward});
  const TrajectoryAction both[] = {near, far};
  EXPECT_DOUBLE_EQ(f.Value(both), 100.0);
  Objective::Conditioned marginal = f.Condition(std::span(both, 1));
  EXPECT_DOUBLE_EQ(marginal.Gain(far), 50.0);
  EXPECT_DOUBLE_EQ(marginal.Gain(near), 0.0);
}

}  // namespace
}  // namespace volex
