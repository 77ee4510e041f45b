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

// Volumetric exploration rewards.
//
// Every view reward here is an expected weighted coverage
//
//   f_view(X) = E_{E'} [ sum_{c in C(X,E')} w(c) * gamma^{l(c)} ]
//
// where C(X,E') is the union of the camera visible sets of all future states
// of the actions in X evaluated on environment E', and l(c) is the earliest
// trajectory step at which any action covers c. The expectation is taken
// over a single optimistic environment (unknown = free), a fixed set of
// Monte-Carlo samples, or every instantiation of the relevant unknown cells.
//
// The one exception is the ray-sum baseline, which scores each camera ray
// independently and adds the results, double counting shared cells.

#ifndef VOLEX_OBJECTIVES_H_
#define VOLEX_OBJECTIVES_H_

#include <cstdint>
#include <limits>
#include <memory>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "volex/action.h"
#include "volex/grid.h"
#include "volex/sensing.h"

namespace volex {

enum class Weighting {
  kUnitNewCell,    // 1 per unknown cell, 0 per known cell
  kEntropy,        // binary entropy of the cell, in bits
  kScaledEntropy,  // entropy divided by H(prior): unknown cells weigh 1
};

struct EnvironmentMode {
  enum class Kind { kOptimistic, kMonteCarlo, kExact };

  Kind kind = Kind::kOptimistic;
  int samples = 1;          // kMonteCarlo
  std::uint64_t seed = 0;   // kMonteCarlo
  int enumeration_limit = 20;  // kExact: max relevant unknown cells

  static EnvironmentMode Optimistic() { return {}; }
  static EnvironmentMode MonteCarlo(int samples, std::uint64_t seed) {
    return {Kind::kMonteCarlo, samples, seed, 20};
  }
  static EnvironmentMode Exact(int enumeration_limit = 20) {
    return {Kind::kExact, 1, 0, enumeration_limit};
  }
};

struct ObjectiveSpec {
  Weighting weighting = Weighting::kUnitNewCell;
  EnvironmentMode env;
  double discount = 1.0;  // gamma in (0, 1]
  bool ray_sum = false;

  absl::Status Validate() const;
};

struct DistanceRewardConfig {
  double view_value_threshold = 900.0;  // epsilon_view, reward units
  double distance_factor = 500.0;       // alpha, reward units
  int view_sample_count = 100;
  std::uint64_t sample_seed = 0;

  absl::Status Validate() const;
};

// Binary entropy in bits; 0 at p in {0, 1}.
double BinaryEntropyBits(double p);

// Per-cell weights for `belief`; known cells weigh 0.
std::vector<double> CellWeights(const BeliefMap& belief, Weighting weighting);

// Hashable identity of a RobotState (exact bit pattern of the position).
struct StateKey {
  std::uint64_t x, y, z;
  int yaw;
  explicit StateKey(const RobotState& s);
  bool operator==(const StateKey&) const = default;
};
struct StateKeyHash {
  std::size_t operator()(const StateKey& k) const;
};

// Thread-safe memo of camera visible sets on one fixed environment, keeping
// only cells with keep_mask[c] != 0.
class VisibilityCache {
 public:
  VisibilityCache(GroundTruthEnvironment env, CameraModel cam,
                  std::vector<std::uint8_t> keep_mask);

  const std::vector<CellId>& Get(const RobotState& state) const;
  const GroundTruthEnvironment& environment() const { return env_; }

 private:
  GroundTruthEnvironment env_;
  CameraModel cam_;
  std::vector<std::uint8_t> keep_;
  std::vector<Eigen::Vector3d> rays_[4];
  mutable std::shared_mutex mu_;
  mutable std::unordered_map<StateKey, std::vector<CellId>, StateKeyHash> map_;
};

// Distinct ray cell sequences of one view on the optimistic environment;
// each sequence ends at the grid boundary, the range limit, or a known
// occupied cell (included).
using RayBundle = std::vector<std::vector<CellId>>;

RayBundle OptimisticRayBundle(const RobotState& state, const BeliefMap& belief,
                              const GroundTruthEnvironment& optimistic,
                              const CameraModel& cam);

// Expected weighted coverage (or the ray-sum baseline) under one belief
// snapshot. Instances are safe to share across threads; Conditioned
// evaluators are not.
class ViewObjective {
 public:
  ViewObjective(const BeliefMap& belief, const CameraModel& cam,
                ObjectiveSpec spec);
  ~ViewObjective();

  // f_view(X). Exact mode throws std::length_error when the relevant unknown
  // cells exceed the enumeration limit; use TryValue to get a status.
  double Value(std::span<const TrajectoryAction> actions) const;
  absl::StatusOr<double> TryValue(
      std::span<const TrajectoryAction> actions) const;

  // Marginal gains f_view(x | X) for a fixed conditioning set X.
  class Conditioned {
   public:
    double Gain(const TrajectoryAction& action);

   private:
    friend class ViewObjective;
    const ViewObjective* parent_ = nullptr;
    std::vector<TrajectoryAction> conditioning_;
    double base_value_ = 0.0;
    // Per scenario, per cell: best discount already credited by X.
    std::vector<std::vector<double>> credited_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 0;
  };

  Conditioned Condition(std::span<const TrajectoryAction> conditioning) const;

  // Count of unknown cells in one view on the optimistic environment.
  std::size_t OptimisticNewCells(const RobotState& state) const;

  const ObjectiveSpec& spec() const { return spec_; }
  const BeliefMap& belief() const { return belief_; }
  const CameraModel& camera() const { return cam_; }
  const std::vector<double>& weights() const { return weights_; }

  // Unknown cells reachable by the views of `actions` (any instantiation).
  std::vector<CellId> RelevantUnknownCells(
      std::span<const TrajectoryAction> actions) const;

 private:
  struct Scenario {
    double probability;
    std::unique_ptr<VisibilityCache> cache;
  };

  double ScenarioValue(const Scenario& scenario,
                       std::span<const TrajectoryAction> actions) const;
  absl::StatusOr<double> ExactValue(
      std::span<const TrajectoryAction> actions) const;
  double RaySumValue(std::span<const TrajectoryAction> actions) const;
  double RayValue(const RobotState& state) const;
  const RayBundle& Bundle(const RobotState& state) const;

  const BeliefMap& belief_;
  CameraModel cam_;
  ObjectiveSpec spec_;
  std::vector<double> weights_;
  GroundTruthEnvironment optimistic_;
  std::unique_ptr<VisibilityCache> unknown_cache_;  // optimistic, unknown cells
  std::vector<Scenario> scenarios_;                 // optimistic / Monte-Carlo

  mutable std::shared_mutex mu_;
  mutable std::unordered_map<StateKey, RayBundle, StateKeyHash> bundles_;
  mutable std::unordered_map<StateKey, double, StateKeyHash> ray_values_;
};

// Union of F_cam over all future states (states[1..L]) of the actions.
std::vector<CellId> CoveredCells(std::span<const TrajectoryAction> actions,
                                 const GroundTruthEnvironment& env,
                                 const CameraModel& cam);

absl::StatusOr<double> ExpectedCoverage(
    std::span<const TrajectoryAction> actions, const BeliefMap& belief,
    const ObjectiveSpec& spec, const CameraModel& cam);

// I(E; Y(X)) for noiseless observations and independent cells, computed as
// the entropy of the observation outcome by enumerating every instantiation
// of the relevant unknown cells.
absl::StatusOr<double> NoiselessMutualInformation(
    std::span<const TrajectoryAction> actions, const BeliefMap& belief,
    const CameraModel& cam, int enumeration_limit);

absl::StatusOr<double> RaySumInformation(
    std::span<const TrajectoryAction> actions, const BeliefMap& belief,
    const ObjectiveSpec& spec, const CameraModel& cam);

// Candidate views drawn uniformly over known-free cells x 4 yaws, kept when
// their optimistic single-view coverage reaches the threshold.
std::vector<RobotState> SampleInformativeViews(const BeliefMap& belief,
                                               const CameraModel& cam,
                                               const DistanceRewardConfig& cfg);
std::vector<RobotState> SampleInformativeViews(const ViewObjective& objective,
                                               const DistanceRewardConfig& cfg);

// Multi-source BFS distance (meters) over the 6-connected known-free lattice.
struct DistanceField {
  VoxelGrid3<double> meters;
  bool has_goals = false;

  double At(const Eigen::Vector3d& position) const;
  static constexpr double kUnreachable = std::numeric_limits<double>::infinity();
};

DistanceField ComputeDistanceField(const BeliefMap& belief,
                                   std::span<const RobotState> goal_views);

// alpha * max(0, d0 - min_l d_l) / max(d0, resolution), 0 without goals.
double DistanceReward(const TrajectoryAction& action, const DistanceField& field,
                      double alpha);

// f(X) = f_view(X) + sum_r f_dist(X_r).
class Objective {
 public:
  Objective(const BeliefMap& belief, const CameraModel& cam, ObjectiveSpec spec,
            DistanceField field, double alpha);

  double Value(std::span<const TrajectoryAction> actions) const;

  class Conditioned {
   public:
    double Gain(const TrajectoryAction& action);
    double DistanceGain(const TrajectoryAction& action) const;

   private:
    friend class Objective;
    const Objective* parent_ = nullptr;
    ViewObjective::Conditioned view_;
    std::unordered_map<int, double> robot_distance_;  // max f_dist per robot
  };

  Conditioned Condition(std::span<const TrajectoryAction> conditioning) const;

  const ViewObjective& view() const { return view_; }
  const DistanceField& field() const { return field_; }
  double alpha() const { return alpha_; }

 private:
  ViewObjective view_;
  DistanceField field_;
  double alpha_;
};

// Convenience: samples informative views, builds the distance field and
// evaluates f(X).
absl::StatusOr<double> CombinedObjective(
    std::span<const TrajectoryAction> actions, const BeliefMap& belief,
    const ObjectiveSpec& spec, const CameraModel& cam,
    const DistanceRewardConfig& dist_cfg);

}  // namespace volex

#endif  // VOLEX_OBJECTIVES_H_
