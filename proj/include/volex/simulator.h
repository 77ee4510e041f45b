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

// Receding-horizon multi-robot exploration: plan, execute the first control
// of every robot, observe, fuse, log. Every random draw derives from the
// master seed, so a run is reproducible from its resolved configuration.

#ifndef VOLEX_SIMULATOR_H_
#define VOLEX_SIMULATOR_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"
#include "volex/bounds.h"
#include "volex/grid.h"
#include "volex/objectives.h"
#include "volex/planners.h"
#include "volex/sensing.h"

namespace volex {

struct EnvironmentSpec {
  enum class Kind { kEmpty, kBoxes, kFile };

  Kind kind = Kind::kBoxes;
  Eigen::Vector3d extent{4.0, 4.0, 2.0};
  double resolution = 0.1;
  int box_count = 8;
  double min_box_size = 0.3;
  double max_box_size = 1.0;
  std::uint64_t seed = 1;  // environment layout, independent of the run seed
  std::string path;        // kFile
};

struct ExperimentConfig {
  EnvironmentSpec environment;
  int robot_count = 4;
  std::optional<Eigen::Vector3d> start;  // defaults to the extent center
  double start_perturbation = 0.5;       // ball radius, meters
  CameraModel camera;
  PlannerConfig planner;
  ObjectiveSpec objective;
  double occupancy_prior = 0.125;
  DistanceRewardConfig distance;
  int max_iterations = 400;
  double completion_fraction = 0.9;
  // Completion target in cells; computed analytically when unset.
  std::optional<double> exploration_volume_cells;
  bool compute_bounds = true;
  bool record_wall_clock = false;
  std::uint64_t seed = 0;

  absl::Status Validate() const;
};

struct MetricsRecord {
  int iteration = 0;
  int robot_iterations = 0;
  std::size_t covered_cells = 0;
  double coverage_m3 = 0.0;
  double objective_value = 0.0;
  BoundReport bounds;
  double plan_wall_ms = 0.0;
};

absl::StatusOr<GroundTruthEnvironment> BuildEnvironment(
    const EnvironmentSpec& spec, const std::optional<Eigen::Vector3d>& start);

// Free cells 6-connected to the start cell plus the occupied cells adjacent
// to them: every cell a robot could ever observe.
std::size_t ExplorationVolumeCells(const GroundTruthEnvironment& env,
                                   const Eigen::Vector3d& start);

// Cells observed so far; equals |union of F_cam over executed states| under
// noiseless fusion.
std::size_t EnvironmentCoverage(const BeliefMap& belief);

class Simulation {
 public:
  static absl::StatusOr<Simulation> Create(const ExperimentConfig& config);

  // One receding-horizon iteration.
  absl::StatusOr<MetricsRecord> Step();

  const ExperimentConfig& config() const { return config_; }
  const GroundTruthEnvironment& environment() const { return env_; }
  const BeliefMap& belief() const { return belief_; }
  const std::vector<RobotState>& robots() const { return robots_; }
  // Every state a robot has occupied, in execution order.
  const std::vector<RobotState>& executed_states() const { return executed_; }
  int iteration() const { return iteration_; }
  double exploration_volume_cells() const { return exploration_volume_; }
  const MetricsRecord& initial_record() const { return initial_; }

 private:
  Simulation() = default;
  absl::Status ObserveAll();
  MetricsRecord Record(double objective_value, const BoundReport& bounds,
                       double wall_ms) const;

  ExperimentConfig config_;
  GroundTruthEnvironment env_;
  BeliefMap belief_;
  std::vector<RobotState> robots_;
  std::vector<RobotState> executed_;
  int iteration_ = 0;
  double exploration_volume_ = 0.0;
  MetricsRecord initial_;
};

struct RunResult {
  std::vector<MetricsRecord> records;
  bool completed = false;
  int completion_iteration = -1;
  int completion_robot_iterations = -1;
  double exploration_volume_cells = 0.0;
  std::uint64_t environment_hash = 0;
};

absl::StatusOr<RunResult> RunExperiment(const ExperimentConfig& config);

inline constexpr char kCsvHeader[] =
    "iter,robot_iters,covered_cells,coverage_m3,objective_value,online_bound,"
    "oblivious_bound,online_ratio,oblivious_ratio,best_ratio,plan_wall_ms";

void WriteCsv(std::ostream& out, const std::vector<MetricsRecord>& records);

nlohmann::json ConfigToJson(const ExperimentConfig& config);
absl::StatusOr<ExperimentConfig> ConfigFromJson(const nlohmann::json& json);

// Resolved config plus seeds, environment hash and outcome.
nlohmann::json RunManifest(const ExperimentConfig& config,
                           const RunResult& result);

}  // namespace volex

#endif  // VOLEX_SIMULATOR_H_
