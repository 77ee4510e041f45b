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

// Single-robot Monte-Carlo tree search and the multi-robot coordinators
// (myopic, sequential greedy, Randomized Sequential Partitions).
//
// Coordinators are written against BlockPlanner, which returns one robot's
// action given the decisions it may condition on. Planners are seeded per
// robot, never per call order, so any schedule reproduces the same output.

#ifndef VOLEX_PLANNERS_H_
#define VOLEX_PLANNERS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "volex/action.h"
#include "volex/objectives.h"

namespace volex {

enum class CoordinatorKind { kMyopic, kSequential, kRsp };

std::string_view CoordinatorName(CoordinatorKind kind);
absl::StatusOr<CoordinatorKind> ParseCoordinator(std::string_view name);

struct PlannerConfig {
  int horizon = 10;
  int mcts_samples = 200;
  double exploration_constant = 1500.0;  // c_p, raw reward units
  CoordinatorKind coordinator = CoordinatorKind::kSequential;
  int rounds = 1;  // n_d for RSP
  std::uint64_t rsp_seed = 0;
  bool lateral_controls = false;  // 8-action variant
  int threads = 1;

  absl::Status Validate() const;
  std::span<const Control> controls() const {
    return lateral_controls ? EightControls() : SixControls();
  }
};

// True iff every cell swept by the straight motion from `from` to `to` is
// known free (unknown counts as unsafe).
bool IsSegmentSafe(const BeliefMap& belief, const Eigen::Vector3d& from,
                   const Eigen::Vector3d& to);

// True iff states[0] sits in a known-free cell and every motion segment is
// safe.
bool IsSafe(const TrajectoryAction& action, const BeliefMap& belief);

// Controls applicable at `state` without leaving known-free space, in the
// fixed order of `controls`.
std::vector<Control> SafeControls(const RobotState& state,
                                  const BeliefMap& belief,
                                  std::span<const Control> controls);

// A trajectory that only yaws; always safe from a known-free cell.
TrajectoryAction StayInPlace(int robot, const RobotState& start, int horizon);

// UCT search over safe L-step control sequences maximizing marginal gain.
TrajectoryAction MctsPlan(int robot, const RobotState& start,
                          const BeliefMap& belief,
                          Objective::Conditioned& marginal,
                          const PlannerConfig& cfg, std::uint64_t seed);

// Returns one robot's decision given the assignment it conditions on, or
// nullopt when the robot has nothing to choose from.
using BlockPlanner = std::function<std::optional<TrajectoryAction>(
    int robot, std::span<const TrajectoryAction> conditioning)>;

// MCTS for each robot from `starts[robot]`; seed derived from
// (round_seed, robot).
BlockPlanner MakeMctsPlanner(const Objective& objective,
                             const BeliefMap& belief,
                             std::vector<RobotState> starts,
                             const PlannerConfig& cfg, std::uint64_t round_seed);

// Exhaustive argmax of the marginal gain over a fixed menu per robot; ties
// go to the lowest menu index.
BlockPlanner MakeMenuPlanner(const Objective& objective,
                             std::vector<std::vector<TrajectoryAction>> menus);

// Runs fn(0..n-1) over up to `threads` workers.
void ParallelFor(int n, int threads, const std::function<void(int)>& fn);

// Robots planned in `order`, each conditioned on all earlier decisions.
Assignment SequentialGreedy(std::span<const int> order,
                            const BlockPlanner& planner);

// Every robot conditioned on nothing.
Assignment MyopicPlan(int robot_count, const BlockPlanner& planner,
                      int threads);

// Round (1..n_d) drawn uniformly and independently for each robot.
std::vector<int> RspRounds(int robot_count, int rounds, std::uint64_t seed);

// Robots in round k condition on the decisions of rounds 1..k-1 only; robots
// sharing a round plan in parallel.
Assignment RspPlan(int robot_count, int rounds, std::uint64_t seed,
                   const BlockPlanner& planner, int threads);

// Dispatch on cfg.coordinator. Output is sorted by robot.
Assignment Coordinate(const PlannerConfig& cfg, int robot_count,
                      const BlockPlanner& planner);

}  // namespace volex

#endif  // VOLEX_PLANNERS_H_
