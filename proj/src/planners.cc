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

#include "volex/planners.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "absl/strings/str_cat.h"
#include "volex/rng.h"

namespace volex {

std::string_view CoordinatorName(CoordinatorKind kind) {
  switch (kind) {
    case CoordinatorKind::kMyopic:
      return "myopic";
    case CoordinatorKind::kSequential:
      return "sequential";
    case CoordinatorKind::kRsp:
      return "rsp";
  }
  return "?";
}

absl::StatusOr<CoordinatorKind> ParseCoordinator(std::string_view name) {
  if (name == "myopic") return CoordinatorKind::kMyopic;
  if (name == "sequential") return CoordinatorKind::kSequential;
  if (name == "rsp") return CoordinatorKind::kRsp;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown planner '", std::string(name), "'"));
}

absl::Status PlannerConfig::Validate() const {
  if (horizon < 1) return absl::InvalidArgumentError("horizon must be >= 1");
  if (mcts_samples < 1) {
    return absl::InvalidArgumentError("mcts samples must be >= 1");
  }
  if (rounds < 1) return absl::InvalidArgumentError("rounds must be >= 1");
  if (!(exploration_constant >= 0.0)) {
    return absl::InvalidArgumentError("c_p must be non-negative");
  }
  if (threads < 1) return absl::InvalidArgumentError("threads must be >= 1");
  return absl::OkStatus();
}

bool IsSegmentSafe(const BeliefMap& belief, const Eigen::Vector3d& from,
                   const Eigen::Vector3d& to) {
  std::optional<CellIndex> end = belief.grid.WorldToCell(to);
  if (!end || belief.grid.at(*end) != CellState::kFree) return false;
  const Eigen::Vector3d delta = to - from;
  const double length = delta.norm();
  bool safe = true;
  const bool inside = TraverseSegment(
      belief.grid, from, length > 0.0 ? Eigen::Vector3d(delta / length) : delta,
      length, [&](CellId id) {
        if (belief.grid[id] != CellState::kFree) {
          safe = false;
          return true;
        }
        return false;
      });
  return inside && safe;
}

bool IsSafe(const TrajectoryAction& action, const BeliefMap& belief) {
  if (action.states.empty()) return false;
  std::optional<CellIndex> start =
      belief.grid.WorldToCell(action.states.front().position);
  if (!start || belief.grid.at(*start) != CellState::kFree) return false;
  for (std::size_t l = 1; l < action.states.size(); ++l) {
    const Eigen::Vector3d& from = action.states[l - 1].position;
    const Eigen::Vector3d& to = action.states[l].position;
    if (from != to && !IsSegmentSafe(belief, from, to)) return false;
  }
  return true;
}

std::vector<Control> SafeControls(const RobotState& state,
                                  const BeliefMap& belief,
                                  std::span<const Control> controls) {
  std::vector<Control> safe;
  for (Control u : controls) {
    if (IsYaw(u) ||
        IsSegmentSafe(belief, state.position, ApplyDynamics(state, u).position)) {
      safe.push_back(u);
    }
  }
  return safe;
}

TrajectoryAction StayInPlace(int robot, const RobotState& start, int horizon) {
  std::vector<Control> controls(static_cast<std::size_t>(horizon),
                                Control::kYawLeft);
  return TrajectoryAction::FromControls(robot, start, controls);
}

namespace {

struct Node {
  RobotState state;
  int depth = 0;
  Control via = Control::kYawLeft;
  bool initialized = false;
  std::vector<Control> untried;  // safe, not yet expanded, in fixed order
  std::vector<int> children;     // node indices in expansion order
  int visits = 0;
  double total = 0.0;
  double best_reward = -1.0;
  std::vector<Control> best_controls;  // full sequence from the root

  double Mean() const { return visits > 0 ? total / visits : 0.0; }
};

}  // namespace

TrajectoryAction MctsPlan(int robot, const RobotState& start,
                          const BeliefMap& belief,
                          Objective::Conditioned& marginal,
                          const PlannerConfig& cfg, std::uint64_t seed) {
  const int horizon = cfg.horizon;
  std::optional<CellIndex> start_cell = belief.grid.WorldToCell(start.position);
  if (!start_cell || belief.grid.at(*start_cell) != CellState::kFree) {
    return StayInPlace(robot, start, horizon);
  }
  const std::span<const Control> control_set = cfg.controls();
  Rng rng(seed);

  std::vector<Node> nodes;
  nodes.reserve(static_cast<std::size_t>(cfg.mcts_samples) + 1);
  nodes.emplace_back().state = start;
  auto initialize = [&](int index) {
    Node& node = nodes[index];
    if (node.initialized) return;
    node.initialized = true;
    node.untried = SafeControls(node.state, belief, control_set);
  };

  std::vector<int> path;
  std::vector<Control> controls;
  for (int sample = 0; sample < cfg.mcts_samples; ++sample) {
    path.assign(1, 0);
    controls.clear();
    int current = 0;
    // Selection and expansion.
    while (nodes[current].depth < horizon) {
      initialize(current);
      if (!nodes[current].untried.empty()) {
        const Control u = nodes[current].untried.front();
        nodes[current].untried.erase(nodes[current].untried.begin());
        Node child;
        child.state = ApplyDynamics(nodes[current].state, u);
        child.depth = nodes[current].depth + 1;
        child.via = u;
        const int child_index = static_cast<int>(nodes.size());
        nodes.push_back(std::move(child));
        nodes[current].children.push_back(child_index);
        controls.push_back(u);
        path.push_back(child_index);
        current = child_index;
        break;
      }
      if (nodes[current].children.empty()) break;
      const double log_parent = std::log(std::max(1, nodes[current].visits));
      int best = -1;
      double best_score = -std::numeric_limits<double>::infinity();
      for (int child : nodes[current].children) {
        const Node& c = nodes[child];
        const double score =
            c.visits == 0
                ? std::numeric_limits<double>::infinity()
                : c.Mean() + cfg.exploration_constant *
                                 std::sqrt(2.0 * log_parent / c.visits);
        if (score > best_score) {
          best_score = score;
          best = child;
        }
      }
      controls.push_back(nodes[best].via);
      path.push_back(best);
      current = best;
    }
    // Rollout.
    RobotState state = nodes[current].state;
    for (int depth = nodes[current].depth; depth < horizon; ++depth) {
      const std::vector<Control> safe = SafeControls(state, belief, control_set);
      const Control u = safe[rng.Below(safe.size())];
      controls.push_back(u);
      state = ApplyDynamics(state, u);
    }
    const TrajectoryAction candidate =
        TrajectoryAction::FromControls(robot, start, controls);
    const double reward = marginal.Gain(candidate);
    for (int index : path) {
      Node& node = nodes[index];
      ++node.visits;
      node.total += reward;
      if (reward > node.best_reward) {
        node.best_reward = reward;
        node.best_controls = controls;
      }
    }
  }

  // Robust child chain, then the best sampled continuation.
  std::vector<Control> chosen;
  int current = 0;
  while (true) {
    int best = -1;
    for (int child : nodes[current].children) {
      const Node& c = nodes[child];
      if (c.visits == 0) continue;
      if (best < 0 || c.visits > nodes[best].visits ||
          (c.visits == nodes[best].visits && c.Mean() > nodes[best].Mean())) {
        best = child;
      }
    }
    if (best < 0) break;
    chosen.push_back(nodes[best].via);
    current = best;
  }
  const std::vector<Control>& tail = nodes[current].best_controls;
  for (std::size_t l = chosen.size(); l < tail.size(); ++l) {
    chosen.push_back(tail[l]);
  }
  return TrajectoryAction::FromControls(robot, start, chosen);
}

BlockPlanner MakeMctsPlanner(const Objective& objective,
                             const BeliefMap& belief,
                             std::vector<RobotState> starts,
                             const PlannerConfig& cfg,
                             std::uint64_t round_seed) {
  return [&objective, &belief, starts = std::move(starts), cfg, round_seed](
             int robot, std::span<const TrajectoryAction> conditioning)
             -> std::optional<TrajectoryAction> {
    Objective::Conditioned marginal = objective.Condition(conditioning);
    return MctsPlan(robot, starts.at(robot), belief, marginal, cfg,
                    DeriveSeed(round_seed, {static_cast<std::uint64_t>(robot)}));
  };
}

BlockPlanner MakeMenuPlanner(const Objective& objective,
                             std::vector<std::vector<TrajectoryAction>> menus) {
  return [&objective, menus = std::move(menus)](
             int robot, std::span<const TrajectoryAction> conditioning)
             -> std::optional<TrajectoryAction> {
    const std::vector<TrajectoryAction>& menu = menus.at(robot);
    if (menu.empty()) return std::nullopt;
    Objective::Conditioned marginal = objective.Condition(conditioning);
    std::size_t best = 0;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < menu.size(); ++i) {
      const double gain = marginal.Gain(menu[i]);
      if (gain > best_gain) {
        best_gain = gain;
        best = i;
      }
    }
    return menu[best];
  };
}

void ParallelFor(int n, int threads, const std::function<void(int)>& fn) {
  const int workers = std::min(std::max(1, threads), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
}

namespace {

void SortByRobot(Assignment& assignment) {
  std::sort(assignment.begin(), assignment.end(),
            [](const TrajectoryAction& a, const TrajectoryAction& b) {
              return a.robot < b.robot;
            });
}

}  // namespace

Assignment SequentialGreedy(std::span<const int> order,
                            const BlockPlanner& planner) {
  Assignment assignment;
  for (int robot : order) {
    std::optional<TrajectoryAction> action = planner(robot, assignment);
    if (action) assignment.push_back(std::move(*action));
  }
  SortByRobot(assignment);
  return assignment;
}

Assignment MyopicPlan(int robot_count, const BlockPlanner& planner,
                      int threads) {
  std::vector<std::optional<TrajectoryAction>> decisions(robot_count);
  ParallelFor(robot_count, threads,
              [&](int robot) { decisions[robot] = planner(robot, {}); });
  Assignment assignment;
  for (auto& d : decisions) {
    if (d) assignment.push_back(std::move(*d));
  }
  return assignment;
}

std::vector<int> RspRounds(int robot_count, int rounds, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> assigned(robot_count);
  for (int& r : assigned) r = 1 + static_cast<int>(rng.Below(rounds));
  return assigned;
}

Assignment RspPlan(int robot_count, int rounds, std::uint64_t seed,
                   const BlockPlanner& planner, int threads) {
  const std::vector<int> round_of = RspRounds(robot_count, rounds, seed);
  Assignment earlier;
  for (int round = 1; round <= rounds; ++round) {
    std::vector<int> members;
    for (int robot = 0; robot < robot_count; ++robot) {
      if (round_of[robot] == round) members.push_back(robot);
    }
    if (members.empty()) continue;
    // Same-round robots see the decisions frozen at round start.
    const Assignment frozen = earlier;
    std::vector<std::optional<TrajectoryAction>> decisions(members.size());
    ParallelFor(static_cast<int>(members.size()), threads, [&](int i) {
      decisions[i] = planner(members[i], frozen);
    });
    for (auto& d : decisions) {
      if (d) earlier.push_back(std::move(*d));
    }
  }
  SortByRobot(earlier);
  return earlier;
}

Assignment Coordinate(const PlannerConfig& cfg, int robot_count,
                      const BlockPlanner& planner) {
  switch (cfg.coordinator) {
    case CoordinatorKind::kMyopic:
      return MyopicPlan(robot_count, planner, cfg.threads);
    case CoordinatorKind::kSequential: {
      std::vector<int> order(robot_count);
      std::iota(order.begin(), order.end(), 0);
      return SequentialGreedy(order, planner);
    }
    case CoordinatorKind::kRsp:
      return RspPlan(robot_count, cfg.rounds, cfg.rsp_seed, planner,
                     cfg.threads);
  }
  return {};
}

}  // namespace volex
