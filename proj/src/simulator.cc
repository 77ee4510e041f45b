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

#include "volex/simulator.h"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <deque>

#include "absl/strings/str_cat.h"
#include "volex/rng.h"

namespace volex {
namespace {

// Stream tags for DeriveSeed(master, {iteration, tag}).
enum SeedStream : std::uint64_t {
  kStartStream = 1,
  kPlanStream = 2,
  kRspStream = 3,
  kViewStream = 4,
  kMonteCarloStream = 5,
  kBoundStream = 6,
};

Eigen::Vector3d StartOf(const ExperimentConfig& config,
                        const GroundTruthEnvironment& env) {
  return config.start.value_or(DefaultStart(env.grid.Extent()));
}

}  // namespace

absl::Status ExperimentConfig::Validate() const {
  if (robot_count < 1) return absl::InvalidArgumentError("robot_count >= 1");
  if (!(completion_fraction >= 0.0 && completion_fraction <= 1.0)) {
    return absl::InvalidArgumentError("completion_fraction must lie in [0, 1]");
  }
  if (max_iterations < 0) {
    return absl::InvalidArgumentError("max_iterations must be >= 0");
  }
  if (!(occupancy_prior > 0.0 && occupancy_prior < 1.0)) {
    return absl::InvalidArgumentError("occupancy prior must lie in (0, 1)");
  }
  if (!(start_perturbation >= 0.0)) {
    return absl::InvalidArgumentError("start perturbation must be >= 0");
  }
  if (absl::Status s = camera.Validate(); !s.ok()) return s;
  if (absl::Status s = planner.Validate(); !s.ok()) return s;
  if (absl::Status s = objective.Validate(); !s.ok()) return s;
  if (absl::Status s = distance.Validate(); !s.ok()) return s;
  return absl::OkStatus();
}

absl::StatusOr<GroundTruthEnvironment> BuildEnvironment(
    const EnvironmentSpec& spec, const std::optional<Eigen::Vector3d>& start) {
  switch (spec.kind) {
    case EnvironmentSpec::Kind::kEmpty:
      return GenerateEmpty(spec.extent, spec.resolution);
    case EnvironmentSpec::Kind::kBoxes: {
      BoxesParams params;
      params.extent = spec.extent;
      params.resolution = spec.resolution;
      params.box_count = spec.box_count;
      params.min_box_size = spec.min_box_size;
      params.max_box_size = spec.max_box_size;
      params.start = start;
      return GenerateBoxes(spec.seed, params);
    }
    case EnvironmentSpec::Kind::kFile:
      return LoadEnvironment(spec.path);
  }
  return absl::InvalidArgumentError("unknown environment kind");
}

std::size_t ExplorationVolumeCells(const GroundTruthEnvironment& env,
                                   const Eigen::Vector3d& start) {
  std::optional<CellIndex> s = env.grid.WorldToCell(start);
  if (!s) return 0;
  const CellId start_id = env.grid.Flatten(*s);
  if (env.IsOccupied(start_id)) return 0;
  std::vector<std::uint8_t> counted(env.grid.size(), 0);
  std::deque<CellId> queue{start_id};
  counted[start_id] = 1;
  std::size_t total = 1;
  static constexpr int kOffsets[6][3] = {{1, 0, 0},  {-1, 0, 0}, {0, 1, 0},
                                         {0, -1, 0}, {0, 0, 1},  {0, 0, -1}};
  while (!queue.empty()) {
    const CellIndex c = env.grid.Unflatten(queue.front());
    queue.pop_front();
    for (const auto& o : kOffsets) {
      const CellIndex n{c.x + o[0], c.y + o[1], c.z + o[2]};
      if (!env.grid.Contains(n)) continue;
      const CellId id = env.grid.Flatten(n);
      if (counted[id]) continue;
      counted[id] = 1;
      ++total;
      if (!env.IsOccupied(id)) queue.push_back(id);
    }
  }
  return total;
}

std::size_t EnvironmentCoverage(const BeliefMap& belief) {
  return belief.KnownCount();
}

absl::StatusOr<Simulation> Simulation::Create(const ExperimentConfig& config) {
  if (absl::Status s = config.Validate(); !s.ok()) return s;
  absl::StatusOr<GroundTruthEnvironment> env =
      BuildEnvironment(config.environment, config.start);
  if (!env.ok()) return env.status();

  Simulation sim;
  sim.config_ = config;
  sim.env_ = *std::move(env);
  const Eigen::Vector3d start = StartOf(config, sim.env_);
  std::optional<CellIndex> start_cell = sim.env_.grid.WorldToCell(start);
  if (!start_cell || sim.env_.grid.at(*start_cell) != 0) {
    return absl::FailedPreconditionError(
        "infeasible start: start cell is occupied or outside the map");
  }
  sim.belief_ = BeliefMap::AllUnknown(sim.env_.grid.dims(),
                                      sim.env_.grid.resolution(),
                                      config.occupancy_prior);
  sim.exploration_volume_ = config.exploration_volume_cells.value_or(
      static_cast<double>(ExplorationVolumeCells(sim.env_, start)));

  // Perturbed starts: uniform in a ball, restricted to free cells.
  Rng rng(DeriveSeed(config.seed, {0, kStartStream}));
  const double radius = config.start_perturbation;
  for (int r = 0; r < config.robot_count; ++r) {
    RobotState state;
    state.position = start;
    for (int attempt = 0; attempt < 1000 && radius > 0.0; ++attempt) {
      const Eigen::Vector3d offset(rng.Uniform(-radius, radius),
                                   rng.Uniform(-radius, radius),
                                   rng.Uniform(-radius, radius));
      if (offset.norm() > radius) continue;
      std::optional<CellIndex> c = sim.env_.grid.WorldToCell(start + offset);
      if (!c || sim.env_.grid.at(*c) != 0) continue;
      state.position = start + offset;
      break;
    }
    state.yaw_quarters = static_cast<int>(rng.Below(4));
    sim.robots_.push_back(state);
  }
  if (absl::Status s = sim.ObserveAll(); !s.ok()) return s;
  sim.initial_ = sim.Record(0.0, BoundReport{}, 0.0);
  return sim;
}

absl::Status Simulation::ObserveAll() {
  for (const RobotState& robot : robots_) {
    executed_.push_back(robot);
    if (absl::Status s =
            FuseObservation(belief_, Observe(robot, env_, config_.camera));
        !s.ok()) {
      return s;
    }
  }
  return absl::OkStatus();
}

MetricsRecord Simulation::Record(double objective_value,
                                 const BoundReport& bounds,
                                 double wall_ms) const {
  MetricsRecord record;
  record.iteration = iteration_;
  record.robot_iterations = iteration_ * config_.robot_count;
  record.covered_cells = EnvironmentCoverage(belief_);
  record.coverage_m3 = record.covered_cells * env_.grid.CellVolume();
  record.objective_value = objective_value;
  record.bounds = bounds;
  record.plan_wall_ms = wall_ms;
  return record;
}

absl::StatusOr<MetricsRecord> Simulation::Step() {
  const auto clock_start = std::chrono::steady_clock::now();
  ++iteration_;
  const std::uint64_t it = static_cast<std::uint64_t>(iteration_);
  const std::uint64_t seed = config_.seed;

  DistanceRewardConfig view_cfg = config_.distance;
  view_cfg.sample_seed = DeriveSeed(seed, {it, kViewStream});
  ViewObjective sampler(belief_, config_.camera, ObjectiveSpec{});
  const std::vector<RobotState> goals = SampleInformativeViews(sampler, view_cfg);

  ObjectiveSpec spec = config_.objective;
  if (spec.env.kind == EnvironmentMode::Kind::kMonteCarlo) {
    spec.env.seed = DeriveSeed(seed, {it, kMonteCarloStream});
  }
  const Objective objective(belief_, config_.camera, spec,
                            ComputeDistanceField(belief_, goals),
                            config_.distance.distance_factor);

  PlannerConfig planner_cfg = config_.planner;
  planner_cfg.rsp_seed = DeriveSeed(seed, {it, kRspStream});
  const BlockPlanner planner =
      MakeMctsPlanner(objective, belief_, robots_, planner_cfg,
                      DeriveSeed(seed, {it, kPlanStream}));
  const Assignment plan =
      Coordinate(planner_cfg, config_.robot_count, planner);
  const double value = objective.Value(plan);

  BoundReport bounds;
  if (config_.compute_bounds) {
    // MCTS only approximates each block maximum; the robot's own planned
    // action is also in the block, so the better of the two is used.
    const BlockPlanner search =
        MakeMctsPlanner(objective, belief_, robots_, planner_cfg,
                        DeriveSeed(seed, {it, kBoundStream}));
    const BlockPlanner block_solver =
        [&](int robot, std::span<const TrajectoryAction> conditioning)
        -> std::optional<TrajectoryAction> {
      std::optional<TrajectoryAction> found = search(robot, conditioning);
      auto own = std::find_if(
          plan.begin(), plan.end(),
          [robot](const TrajectoryAction& a) { return a.robot == robot; });
      if (own == plan.end()) return found;
      if (!found) return *own;
      Objective::Conditioned marginal = objective.Condition(conditioning);
      return marginal.Gain(*own) > marginal.Gain(*found) ? *own : *found;
    };
    bounds = Certify(plan, objective, config_.robot_count, block_solver,
                     /*exact_solver=*/false);
  } else {
    bounds.solution_value = value;
  }
  const auto clock_end = std::chrono::steady_clock::now();

  // Execute the first control of every robot.
  std::vector<RobotState> next = robots_;
  for (int r = 0; r < config_.robot_count; ++r) {
    auto it_action = std::find_if(
        plan.begin(), plan.end(),
        [r](const TrajectoryAction& a) { return a.robot == r; });
    if (it_action == plan.end() || it_action->states.size() < 2) {
      next[r] = ApplyDynamics(robots_[r], Control::kYawLeft);
      continue;
    }
    const RobotState& target = it_action->states[1];
    if (!(it_action->states[0] == robots_[r])) {
      return absl::InternalError("integrity error: plan starts elsewhere");
    }
    if (target.position != robots_[r].position &&
        !IsSegmentSafe(belief_, robots_[r].position, target.position)) {
      return absl::InternalError(absl::StrCat(
          "integrity error: planner returned an unsafe action for robot ", r));
    }
    next[r] = target;
  }
  robots_ = std::move(next);
  if (absl::Status s = ObserveAll(); !s.ok()) return s;

  const double wall_ms =
      config_.record_wall_clock
          ? std::chrono::duration<double, std::milli>(clock_end - clock_start)
                .count()
          : 0.0;
  return Record(value, bounds, wall_ms);
}

absl::StatusOr<RunResult> RunExperiment(const ExperimentConfig& config) {
  absl::StatusOr<Simulation> sim = Simulation::Create(config);
  if (!sim.ok()) return sim.status();
  RunResult result;
  result.exploration_volume_cells = sim->exploration_volume_cells();
  result.environment_hash = EnvironmentHash(sim->environment());
  const double target =
      config.completion_fraction * result.exploration_volume_cells;
  auto check = [&](const MetricsRecord& record) {
    if (!result.completed && record.covered_cells >= target) {
      result.completed = true;
      result.completion_iteration = record.iteration;
      result.completion_robot_iterations = record.robot_iterations;
    }
  };
  result.records.push_back(sim->initial_record());
  check(result.records.back());
  while (!result.completed && sim->iteration() < config.max_iterations) {
    absl::StatusOr<MetricsRecord> record = sim->Step();
    if (!record.ok()) return record.status();
    result.records.push_back(*record);
    check(*record);
  }
  return result;
}

void WriteCsv(std::ostream& out, const std::vector<MetricsRecord>& records) {
  out << kCsvHeader << '\n';
  char line[512];
  for (const MetricsRecord& r : records) {
    std::snprintf(line, sizeof(line),
                  "%d,%d,%zu,%.6f,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.3f\n",
                  r.iteration, r.robot_iterations, r.covered_cells,
                  r.coverage_m3, r.objective_value, r.bounds.online_bound,
                  r.bounds.oblivious_bound, r.bounds.online_ratio,
                  r.bounds.oblivious_ratio, r.bounds.best_ratio,
                  r.plan_wall_ms);
    out << line;
  }
}

namespace {

using nlohmann::json;

json Vec(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

Eigen::Vector3d VecFrom(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

std::string_view EnvKindName(EnvironmentSpec::Kind kind) {
  switch (kind) {
    case EnvironmentSpec::Kind::kEmpty:
      return "empty";
    case EnvironmentSpec::Kind::kBoxes:
      return "boxes";
    case EnvironmentSpec::Kind::kFile:
      return "file";
  }
  return "?";
}

std::string_view WeightingName(Weighting w) {
  switch (w) {
    case Weighting::kUnitNewCell:
      return "unit";
    case Weighting::kEntropy:
      return "entropy";
    case Weighting::kScaledEntropy:
      return "scaled-entropy";
  }
  return "?";
}

std::string_view EnvModeName(EnvironmentMode::Kind kind) {
  switch (kind) {
    case EnvironmentMode::Kind::kOptimistic:
      return "optimistic";
    case EnvironmentMode::Kind::kMonteCarlo:
      return "monte-carlo";
    case EnvironmentMode::Kind::kExact:
      return "exact";
  }
  return "?";
}

}  // namespace

json ConfigToJson(const ExperimentConfig& c) {
  json j;
  j["environment"] = {
      {"kind", EnvKindName(c.environment.kind)},
      {"extent", Vec(c.environment.extent)},
      {"resolution", c.environment.resolution},
      {"box_count", c.environment.box_count},
      {"min_box_size", c.environment.min_box_size},
      {"max_box_size", c.environment.max_box_size},
      {"seed", c.environment.seed},
      {"path", c.environment.path},
  };
  j["robot_count"] = c.robot_count;
  j["start"] = c.start ? Vec(*c.start) : json(nullptr);
  j["start_perturbation"] = c.start_perturbation;
  j["camera"] = {
      {"max_range", c.camera.max_range},
      {"columns", c.camera.columns},
      {"rows", c.camera.rows},
      {"fov_horizontal_deg", c.camera.fov_horizontal_deg},
      {"fov_vertical_deg", c.camera.fov_vertical_deg},
      {"long_axis_vertical", c.camera.long_axis_vertical},
  };
  j["planner"] = {
      {"horizon", c.planner.horizon},
      {"mcts_samples", c.planner.mcts_samples},
      {"exploration_constant", c.planner.exploration_constant},
      {"coordinator", CoordinatorName(c.planner.coordinator)},
      {"rounds", c.planner.rounds},
      {"lateral_controls", c.planner.lateral_controls},
      {"threads", c.planner.threads},
  };
  j["objective"] = {
      {"weighting", WeightingName(c.objective.weighting)},
      {"env_mode", EnvModeName(c.objective.env.kind)},
      {"mc_samples", c.objective.env.samples},
      {"enumeration_limit", c.objective.env.enumeration_limit},
      {"discount", c.objective.discount},
      {"ray_sum", c.objective.ray_sum},
  };
  j["occupancy_prior"] = c.occupancy_prior;
  j["distance"] = {
      {"view_value_threshold", c.distance.view_value_threshold},
      {"distance_factor", c.distance.distance_factor},
      {"view_sample_count", c.distance.view_sample_count},
  };
  j["max_iterations"] = c.max_iterations;
  j["completion_fraction"] = c.completion_fraction;
  j["exploration_volume_cells"] = c.exploration_volume_cells
                                      ? json(*c.exploration_volume_cells)
                                      : json(nullptr);
  j["compute_bounds"] = c.compute_bounds;
  j["record_wall_clock"] = c.record_wall_clock;
  j["seed"] = c.seed;
  return j;
}

absl::StatusOr<ExperimentConfig> ConfigFromJson(const json& j) {
  try {
    ExperimentConfig c;
    const json& e = j.at("environment");
    const std::string kind = e.at("kind").get<std::string>();
    if (kind == "empty") {
      c.environment.kind = EnvironmentSpec::Kind::kEmpty;
    } else if (kind == "boxes") {
      c.environment.kind = EnvironmentSpec::Kind::kBoxes;
    } else if (kind == "file") {
      c.environment.kind = EnvironmentSpec::Kind::kFile;
    } else {
      return absl::InvalidArgumentError("unknown environment kind " + kind);
    }
    c.environment.extent = VecFrom(e.at("extent"));
    c.environment.resolution = e.at("resolution").get<double>();
    c.environment.box_count = e.at("box_count").get<int>();
    c.environment.min_box_size = e.at("min_box_size").get<double>();
    c.environment.max_box_size = e.at("max_box_size").get<double>();
    c.environment.seed = e.at("seed").get<std::uint64_t>();
    c.environment.path = e.at("path").get<std::string>();
    c.robot_count = j.at("robot_count").get<int>();
    if (!j.at("start").is_null()) c.start = VecFrom(j.at("start"));
    c.start_perturbation = j.at("start_perturbation").get<double>();
    const json& cam = j.at("camera");
    c.camera.max_range = cam.at("max_range").get<double>();
    c.camera.columns = cam.at("columns").get<int>();
    c.camera.rows = cam.at("rows").get<int>();
    c.camera.fov_horizontal_deg = cam.at("fov_horizontal_deg").get<double>();
    c.camera.fov_vertical_deg = cam.at("fov_vertical_deg").get<double>();
    c.camera.long_axis_vertical = cam.at("long_axis_vertical").get<bool>();
    const json& p = j.at("planner");
    c.planner.horizon = p.at("horizon").get<int>();
    c.planner.mcts_samples = p.at("mcts_samples").get<int>();
    c.planner.exploration_constant = p.at("exploration_constant").get<double>();
    absl::StatusOr<CoordinatorKind> coordinator =
        ParseCoordinator(p.at("coordinator").get<std::string>());
    if (!coordinator.ok()) return coordinator.status();
    c.planner.coordinator = *coordinator;
    c.planner.rounds = p.at("rounds").get<int>();
    c.planner.lateral_controls = p.at("lateral_controls").get<bool>();
    c.planner.threads = p.at("threads").get<int>();
    const json& o = j.at("objective");
    const std::string weighting = o.at("weighting").get<std::string>();
    if (weighting == "unit") {
      c.objective.weighting = Weighting::kUnitNewCell;
    } else if (weighting == "entropy") {
      c.objective.weighting = Weighting::kEntropy;
    } else if (weighting == "scaled-entropy") {
      c.objective.weighting = Weighting::kScaledEntropy;
    } else {
      return absl::InvalidArgumentError("unknown weighting " + weighting);
    }
    const std::string mode = o.at("env_mode").get<std::string>();
    if (mode == "optimistic") {
      c.objective.env = EnvironmentMode::Optimistic();
    } else if (mode == "monte-carlo") {
      c.objective.env =
          EnvironmentMode::MonteCarlo(o.at("mc_samples").get<int>(), 0);
    } else if (mode == "exact") {
      c.objective.env =
          EnvironmentMode::Exact(o.at("enumeration_limit").get<int>());
    } else {
      return absl::InvalidArgumentError("unknown env mode " + mode);
    }
    c.objective.discount = o.at("discount").get<double>();
    c.objective.ray_sum = o.at("ray_sum").get<bool>();
    c.occupancy_prior = j.at("occupancy_prior").get<double>();
    const json& d = j.at("distance");
    c.distance.view_value_threshold = d.at("view_value_threshold").get<double>();
    c.distance.distance_factor = d.at("distance_factor").get<double>();
    c.distance.view_sample_count = d.at("view_sample_count").get<int>();
    c.max_iterations = j.at("max_iterations").get<int>();
    c.completion_fraction = j.at("completion_fraction").get<double>();
    if (!j.at("exploration_volume_cells").is_null()) {
      c.exploration_volume_cells =
          j.at("exploration_volume_cells").get<double>();
    }
    c.compute_bounds = j.at("compute_bounds").get<bool>();
    c.record_wall_clock = j.at("record_wall_clock").get<bool>();
    c.seed = j.at("seed").get<std::uint64_t>();
    return c;
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed manifest: ", e.what()));
  }
}

json RunManifest(const ExperimentConfig& config, const RunResult& result) {
  json j;
  j["format"] = "volex-run-manifest";
  j["version"] = 1;
  j["config"] = ConfigToJson(config);
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016" PRIx64, result.environment_hash);
  j["environment_hash"] = hash;
  j["exploration_volume_cells"] = result.exploration_volume_cells;
  j["completed"] = result.completed;
  j["completion_iteration"] = result.completion_iteration;
  j["completion_robot_iterations"] = result.completion_robot_iterations;
  j["iterations_run"] = result.records.empty() ? 0 : result.records.back().iteration;
  return j;
}

}  // namespace volex
