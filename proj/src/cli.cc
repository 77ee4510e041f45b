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

#include "volex/cli.h"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "absl/strings/numbers.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "volex/grid.h"
#include "volex/simulator.h"
#include "volex/verification.h"

namespace volex {
namespace {

// Parses "AxBxC" (extent) or "a,b,c" (position).
std::optional<Eigen::Vector3d> ParseTriple(const std::string& text, char sep) {
  std::vector<std::string> parts = absl::StrSplit(text, sep);
  if (parts.size() != 3) return std::nullopt;
  Eigen::Vector3d v;
  for (int i = 0; i < 3; ++i) {
    if (!absl::SimpleAtod(parts[i], &v[i])) return std::nullopt;
  }
  return v;
}

// Published planner defaults, per coordinator family.
struct PlannerDefaults {
  double view_threshold;
  double distance_factor;
  double discount;
};

PlannerDefaults DefaultsFor(CoordinatorKind kind) {
  if (kind == CoordinatorKind::kMyopic) return {300.0, 700.0, 1.0};
  return {900.0, 500.0, 0.7};
}

struct RunFlags {
  std::string env = "boxes";
  std::string env_file;
  std::string extent = "4x4x2";
  double resolution = 0.1;
  int boxes = 8;
  double box_min = 0.3;
  double box_max = 1.0;
  std::uint64_t env_seed = 1;
  int robots = 4;
  std::string planner = "sequential";
  int rounds = 1;
  std::uint64_t seed = 0;
  std::string out = "run.csv";
  std::string manifest;
  std::string from_manifest;
  int horizon = 10;
  int samples = 200;
  double cp = 1500.0;
  double view_threshold = 0.0;
  double dist_factor = 0.0;
  double discount = 0.0;
  std::string objective = "optimistic";
  std::string weighting;
  double prior = 0.125;
  int mc_samples = 8;
  int max_iters = 400;
  double completion = 0.9;
  int threads = 1;
  bool bounds = true;
  int view_samples = 100;
  bool lateral = false;
  std::string start;
  double start_perturbation = 0.5;
  bool wall_clock = false;
};

// Resolves flags into a config. Returns a message on invalid values.
std::optional<std::string> ResolveConfig(const RunFlags& f,
                                         const CLI::App& run,
                                         ExperimentConfig& c) {
  if (f.env == "empty") {
    c.environment.kind = EnvironmentSpec::Kind::kEmpty;
  } else if (f.env == "boxes") {
    c.environment.kind = EnvironmentSpec::Kind::kBoxes;
  } else if (f.env == "file") {
    c.environment.kind = EnvironmentSpec::Kind::kFile;
    if (f.env_file.empty()) return "--env file requires --env-file";
    c.environment.path = f.env_file;
  } else {
    return "unknown --env '" + f.env + "'";
  }
  std::optional<Eigen::Vector3d> extent = ParseTriple(f.extent, 'x');
  if (!extent) return "--extent must look like 4x4x2";
  c.environment.extent = *extent;
  c.environment.resolution = f.resolution;
  c.environment.box_count = f.boxes;
  c.environment.min_box_size = f.box_min;
  c.environment.max_box_size = f.box_max;
  c.environment.seed = f.env_seed;

  absl::StatusOr<CoordinatorKind> kind = ParseCoordinator(f.planner);
  if (!kind.ok()) return std::string(kind.status().message());
  const PlannerDefaults defaults = DefaultsFor(*kind);
  auto given = [&run](const char* name) { return run.count(name) > 0; };

  c.robot_count = f.robots;
  if (!f.start.empty()) {
    c.start = ParseTriple(f.start, ',');
    if (!c.start) return "--start must look like x,y,z";
  }
  c.start_perturbation = f.start_perturbation;
  c.planner.coordinator = *kind;
  c.planner.rounds = f.rounds;
  c.planner.horizon = f.horizon;
  c.planner.mcts_samples = f.samples;
  c.planner.exploration_constant = f.cp;
  c.planner.lateral_controls = f.lateral;
  c.planner.threads = f.threads;

  if (f.objective == "optimistic") {
    c.objective.env = EnvironmentMode::Optimistic();
    c.objective.weighting = Weighting::kUnitNewCell;
  } else if (f.objective == "expected") {
    c.objective.env = EnvironmentMode::MonteCarlo(f.mc_samples, 0);
    c.objective.weighting = Weighting::kScaledEntropy;
  } else if (f.objective == "ray-sum") {
    c.objective.ray_sum = true;
    c.objective.weighting = Weighting::kScaledEntropy;
  } else {
    return "unknown --objective '" + f.objective + "'";
  }
  if (!f.weighting.empty()) {
    if (f.weighting == "unit") {
      c.objective.weighting = Weighting::kUnitNewCell;
    } else if (f.weighting == "entropy") {
      c.objective.weighting = Weighting::kEntropy;
    } else if (f.weighting == "scaled-entropy") {
      c.objective.weighting = Weighting::kScaledEntropy;
    } else {
      return "unknown --weighting '" + f.weighting + "'";
    }
  }
  c.objective.discount = given("--discount") ? f.discount : defaults.discount;
  c.distance.view_value_threshold =
      given("--view-threshold") ? f.view_threshold : defaults.view_threshold;
  c.distance.distance_factor =
      given("--dist-factor") ? f.dist_factor : defaults.distance_factor;
  c.distance.view_sample_count = f.view_samples;
  c.occupancy_prior = f.prior;
  c.max_iterations = f.max_iters;
  c.completion_fraction = f.completion;
  c.compute_bounds = f.bounds;
  c.record_wall_clock = f.wall_clock;
  c.seed = f.seed;
  if (!given("--seed")) {
    if (const char* env = std::getenv("VOLEX_SEED")) {
      if (!absl::SimpleAtoi(env, &c.seed)) return "VOLEX_SEED is not a number";
    }
  }
  return std::nullopt;
}

int RunCommand(const RunFlags& f, const CLI::App& run, std::ostream& out,
               std::ostream& err) {
  ExperimentConfig config;
  if (!f.from_manifest.empty()) {
    std::ifstream in(f.from_manifest);
    if (!in) {
      err << "error: cannot open manifest " << f.from_manifest << "\n";
      return kExitConfigError;
    }
    nlohmann::json manifest =
        nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (manifest.is_discarded() || !manifest.contains("config")) {
      err << "error: malformed manifest " << f.from_manifest << "\n";
      return kExitConfigError;
    }
    absl::StatusOr<ExperimentConfig> parsed = ConfigFromJson(manifest["config"]);
    if (!parsed.ok()) {
      err << "error: " << parsed.status().message() << "\n";
      return kExitConfigError;
    }
    config = *std::move(parsed);
    // Thread count never changes results, so it may be overridden.
    if (run.count("--threads") > 0) config.planner.threads = f.threads;
  } else if (std::optional<std::string> problem = ResolveConfig(f, run, config)) {
    err << "error: " << *problem << "\n";
    return kExitUsage;
  } else if (absl::Status s = config.Validate(); !s.ok()) {
    // Out-of-range flag values are usage errors, not run failures.
    err << "error: " << s.message() << "\n";
    return kExitUsage;
  }

  absl::StatusOr<RunResult> result = RunExperiment(config);
  if (!result.ok()) {
    err << "error: " << result.status().ToString() << "\n";
    return kExitConfigError;
  }
  std::ofstream csv(f.out, std::ios::binary);
  if (!csv) {
    err << "error: cannot write " << f.out << "\n";
    return kExitConfigError;
  }
  WriteCsv(csv, result->records);
  const std::string manifest_path =
      f.manifest.empty() ? f.out + ".manifest.json" : f.manifest;
  std::ofstream manifest(manifest_path, std::ios::binary);
  if (!manifest) {
    err << "error: cannot write " << manifest_path << "\n";
    return kExitConfigError;
  }
  manifest << RunManifest(config, *result).dump(2) << "\n";

  const MetricsRecord& last = result->records.back();
  out << absl::StrFormat(
      "%s: %d iterations, %d/%.0f cells covered (%.1f%%)\n",
      result->completed ? "completed" : "budget exhausted", last.iteration,
      last.covered_cells, result->exploration_volume_cells,
      100.0 * last.covered_cells /
          std::max(1.0, result->exploration_volume_cells));
  if (result->completed) {
    out << "completion robot-iterations: "
        << result->completion_robot_iterations << "\n";
    return kExitOk;
  }
  return kExitBudgetExhausted;
}

int VerifyCommand(const std::string& suite, int instances, std::uint64_t seed,
                  std::ostream& out, std::ostream& err) {
  std::vector<std::string> suites;
  if (suite.empty() || suite == "all") {
    suites = SuiteNames();
  } else {
    suites.push_back(suite);
  }
  VerifyOptions options;
  options.instances = instances;
  options.seed = seed;
  std::string first_counterexample;
  for (const std::string& name : suites) {
    absl::StatusOr<SuiteResult> result = RunSuite(name, options);
    if (!result.ok()) {
      err << "error: " << result.status().message() << "\n";
      return kExitUsage;
    }
    out << result->Summary() << "\n";
    if (!result->ok() && first_counterexample.empty()) {
      first_counterexample = result->counterexample;
    }
  }
  if (!first_counterexample.empty()) {
    out << "counterexample: " << first_counterexample << "\n";
    return kExitVerifyFailed;
  }
  return kExitOk;
}

struct EnvFlags {
  std::string type = "boxes";
  std::string extent = "4x4x2";
  double resolution = 0.1;
  int boxes = 8;
  double box_min = 0.3;
  double box_max = 1.0;
  std::uint64_t seed = 1;
  std::string out;
  std::string file;
  std::string start;
};

int EnvGenCommand(const EnvFlags& f, std::ostream& out, std::ostream& err) {
  std::optional<Eigen::Vector3d> extent = ParseTriple(f.extent, 'x');
  if (!extent) {
    err << "error: --extent must look like 10x10x5\n";
    return kExitUsage;
  }
  EnvironmentSpec spec;
  if (f.type == "empty") {
    spec.kind = EnvironmentSpec::Kind::kEmpty;
  } else if (f.type == "boxes") {
    spec.kind = EnvironmentSpec::Kind::kBoxes;
  } else {
    err << "error: unknown environment type '" << f.type << "'\n";
    return kExitUsage;
  }
  spec.extent = *extent;
  spec.resolution = f.resolution;
  spec.box_count = f.boxes;
  spec.min_box_size = f.box_min;
  spec.max_box_size = f.box_max;
  spec.seed = f.seed;
  absl::StatusOr<GroundTruthEnvironment> env = BuildEnvironment(spec, {});
  if (!env.ok()) {
    err << "error: " << env.status().ToString() << "\n";
    return kExitConfigError;
  }
  if (absl::Status s = SaveEnvironment(*env, f.out); !s.ok()) {
    err << "error: " << s.ToString() << "\n";
    return kExitConfigError;
  }
  out << "wrote " << f.out << "\n";
  return kExitOk;
}

int EnvInfoCommand(const EnvFlags& f, std::ostream& out, std::ostream& err) {
  absl::StatusOr<GroundTruthEnvironment> env = LoadEnvironment(f.file);
  if (!env.ok()) {
    err << "error: " << env.status().ToString() << "\n";
    return kExitConfigError;
  }
  Eigen::Vector3d start = DefaultStart(env->grid.Extent());
  if (!f.start.empty()) {
    std::optional<Eigen::Vector3d> parsed = ParseTriple(f.start, ',');
    if (!parsed) {
      err << "error: --start must look like x,y,z\n";
      return kExitUsage;
    }
    start = *parsed;
  }
  const Dims& d = env->grid.dims();
  const double cells = static_cast<double>(env->grid.size());
  const std::size_t exploration = ExplorationVolumeCells(*env, start);
  out << absl::StrFormat("dims: %dx%dx%d\n", d[0], d[1], d[2]);
  out << absl::StrFormat("resolution: %g m\n", env->grid.resolution());
  out << absl::StrFormat("occupied fraction: %.6f\n",
                         env->OccupiedCount() / cells);
  out << absl::StrFormat("bounding volume: %g m3\n",
                         cells * env->grid.CellVolume());
  out << absl::StrFormat("exploration volume: %d cells, %g m3\n", exploration,
                         exploration * env->grid.CellVolume());
  out << absl::StrFormat("hash: %016x\n", EnvironmentHash(*env));
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Multi-robot volumetric exploration simulator"};
  app.name("volex");
  app.require_subcommand(1);

  RunFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "Run one exploration experiment");
  run->add_option("--env", run_flags.env, "empty|boxes|file");
  run->add_option("--env-file", run_flags.env_file, "Voxel file for --env file");
  run->add_option("--extent", run_flags.extent, "Extent in meters, AxBxC");
  run->add_option("--resolution", run_flags.resolution, "Cell size in meters");
  run->add_option("--boxes", run_flags.boxes, "Box count");
  run->add_option("--box-min", run_flags.box_min, "Minimum box edge (m)");
  run->add_option("--box-max", run_flags.box_max, "Maximum box edge (m)");
  run->add_option("--env-seed", run_flags.env_seed, "Environment layout seed");
  run->add_option("--robots", run_flags.robots, "Robot count");
  run->add_option("--planner", run_flags.planner, "myopic|sequential|rsp");
  run->add_option("--rounds", run_flags.rounds, "RSP rounds n_d");
  run->add_option("--seed", run_flags.seed, "Master seed (default $VOLEX_SEED)");
  run->add_option("--out", run_flags.out, "CSV output path");
  run->add_option("--manifest", run_flags.manifest,
                  "Manifest path (default <out>.manifest.json)");
  run->add_option("--from-manifest", run_flags.from_manifest,
                  "Replay the configuration stored in a manifest");
  run->add_option("--horizon", run_flags.horizon, "Planning horizon L");
  run->add_option("--samples", run_flags.samples, "MCTS samples");
  run->add_option("--cp", run_flags.cp, "UCT exploration constant");
  run->add_option("--view-threshold", run_flags.view_threshold,
                  "Informative view threshold");
  run->add_option("--dist-factor", run_flags.dist_factor,
                  "Distance reward factor");
  run->add_option("--discount", run_flags.discount, "Discount factor");
  run->add_option("--objective", run_flags.objective,
                  "optimistic|expected|ray-sum");
  run->add_option("--weighting", run_flags.weighting,
                  "unit|entropy|scaled-entropy");
  run->add_option("--prior", run_flags.prior, "Occupancy prior");
  run->add_option("--mc-samples", run_flags.mc_samples,
                  "Environment samples for --objective expected");
  run->add_option("--max-iters", run_flags.max_iters, "Iteration budget");
  run->add_option("--completion", run_flags.completion,
                  "Completion fraction of the exploration volume");
  run->add_option("--threads", run_flags.threads, "Planning threads");
  run->add_flag("--bounds,!--no-bounds", run_flags.bounds,
                "Compute suboptimality bounds (default on)");
  run->add_option("--view-samples", run_flags.view_samples,
                  "Candidate views sampled per iteration");
  run->add_flag("--lateral", run_flags.lateral, "Use the 8-control set");
  run->add_option("--start", run_flags.start, "Start position x,y,z");
  run->add_option("--start-perturbation", run_flags.start_perturbation,
                  "Start perturbation radius (m)");
  run->add_flag("--wall-clock", run_flags.wall_clock,
                "Record planning wall time in the CSV");

  std::string suite;
  int instances = 0;
  std::uint64_t verify_seed = 1;
  CLI::App* verify = app.add_subcommand("verify", "Run the oracle suites");
  verify->add_option("--suite", suite, "Suite name or 'all'");
  verify->add_option("--instances", instances, "Instances per suite");
  verify->add_option("--seed", verify_seed, "Suite seed");

  EnvFlags env_flags;
  CLI::App* env = app.add_subcommand("env", "Generate or inspect voxel files");
  env->require_subcommand(1);
  CLI::App* gen = env->add_subcommand("gen", "Write a generated environment");
  gen->add_option("type", env_flags.type, "empty|boxes")->required();
  gen->add_option("--extent", env_flags.extent, "Extent in meters, AxBxC");
  gen->add_option("--resolution", env_flags.resolution, "Cell size in meters");
  gen->add_option("--boxes", env_flags.boxes, "Box count");
  gen->add_option("--box-min", env_flags.box_min, "Minimum box edge (m)");
  gen->add_option("--box-max", env_flags.box_max, "Maximum box edge (m)");
  gen->add_option("--seed", env_flags.seed, "Layout seed");
  gen->add_option("--out", env_flags.out, "Output path")->required();
  CLI::App* info = env->add_subcommand("info", "Describe a voxel file");
  info->add_option("file", env_flags.file, "Voxel file")->required();
  info->add_option("--start", env_flags.start, "Start position x,y,z");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (run->parsed()) return RunCommand(run_flags, *run, out, err);
  if (verify->parsed()) {
    return VerifyCommand(suite, instances, verify_seed, out, err);
  }
  if (gen->parsed()) return EnvGenCommand(env_flags, out, err);
  if (info->parsed()) return EnvInfoCommand(env_flags, out, err);
  return kExitUsage;
}

}  // namespace volex
