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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_format.h"
#include "volex/cli.h"
#include "volex/simulator.h"
#include "volex/verification.h"

namespace volex {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void Report(bool pass, const std::string& name, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(),
              detail.c_str());
  std::fflush(stdout);
}

// Oracle suite with a minimum instance count and a runtime limit.
void SuiteCriterion(const std::string& label, const std::string& suite,
                    int instances, double limit_s) {
  VerifyOptions options;
  options.instances = instances;
  options.seed = 1;
  const Clock::time_point start = Clock::now();
  absl::StatusOr<SuiteResult> result = RunSuite(suite, options);
  const double seconds = SecondsSince(start);
  if (!result.ok()) {
    Report(false, label, std::string(result.status().message()));
    return;
  }
  std::string detail = result->Summary();
  if (!result->ok()) detail += " counterexample: " + result->counterexample;
  const bool pass = result->ok() && result->instances >= instances &&
                    result->passed == result->instances && seconds < limit_s;
  const std::string limit = std::isfinite(limit_s)
                                ? absl::StrFormat("limit %.0fs", limit_s)
                                : std::string("no time limit");
  Report(pass, label,
         absl::StrFormat("%s [%s, took %.1fs]", detail, limit, seconds));
}

// Boxes 4x4x2 m @ 0.1 m, 4 robots, sequential greedy with the desk-scale
// exploration constant. Layout and master seed are both `seed`.
ExperimentConfig ScaledBoxes(std::uint64_t seed, bool ray_sum) {
  ExperimentConfig config;
  config.environment.kind = EnvironmentSpec::Kind::kBoxes;
  config.environment.extent = {4.0, 4.0, 2.0};
  config.environment.resolution = 0.1;
  config.environment.seed = seed;
  config.robot_count = 4;
  config.planner.coordinator = CoordinatorKind::kSequential;
  config.planner.exploration_constant = 225.0;
  config.compute_bounds = false;
  config.max_iterations = 400;
  config.completion_fraction = 0.9;
  if (ray_sum) {
    config.objective.ray_sum = true;
    config.objective.weighting = Weighting::kScaledEntropy;
  }
  config.seed = seed;
  return config;
}

struct Batch {
  std::vector<RunResult> runs;
  double seconds = 0.0;
  std::string error;
};

Batch RunBatch(bool ray_sum) {
  Batch batch;
  const Clock::time_point start = Clock::now();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    absl::StatusOr<RunResult> result = RunExperiment(ScaledBoxes(seed, ray_sum));
    if (!result.ok()) {
      batch.error = absl::StrFormat("seed %d: %s", seed,
                                    std::string(result.status().message()));
      break;
    }
    batch.runs.push_back(*std::move(result));
  }
  batch.seconds = SecondsSince(start);
  return batch;
}

void ScaledExplorationCriterion(const Batch& batch) {
  const std::string name = "scaled-exploration";
  if (!batch.error.empty()) {
    Report(false, name, batch.error);
    return;
  }
  int completed = 0;
  int monotone = 0;
  std::string iterations;
  std::string stalls;
  for (std::size_t i = 0; i < batch.runs.size(); ++i) {
    const RunResult& run = batch.runs[i];
    completed += run.completed;
    absl::StrAppendFormat(&iterations, "%s%d", i ? "," : "",
                          run.completed ? run.completion_iteration : -1);
    bool strict = true;
    int flat_steps = 0;
    for (std::size_t k = 1; k < run.records.size(); ++k) {
      if (run.records[k].covered_cells <= run.records[k - 1].covered_cells) {
        strict = false;
        ++flat_steps;
      }
    }
    monotone += strict;
    if (!strict) {
      absl::StrAppendFormat(&stalls, " seed%d:%d", i + 1, flat_steps);
    }
  }
  const bool pass = completed >= 9 && monotone == 10 && batch.seconds < 600.0;
  Report(pass, name,
         absl::StrFormat("%d/10 seeds reached 90%% within 400 iterations "
                         "(completion iterations %s); strictly increasing "
                         "coverage on %d/10 seeds%s%s [limit 600s, took %.1fs]",
                         completed, iterations, monotone,
                         stalls.empty() ? "" : "; non-increasing steps:",
                         stalls, batch.seconds));
}

void ObjectiveComparisonCriterion(const Batch& optimistic,
                                  const Batch& ray_sum) {
  const std::string name = "objective-comparison";
  if (!optimistic.error.empty() || !ray_sum.error.empty()) {
    Report(false, name, optimistic.error + ray_sum.error);
    return;
  }
  auto mean = [](const Batch& batch) {
    double sum = 0.0;
    for (const RunResult& run : batch.runs) {
      if (!run.completed) return std::numeric_limits<double>::infinity();
      sum += run.completion_robot_iterations;
    }
    return sum / batch.runs.size();
  };
  const double a = mean(optimistic);
  const double b = mean(ray_sum);
  const double seconds = optimistic.seconds + ray_sum.seconds;
  const bool pass = std::isfinite(a) && std::isfinite(b) && seconds < 1200.0;
  Report(pass, name,
         absl::StrFormat("mean completion robot-iterations optimistic %.1f, "
                         "ray-sum %.1f, ray-sum/optimistic %.3f "
                         "[limit 1200s, took %.1fs]",
                         a, b, b / a, seconds));
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "volex");
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  if (code != kExitOk && code != kExitBudgetExhausted) {
    std::cerr << err.str();
  }
  return code;
}

void DeterminismCriterion() {
  const std::string name = "determinism";
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "volex_acceptance";
  std::filesystem::create_directories(dir);
  const Clock::time_point start = Clock::now();
  bool pass = true;
  std::string detail;
  for (const std::string planner : {"sequential", "rsp", "myopic"}) {
    const std::string first = (dir / (planner + ".csv")).string();
    const int code = Cli({"run", "--env", "boxes", "--extent", "4x4x2",
                          "--robots", "4", "--planner", planner, "--rounds",
                          "3", "--cp", "225", "--max-iters", "6", "--seed",
                          "17", "--out", first});
    if (code != kExitOk && code != kExitBudgetExhausted) {
      pass = false;
      detail += planner + ": run failed; ";
      continue;
    }
    const std::string manifest = first + ".manifest.json";
    std::vector<std::string> outputs;
    for (const std::string threads : {"1", "8", "1"}) {
      const std::string out =
          (dir / (planner + "_t" + threads + "_" +
                  std::to_string(outputs.size()) + ".csv"))
              .string();
      Cli({"run", "--from-manifest", manifest, "--threads", threads, "--out",
           out});
      outputs.push_back(Slurp(out));
    }
    const std::string original = Slurp(first);
    const bool same = !original.empty() && outputs[0] == original &&
                      outputs[1] == original && outputs[2] == original;
    pass &= same;
    detail += absl::StrFormat("%s %s (%d bytes); ", planner,
                              same ? "identical" : "DIFFERENT",
                              original.size());
  }
  std::filesystem::remove_all(dir);
  Report(pass, name,
         absl::StrFormat("manifest replays at --threads 1, 8, 1: %s[took %.1fs]",
                         detail, SecondsSince(start)));
}

int Main() {
  SuiteCriterion("theorem1-oracle", "theorem1", 200, 60.0);
  SuiteCriterion("monotonicity", "monotonicity", 100, 120.0);
  SuiteCriterion("greedy-guarantee", "greedy-bound", 100, 120.0);
  SuiteCriterion("certificate-validity", "certificate", 100, 120.0);
  SuiteCriterion("optimism-limit", "optimism", 50, 60.0);
  SuiteCriterion("rsp-equalities", "rsp-equalities", 20, 120.0);
  const Batch optimistic = RunBatch(/*ray_sum=*/false);
  ScaledExplorationCriterion(optimistic);
  SuiteCriterion("ray-sum-dominance", "ray-sum", 100,
                 std::numeric_limits<double>::infinity());
  const Batch ray_sum = RunBatch(/*ray_sum=*/true);
  ObjectiveComparisonCriterion(optimistic, ray_sum);
  DeterminismCriterion();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace volex

int main() { return volex::Main(); }
