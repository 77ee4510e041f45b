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

#include "volex/bounds.h"

#include <algorithm>
#include <cmath>

namespace volex {

double CertificateBound(std::span<const TrajectoryAction> solution,
                        const Objective& objective, int robot_count,
                        BoundMode mode, const BlockPlanner& block_solver) {
  std::span<const TrajectoryAction> conditioning =
      mode == BoundMode::kOnline ? solution
                                 : std::span<const TrajectoryAction>{};
  double bound = mode == BoundMode::kOnline ? objective.Value(solution) : 0.0;
  Objective::Conditioned marginal = objective.Condition(conditioning);
  for (int robot = 0; robot < robot_count; ++robot) {
    std::optional<TrajectoryAction> best = block_solver(robot, conditioning);
    if (best) bound += std::max(0.0, marginal.Gain(*best));
  }
  return bound;
}

double BoundRatio(double value, double bound) {
  if (bound <= 0.0) return 1.0;
  return value / bound;
}

BoundReport Certify(std::span<const TrajectoryAction> solution,
                    const Objective& objective, int robot_count,
                    const BlockPlanner& block_solver, bool exact_solver) {
  BoundReport report;
  report.exact = exact_solver;
  report.solution_value = objective.Value(solution);
  report.online_bound = CertificateBound(solution, objective, robot_count,
                                         BoundMode::kOnline, block_solver);
  report.oblivious_bound = CertificateBound(solution, objective, robot_count,
                                            BoundMode::kOblivious, block_solver);
  report.online_ratio = BoundRatio(report.solution_value, report.online_bound);
  report.oblivious_ratio =
      BoundRatio(report.solution_value, report.oblivious_bound);
  report.best_ratio = std::max(report.online_ratio, report.oblivious_ratio);
  return report;
}

std::vector<SeriesPoint> BestRatioSeries(
    std::span<const std::vector<BoundReport>> trials) {
  std::size_t steps = 0;
  for (const auto& trial : trials) steps = std::max(steps, trial.size());
  std::vector<SeriesPoint> series(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    std::vector<double> values;
    for (const auto& trial : trials) {
      if (t < trial.size()) values.push_back(trial[t].best_ratio);
    }
    SeriesPoint& point = series[t];
    point.trials = static_cast<int>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    point.mean = sum / values.size();
    if (values.size() > 1) {
      double squares = 0.0;
      for (double v : values) squares += (v - point.mean) * (v - point.mean);
      const double stddev = std::sqrt(squares / (values.size() - 1));
      point.standard_error = stddev / std::sqrt(double(values.size()));
    }
  }
  return series;
}

}  // namespace volex
