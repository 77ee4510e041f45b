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

// Online and oblivious suboptimality certificates for partition-matroid
// submodular maximization:
//
//   f(X*) <= f(X) + sum_r max_{x in B_r} f(x | X)
//
// With X the planner's solution this is the online bound; with X empty it is
// the oblivious bound sum_r max_x f(x).

#ifndef VOLEX_BOUNDS_H_
#define VOLEX_BOUNDS_H_

#include <span>
#include <vector>

#include "volex/objectives.h"
#include "volex/planners.h"

namespace volex {

enum class BoundMode { kOnline, kOblivious };

struct BoundReport {
  double solution_value = 0.0;
  double online_bound = 0.0;
  double oblivious_bound = 0.0;
  double online_ratio = 1.0;
  double oblivious_ratio = 1.0;
  double best_ratio = 1.0;
  // False when per-block maxima come from an approximate solver (MCTS); such
  // bounds are estimates, not guaranteed upper bounds.
  bool exact = true;
};

// Right-hand side of the bound. `block_solver` must return (approximately)
// the marginal-gain maximizer of each robot's block; robots it returns
// nothing for contribute 0.
double CertificateBound(std::span<const TrajectoryAction> solution,
                        const Objective& objective, int robot_count,
                        BoundMode mode, const BlockPlanner& block_solver);

// value / bound, defined as 1 when the bound is 0.
double BoundRatio(double value, double bound);

BoundReport Certify(std::span<const TrajectoryAction> solution,
                    const Objective& objective, int robot_count,
                    const BlockPlanner& block_solver, bool exact_solver);

struct SeriesPoint {
  double mean = 0.0;
  double standard_error = 0.0;
  int trials = 0;
};

// Per planning step, best_ratio averaged across the trials that reached that
// step; standard error of the mean over trials.
std::vector<SeriesPoint> BestRatioSeries(
    std::span<const std::vector<BoundReport>> trials);

}  // namespace volex

#endif  // VOLEX_BOUNDS_H_
