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

#include "volex/verification.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "volex/action.h"
#include "volex/bounds.h"
#include "volex/grid.h"
#include "volex/objectives.h"
#include "volex/planners.h"
#include "volex/rng.h"
#include "volex/simulator.h"

namespace volex {
namespace {

constexpr double kEqualityTolerance = 1e-9;
constexpr double kOrderTolerance = 1e-9;

// A small world whose belief has a handful of unknown cells. Known cells
// carry their ground-truth state.
struct TinyWorld {
  GroundTruthEnvironment truth;
  BeliefMap belief;
  std::vector<CellId> free_known;  // known-free cells, candidate view origins
};

// Fully known random world; HideCells later turns some cells unknown.
TinyWorld MakeKnownWorld(Rng& rng, const Dims& max_dims, double prior) {
  TinyWorld w;
  const Dims dims = {2 + static_cast<int>(rng.Below(max_dims[0] - 1)),
                     2 + static_cast<int>(rng.Below(max_dims[1] - 1)),
                     1 + static_cast<int>(rng.Below(max_dims[2]))};
  w.truth.grid = VoxelGrid3<std::uint8_t>(dims, 0.1, 0);
  w.belief = BeliefMap::AllUnknown(dims, 0.1, prior);
  const int n = static_cast<int>(w.truth.grid.size());
  for (int id = 0; id < n; ++id) w.truth.grid[id] = rng.Bernoulli(0.2);
  // Keep at least one free cell to look from.
  w.truth.grid[static_cast<CellId>(rng.Below(n))] = 0;
  for (int id = 0; id < n; ++id) {
    w.belief.grid[id] = w.truth.grid[id] ? CellState::kOccupied : CellState::kFree;
    if (!w.truth.grid[id]) w.free_known.push_back(static_cast<CellId>(id));
  }
  return w;
}

// Marks up to `max_unknown` cells unknown, drawn mostly from the cells the
// actions could see, so the instances are informative. Start cells stay
// known.
void HideCells(Rng& rng, std::span<const TrajectoryAction> actions,
               int max_unknown, TinyWorld& w) {
  GroundTruthEnvironment open;
  open.grid = VoxelGrid3<std::uint8_t>(w.truth.grid.dims(),
                                       w.truth.grid.resolution(), 0);
  std::vector<CellId> starts;
  for (const TrajectoryAction& a : actions) {
    std::optional<CellIndex> c = w.truth.grid.WorldToCell(a.states[0].position);
    if (c) starts.push_back(w.truth.grid.Flatten(*c));
  }
  auto is_start = [&](CellId id) {
    return std::find(starts.begin(), starts.end(), id) != starts.end();
  };
  // Cells seen by several actions first: they make the instance non-modular.
  std::vector<int> seen_by(open.grid.size(), 0);
  for (const TrajectoryAction& a : actions) {
    const TrajectoryAction one[] = {a};
    for (CellId id : CoveredCells(one, w.truth, CameraModel{})) ++seen_by[id];
  }
  std::vector<CellId> candidates;
  for (CellId id = 0; id < open.grid.size(); ++id) {
    if (seen_by[id] > 0 && !is_start(id)) candidates.push_back(id);
  }
  std::shuffle(candidates.begin(), candidates.end(), rng.engine());
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](CellId a, CellId b) { return seen_by[a] > seen_by[b]; });
  if (!candidates.empty()) {
    const int cap = std::min<int>(max_unknown, candidates.size());
    const int k = (cap + 1) / 2 + static_cast<int>(rng.Below(cap / 2 + 1));
    candidates.resize(k);
  }
  if (static_cast<int>(candidates.size()) < max_unknown && rng.Bernoulli(0.5)) {
    const CellId extra = static_cast<CellId>(rng.Below(w.truth.grid.size()));
    if (!is_start(extra) &&
        std::find(candidates.begin(), candidates.end(), extra) ==
            candidates.end()) {
      candidates.push_back(extra);
    }
  }
  for (CellId id : candidates) w.belief.grid[id] = CellState::kUnknown;
  std::erase_if(w.free_known,
                [&](CellId id) { return !w.belief.IsKnown(id); });
}

// Known-free cell center; usually facing the longest run of cells ahead.
RobotState RandomOrigin(Rng& rng, const TinyWorld& w) {
  RobotState s;
  const CellIndex c =
      w.belief.grid.Unflatten(w.free_known[rng.Below(w.free_known.size())]);
  s.position = w.belief.grid.CellToWorld(c);
  s.yaw_quarters = static_cast<int>(rng.Below(4));
  if (rng.Bernoulli(0.75)) {
    const Dims& d = w.belief.grid.dims();
    const int ahead[4] = {d[0] - 1 - c.x, d[1] - 1 - c.y, c.x, c.y};
    s.yaw_quarters = static_cast<int>(
        std::max_element(std::begin(ahead), std::end(ahead)) - ahead);
  }
  return s;
}

// A single view: one yaw step, so states[1] is the observing state.
TrajectoryAction YawView(int robot, const RobotState& origin) {
  const Control u[] = {Control::kYawLeft};
  return TrajectoryAction::FromControls(robot, origin, u);
}

TrajectoryAction RandomAction(Rng& rng, int robot, const RobotState& origin,
                              int max_horizon) {
  const int horizon = 1 + static_cast<int>(rng.Below(max_horizon));
  std::vector<Control> controls;
  // Mostly yaws: a 0.3 m step leaves these tiny grids.
  for (int l = 0; l < horizon; ++l) {
    controls.push_back(rng.Bernoulli(0.8)
                           ? (rng.Bernoulli(0.5) ? Control::kYawLeft
                                                 : Control::kYawRight)
                           : SixControls()[rng.Below(SixControls().size())]);
  }
  return TrajectoryAction::FromControls(robot, origin, controls);
}

std::string Describe(std::span<const TrajectoryAction> actions) {
  std::string out;
  for (const TrajectoryAction& a : actions) {
    const RobotState& s = a.states.front();
    absl::StrAppendFormat(&out, "[r%d (%.2f,%.2f,%.2f) yaw%d:", a.robot,
                          s.position.x(), s.position.y(), s.position.z(),
                          s.yaw_quarters);
    for (Control u : a.controls) {
      absl::StrAppend(&out, " ", std::string(ControlName(u)));
    }
    absl::StrAppend(&out, "]");
  }
  return out;
}

std::string DescribeWorld(const TinyWorld& w) {
  const Dims& d = w.belief.grid.dims();
  std::string states;
  for (CellState c : w.belief.grid.cells()) {
    states.push_back(c == CellState::kUnknown ? '?'
                     : c == CellState::kFree  ? '0'
                                              : '1');
  }
  return absl::StrFormat("dims %dx%dx%d prior %.4f belief %s", d[0], d[1], d[2],
                         w.belief.occupancy_prior, states);
}

Weighting RandomWeighting(Rng& rng) {
  static constexpr Weighting kAll[] = {
      Weighting::kUnitNewCell, Weighting::kEntropy, Weighting::kScaledEntropy};
  return kAll[rng.Below(3)];
}

// Records the first failure and counts passes.
class Tally {
 public:
  explicit Tally(SuiteResult& result) : result_(result) {}
  void Pass() {
    ++result_.instances;
    ++result_.passed;
  }
  void Fail(int instance, std::uint64_t seed, std::string detail) {
    ++result_.instances;
    if (result_.counterexample.empty()) {
      result_.counterexample = absl::StrFormat(
          "suite=%s instance=%d seed=%d %s", result_.name, instance, seed,
          detail);
    }
  }
  void Error(double e) { result_.max_error = std::max(result_.max_error, e); }
  void Ratio(double r) {
    if (std::isnan(result_.min_ratio) || r < result_.min_ratio) {
      result_.min_ratio = r;
    }
  }

 private:
  SuiteResult& result_;
};

std::uint64_t InstanceSeed(const VerifyOptions& options, std::string_view suite,
                           int instance) {
  std::uint64_t tag = 0;
  for (char c : suite) tag = tag * 131 + static_cast<unsigned char>(c);
  return DeriveSeed(options.seed, {tag, static_cast<std::uint64_t>(instance)});
}

// ---------------------------------------------------------------------------

void Theorem1Suite(const VerifyOptions& options, SuiteResult& result) {
  Tally tally(result);
  const CameraModel cam;
  int informative = 0;
  double largest = 0.0;
  for (int i = 0; i < options.instances; ++i) {
    const std::uint64_t seed = InstanceSeed(options, "theorem1", i);
    Rng rng(seed);
    const double prior = rng.Uniform(0.05, 0.95);
    TinyWorld w = MakeKnownWorld(rng, {4, 4, 2}, prior);
    std::vector<TrajectoryAction> views;
    const int count = 1 + static_cast<int>(rng.Below(3));
    for (int v = 0; v < count; ++v) {
      // Yaw before the view so states[1] faces the chosen direction.
      RobotState origin = RandomOrigin(rng, w);
      origin.yaw_quarters = (origin.yaw_quarters + 3) % 4;
      views.push_back(YawView(v, origin));
    }
    HideCells(rng, views, 12, w);

    ObjectiveSpec spec;
    spec.weighting = Weighting::kEntropy;
    spec.env = EnvironmentMode::Exact(20);
    const absl::StatusOr<double> coverage =
        ExpectedCoverage(views, w.belief, spec, cam);
    const absl::StatusOr<double> mi =
        NoiselessMutualInformation(views, w.belief, cam, 20);
    if (!coverage.ok() || !mi.ok()) {
      tally.Fail(i, seed, absl::StrCat("evaluation error: ",
                                       coverage.status().ToString(), " / ",
                                       mi.status().ToString()));
      continue;
    }
    const double error = std::abs(*coverage - *mi);
    tally.Error(error);
    informative += *mi > 0.0;
    largest = std::max(largest, *mi);
    if (error <= kEqualityTolerance) {
      tally.Pass();
    } else {
      tally.Fail(i, seed,
                 absl::StrFormat("mi=%.17g coverage=%.17g %s views=%s", *mi,
                                 *coverage, DescribeWorld(w), Describe(views)));
    }
  }
  result.notes = absl::StrFormat("nonzero on %d/%d, largest %.3f bits",
                                 informative, options.instances, largest);
}

// Exhaustive set-function table over subsets of a ground set of actions.
std::vector<double> SubsetValues(const ViewObjective& f,
                                 std::span<const TrajectoryAction> ground) {
  const int n = static_cast<int>(ground.size());
  std::vector<double> value(std::size_t{1} << n);
  for (std::size_t mask = 0; mask < value.size(); ++mask) {
    std::vector<TrajectoryAction> subset;
    for (int i = 0; i < n; ++i) {
      if (mask >> i & 1) subset.push_back(ground[i]);
    }
    value[mask] = f.Value(subset);
  }
  return value;
}

struct GroundSetInstance {
  TinyWorld world;
  std::vector<TrajectoryAction> ground;
  ObjectiveSpec spec;
};

GroundSetInstance MakeGroundSet(std::uint64_t seed) {
  Rng rng(seed);
  GroundSetInstance g;
  g.world = MakeKnownWorld(rng, {4, 4, 2}, rng.Uniform(0.05, 0.95));
  const int n = 2 + static_cast<int>(rng.Below(3));
  // Half the instances line the robots up behind each other, all looking
  // the same way, so their views overlap.
  const bool clustered = rng.Bernoulli(0.5);
  const RobotState lead = RandomOrigin(rng, g.world);
  const CellIndex lead_cell = *g.world.belief.grid.WorldToCell(lead.position);
  std::vector<CellId> line;
  for (CellId id : g.world.free_known) {
    const CellIndex c = g.world.belief.grid.Unflatten(id);
    const bool along_x = lead.yaw_quarters % 2 == 0;
    if (c.z == lead_cell.z && (along_x ? c.y == lead_cell.y : c.x == lead_cell.x)) {
      line.push_back(id);
    }
  }
  for (int r = 0; r < n; ++r) {
    if (!clustered) {
      g.ground.push_back(RandomAction(rng, r, RandomOrigin(rng, g.world), 2));
      continue;
    }
    RobotState origin;
    origin.position = g.world.belief.grid.CellToWorld(
        g.world.belief.grid.Unflatten(line[rng.Below(line.size())]));
    origin.yaw_quarters = (lead.yaw_quarters + 3) % 4;
    std::vector<Control> controls = {Control::kYawLeft};
    if (rng.Bernoulli(0.5)) {
      controls.push_back(rng.Bernoulli(0.5) ? Control::kYawLeft
                                            : Control::kYawRight);
    }
    g.ground.push_back(TrajectoryAction::FromControls(r, origin, controls));
  }
  HideCells(rng, g.ground, 10, g.world);
  g.spec.weighting = RandomWeighting(rng);
  g.spec.discount = rng.Bernoulli(0.5) ? 1.0 : 0.7;
  g.spec.env = EnvironmentMode::Exact(20);
  return g;
}

void MonotonicitySuite(const VerifyOptions& options, SuiteResult& result) {
  Tally tally(result);
  const CameraModel cam;
  int strict_instances = 0;
  for (int i = 0; i < options.instances; ++i) {
    const std::uint64_t seed = InstanceSeed(options, "monotonicity", i);
    const GroundSetInstance g = MakeGroundSet(seed);
    const ViewObjective f(g.world.belief, cam, g.spec);
    const std::vector<double> v = SubsetValues(f, g.ground);
    const int n = static_cast<int>(g.ground.size());
    const std::size_t full = v.size() - 1;
    std::string failure;
    bool strict = false;
    auto check = [&](bool holds, double slack, const std::string& what) {
      strict |= slack > 1e-6 && what.starts_with("submodular");
      tally.Error(std::max(0.0, -slack));
      if (!holds && failure.empty()) failure = what;
    };
    check(std::abs(v[0]) <= kEqualityTolerance, -std::abs(v[0]), "normalized");
    auto gain = [&](int x, std::size_t set) { return v[set | 1u << x] - v[set]; };
    for (std::size_t a = 0; a <= full; ++a) {
      for (int x = 0; x < n; ++x) {
        if (a >> x & 1) continue;
        // Monotone.
        check(gain(x, a) >= -kOrderTolerance, gain(x, a),
              absl::StrFormat("monotone x=%d A=%d", x, a));
        // Submodular and 3-increasing over A subset of B.
        for (std::size_t b = a; b <= full; b = (b + 1) | a) {
          if (b >> x & 1) continue;
          const double submod = gain(x, a) - gain(x, b);
          check(submod >= -kOrderTolerance, submod,
                absl::StrFormat("submodular x=%d A=%d B=%d", x, a, b));
          for (int y = 0; y < n; ++y) {
            if (y == x || (b >> y & 1)) continue;
            const double third = (gain(x, a) - gain(x, b)) -
                                 (gain(x, a | 1u << y) - gain(x, b | 1u << y));
            check(third >= -kOrderTolerance, third,
                  absl::StrFormat("3-increasing x=%d y=%d A=%d B=%d", x, y, a,
                                  b));
          }
          if (b == full) break;
        }
      }
    }
    strict_instances += strict;
    if (failure.empty()) {
      tally.Pass();
    } else {
      tally.Fail(i, seed, absl::StrCat(failure, " ", DescribeWorld(g.world),
                                       " actions=", Describe(g.ground)));
    }
  }
  result.notes = absl::StrFormat("strictly submodular somewhere on %d/%d",
                                 strict_instances, options.instances);
}

void RaySumSuite(const VerifyOptions& options, SuiteResult& result) {
  Tally tally(result);
  const CameraModel cam;
  for (int i = 0; i < options.instances; ++i) {
    // Same instances as the monotonicity suite.
    const std::uint64_t seed = InstanceSeed(options, "monotonicity", i);
    const GroundSetInstance g = MakeGroundSet(seed);
    ObjectiveSpec ray_spec = g.spec;
    ray_spec.ray_sum = true;
    const ViewObjective joint(g.world.belief, cam, g.spec);
    const ViewObjective rays(g.world.belief, cam, ray_spec);
    const std::vector<double> coverage = SubsetValues(joint, g.ground);
    const std::vector<double> ray_sum = SubsetValues(rays, g.ground);
    std::string failure;
    for (std::size_t s = 0; s < coverage.size(); ++s) {
      const double slack = ray_sum[s] - coverage[s];
      tally.Error(std::max(0.0, -slack));
      if (slack < -kOrderTolerance && failure.empty()) {
        failure = absl::StrFormat("subset=%d ray_sum=%.17g coverage=%.17g", s,
                                  ray_sum[s], coverage[s]);
      }
    }
    if (failure.empty()) {
      tally.Pass();
    } else {
      tally.Fail(i, seed, absl::StrCat(failure, " ", DescribeWorld(g.world),
                                       " actions=", Describe(g.ground)));
    }
  }
}

// ---------------------------------------------------------------------------
// Partition-matroid instances for the greedy and certificate suites.

struct MenuInstance {
  BeliefMap belief;
  std::vector<std::vector<TrajectoryAction>> menus;
  ObjectiveSpec spec;
  DistanceField field;
  double alpha = 0.0;
};

MenuInstance MakeMenuInstance(std::uint64_t seed) {
  Rng rng(seed);
  MenuInstance m;
  BoxesParams params;
  params.extent = {1.2, 1.2, 0.6};
  params.box_count = 1 + static_cast<int>(rng.Below(3));
  params.min_box_size = 0.2;
  params.max_box_size = 0.4;
  params.start_clearance = 0.4;
  absl::StatusOr<GroundTruthEnvironment> truth =
      GenerateBoxes(rng.engine()(), params);
  if (!truth.ok()) truth = GenerateEmpty(params.extent);
  m.belief = BeliefMap::AllUnknown(truth->grid.dims(), 0.1,
                                   rng.Uniform(0.05, 0.5));
  const Eigen::Vector3d start = DefaultStart(params.extent);
  for (int q = 0; q < 4; q += 1 + static_cast<int>(rng.Below(2))) {
    (void)FuseObservation(m.belief, Observe({start, q}, *truth, CameraModel{}));
  }

  const int robots = 2 + static_cast<int>(rng.Below(2));
  const int menu_size = 4 + static_cast<int>(rng.Below(5));
  PlannerConfig cfg;
  for (int r = 0; r < robots; ++r) {
    RobotState origin{start, static_cast<int>(rng.Below(4))};
    std::vector<TrajectoryAction>& menu = m.menus.emplace_back();
    for (int attempt = 0; attempt < 200 && static_cast<int>(menu.size()) < menu_size;
         ++attempt) {
      const int horizon = 1 + static_cast<int>(rng.Below(3));
      std::vector<Control> controls;
      RobotState s = origin;
      for (int l = 0; l < horizon; ++l) {
        const std::vector<Control> safe =
            SafeControls(s, m.belief, cfg.controls());
        controls.push_back(safe[rng.Below(safe.size())]);
        s = ApplyDynamics(s, controls.back());
      }
      TrajectoryAction a = TrajectoryAction::FromControls(r, origin, controls);
      if (std::find(menu.begin(), menu.end(), a) == menu.end()) {
        menu.push_back(std::move(a));
      }
    }
  }
  m.spec.weighting = RandomWeighting(rng);
  m.spec.discount = rng.Bernoulli(0.5) ? 1.0 : 0.7;
  if (rng.Bernoulli(0.5)) {
    DistanceRewardConfig dist;
    dist.view_value_threshold = 20;
    dist.view_sample_count = 30;
    dist.sample_seed = rng.engine()();
    m.field = ComputeDistanceField(
        m.belief, SampleInformativeViews(m.belief, CameraModel{}, dist));
    m.alpha = rng.Uniform(1.0, 30.0);
  } else {
    m.field = ComputeDistanceField(m.belief, {});
  }
  return m;
}

// Brute-force optimum over one action per robot.
double BruteForceOptimum(const Objective& f, const MenuInstance& m) {
  std::vector<std::size_t> pick(m.menus.size(), 0);
  double best = 0.0;
  std::vector<TrajectoryAction> joint(m.menus.size());
  while (true) {
    for (std::size_t r = 0; r < pick.size(); ++r) joint[r] = m.menus[r][pick[r]];
    best = std::max(best, f.Value(joint));
    std::size_t r = 0;
    while (r < pick.size() && ++pick[r] == m.menus[r].size()) pick[r++] = 0;
    if (r == pick.size()) break;
  }
  return best;
}

void GreedySuite(const VerifyOptions& options, SuiteResult& result,
                 bool certificate) {
  Tally tally(result);
  const CameraModel cam;
  int online_tighter = 0;
  for (int i = 0; i < options.instances; ++i) {
    const std::uint64_t seed = InstanceSeed(options, "greedy-bound", i);
    const MenuInstance m = MakeMenuInstance(seed);
    const Objective f(m.belief, cam, m.spec, m.field, m.alpha);
    const BlockPlanner planner = MakeMenuPlanner(f, m.menus);
    std::vector<int> order(m.menus.size());
    std::iota(order.begin(), order.end(), 0);
    const Assignment greedy = SequentialGreedy(order, planner);
    const double value = f.Value(greedy);
    const double opt = BruteForceOptimum(f, m);
    const int robots = static_cast<int>(m.menus.size());
    if (!certificate) {
      const double ratio = opt > 0.0 ? value / opt : 1.0;
      tally.Ratio(ratio);
      if (ratio >= 0.5 - kOrderTolerance) {
        tally.Pass();
      } else {
        tally.Fail(i, seed,
                   absl::StrFormat("greedy=%.17g opt=%.17g plan=%s", value, opt,
                                   Describe(greedy)));
      }
      continue;
    }
    const BoundReport report =
        Certify(greedy, f, robots, planner, /*exact_solver=*/true);
    const double bound = std::min(report.online_bound, report.oblivious_bound);
    if (report.online_ratio > report.oblivious_ratio) ++online_tighter;
    tally.Ratio(report.best_ratio);
    tally.Error(std::max(0.0, opt - bound));
    const bool valid = bound >= opt - kOrderTolerance * std::max(1.0, opt);
    const bool half = report.best_ratio >= 0.5 - kOrderTolerance;
    if (valid && half) {
      tally.Pass();
    } else {
      tally.Fail(i, seed,
                 absl::StrFormat("opt=%.17g online=%.17g oblivious=%.17g "
                                 "best_ratio=%.17g",
                                 opt, report.online_bound,
                                 report.oblivious_bound, report.best_ratio));
    }
  }
  if (certificate) {
    result.notes = absl::StrFormat("online bound tighter on %d/%d instances",
                                   online_tighter, options.instances);
  }
}

// ---------------------------------------------------------------------------

void OptimismSuite(const VerifyOptions& options, SuiteResult& result) {
  Tally tally(result);
  const CameraModel cam;
  static constexpr double kPriors[] = {0.1, 0.01, 0.001};
  int agree[3] = {0, 0, 0};
  for (int i = 0; i < options.instances; ++i) {
    const std::uint64_t seed = InstanceSeed(options, "optimism", i);
    Rng rng(seed);
    TinyWorld w = MakeKnownWorld(rng, {5, 5, 2}, 0.1);
    std::vector<TrajectoryAction> menu;
    for (int attempt = 0; attempt < 200 && menu.size() < 10; ++attempt) {
      RobotState origin = RandomOrigin(rng, w);
      origin.yaw_quarters = static_cast<int>(rng.Below(4));
      TrajectoryAction a = YawView(0, origin);
      if (std::find(menu.begin(), menu.end(), a) == menu.end()) {
        menu.push_back(std::move(a));
      }
    }
    HideCells(rng, menu, 12, w);
    std::string failure;
    for (int p = 0; p < 3; ++p) {
      w.belief.occupancy_prior = kPriors[p];
      const ViewObjective optimistic(w.belief, cam, ObjectiveSpec{});
      ObjectiveSpec exact_spec;
      exact_spec.weighting = Weighting::kScaledEntropy;
      exact_spec.env = EnvironmentMode::Exact(20);
      const ViewObjective exact(w.belief, cam, exact_spec);
      std::vector<double> opt_value, exact_value;
      for (const TrajectoryAction& a : menu) {
        const TrajectoryAction one[] = {a};
        opt_value.push_back(optimistic.Value(one));
        exact_value.push_back(exact.Value(one));
      }
      const double opt_best =
          *std::max_element(opt_value.begin(), opt_value.end());
      const std::size_t exact_argmax =
          std::max_element(exact_value.begin(), exact_value.end()) -
          exact_value.begin();
      const bool agrees = opt_value[exact_argmax] >= opt_best - 1e-12;
      agree[p] += agrees;
      if (!agrees && kPriors[p] <= 0.01 && failure.empty()) {
        failure = absl::StrFormat(
            "prior=%g exact argmax %d (optimistic %.17g) vs optimistic max "
            "%.17g %s",
            kPriors[p], exact_argmax, opt_value[exact_argmax], opt_best,
            DescribeWorld(w));
      }
    }
    if (failure.empty()) {
      tally.Pass();
    } else {
      tally.Fail(i, seed, failure);
    }
  }
  const double n = std::max(1, options.instances);
  result.min_ratio = std::min(agree[1], agree[2]) / n;
  result.notes = absl::StrFormat(
      "argmax agreement prior 0.1: %d/%d, 0.01: %d/%d, 0.001: %d/%d", agree[0],
      options.instances, agree[1], options.instances, agree[2],
      options.instances);
}

// ---------------------------------------------------------------------------

bool SameAssignment(const Assignment& a, const Assignment& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] == b[i]) || a[i].states != b[i].states) return false;
  }
  return true;
}

void RspSuite(const VerifyOptions& options, SuiteResult& result) {
  Tally tally(result);
  ExperimentConfig config;
  config.environment.kind = EnvironmentSpec::Kind::kBoxes;
  config.environment.extent = {2.0, 2.0, 1.0};
  config.environment.box_count = 3;
  config.robot_count = 4;
  for (int i = 0; i < options.instances; ++i) {
    const std::uint64_t seed = InstanceSeed(options, "rsp-equalities", i);
    config.environment.seed = seed;
    config.seed = seed;
    absl::StatusOr<Simulation> sim = Simulation::Create(config);
    if (!sim.ok()) {
      tally.Fail(i, seed, sim.status().ToString());
      continue;
    }
    const BeliefMap& belief = sim->belief();
    DistanceRewardConfig dist;
    dist.view_value_threshold = 100;
    dist.view_sample_count = 40;
    dist.sample_seed = seed;
    ObjectiveSpec spec;
    spec.discount = 0.7;
    const Objective f(belief, config.camera, spec,
                      ComputeDistanceField(
                          belief, SampleInformativeViews(belief, config.camera,
                                                         dist)),
                      50.0);
    PlannerConfig cfg;
    cfg.horizon = 4;
    cfg.mcts_samples = 60;
    cfg.exploration_constant = 50.0;
    const BlockPlanner planner =
        MakeMctsPlanner(f, belief, sim->robots(), cfg, DeriveSeed(seed, {1}));
    const int n = config.robot_count;

    std::string failure;
    // One round: nobody conditions on anybody.
    if (!SameAssignment(RspPlan(n, 1, seed, planner, 1),
                        MyopicPlan(n, planner, 1))) {
      failure = "rsp(1) differs from myopic";
    }
    // All-distinct rounds: sequential greedy in round order.
    std::uint64_t distinct_seed = seed;
    std::vector<int> rounds;
    for (int k = 0; k < 1000; ++k, distinct_seed = Mix64(distinct_seed)) {
      rounds = RspRounds(n, n, distinct_seed);
      std::vector<int> sorted = rounds;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) break;
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return rounds[a] < rounds[b]; });
    if (failure.empty() &&
        !SameAssignment(RspPlan(n, n, distinct_seed, planner, 1),
                        SequentialGreedy(order, planner))) {
      failure = "rsp with distinct rounds differs from sequential";
    }
    // Parallel and serial execution within rounds.
    for (int r : {2, 3}) {
      if (failure.empty() && !SameAssignment(RspPlan(n, r, seed, planner, 1),
                                             RspPlan(n, r, seed, planner, 4))) {
        failure = absl::StrCat("rsp(", r, ") parallel differs from serial");
      }
    }
    if (failure.empty()) {
      tally.Pass();
    } else {
      tally.Fail(i, seed, failure);
    }
  }
}

}  // namespace

std::string SuiteResult::Summary() const {
  std::string line = absl::StrFormat("%-15s %s %d/%d", name,
                                     ok() ? "PASS" : "FAIL", passed, instances);
  if (!std::isnan(min_ratio)) absl::StrAppendFormat(&line, " min_ratio=%.6f", min_ratio);
  absl::StrAppendFormat(&line, " max_error=%.3g time=%.2fs", max_error, seconds);
  if (!notes.empty()) absl::StrAppend(&line, " (", notes, ")");
  return line;
}

const std::vector<std::string>& SuiteNames() {
  static const std::vector<std::string> kNames = {
      "theorem1",    "monotonicity", "ray-sum",       "greedy-bound",
      "certificate", "optimism",     "rsp-equalities"};
  return kNames;
}

int DefaultInstances(std::string_view suite) {
  if (suite == "theorem1") return 200;
  if (suite == "optimism") return 50;
  if (suite == "rsp-equalities") return 20;
  return 100;
}

absl::StatusOr<SuiteResult> RunSuite(std::string_view suite,
                                     const VerifyOptions& options) {
  const std::vector<std::string>& names = SuiteNames();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    return absl::NotFoundError(
        absl::StrCat("unknown suite '", std::string(suite), "'"));
  }
  VerifyOptions resolved = options;
  if (resolved.instances <= 0) resolved.instances = DefaultInstances(suite);
  SuiteResult result;
  result.name = std::string(suite);
  const auto start = std::chrono::steady_clock::now();
  if (suite == "theorem1") {
    Theorem1Suite(resolved, result);
  } else if (suite == "monotonicity") {
    MonotonicitySuite(resolved, result);
  } else if (suite == "ray-sum") {
    RaySumSuite(resolved, result);
  } else if (suite == "greedy-bound") {
    GreedySuite(resolved, result, /*certificate=*/false);
  } else if (suite == "certificate") {
    GreedySuite(resolved, result, /*certificate=*/true);
  } else if (suite == "optimism") {
    OptimismSuite(resolved, result);
  } else {
    RspSuite(resolved, result);
  }
  result.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return result;
}

}  // namespace volex
