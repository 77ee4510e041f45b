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

#include "volex/objectives.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <map>
#include <mutex>
#include <stdexcept>
#include <unordered_set>

#include "absl/strings/str_cat.h"
#include "volex/rng.h"

namespace volex {
namespace {

// Hard ceiling on exact enumeration regardless of the configured limit.
constexpr int kMaxEnumerationBits = 30;

std::vector<double> DiscountTable(double gamma, int horizon) {
  std::vector<double> table(static_cast<std::size_t>(horizon) + 1, 1.0);
  for (int l = 1; l <= horizon; ++l) table[l] = table[l - 1] * gamma;
  return table;
}

int MaxHorizon(std::span<const TrajectoryAction> actions) {
  int horizon = 0;
  for (const TrajectoryAction& a : actions) {
    horizon = std::max(horizon, static_cast<int>(a.states.size()) - 1);
  }
  return horizon;
}

// Actions with duplicates removed (set semantics).
std::vector<const TrajectoryAction*> Distinct(
    std::span<const TrajectoryAction> actions) {
  std::vector<const TrajectoryAction*> out;
  for (const TrajectoryAction& a : actions) {
    bool seen = false;
    for (const TrajectoryAction* b : out) seen = seen || (*b == a);
    if (!seen) out.push_back(&a);
  }
  return out;
}

bool Contains(std::span<const TrajectoryAction> actions,
              const TrajectoryAction& x) {
  return std::find(actions.begin(), actions.end(), x) != actions.end();
}

std::vector<std::uint8_t> PositiveMask(const std::vector<double>& weights) {
  std::vector<std::uint8_t> mask(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) mask[i] = weights[i] > 0.0;
  return mask;
}

std::vector<std::uint8_t> UnknownMask(const BeliefMap& belief) {
  std::vector<std::uint8_t> mask(belief.grid.size());
  for (CellId id = 0; id < belief.grid.size(); ++id) {
    mask[id] = belief.grid[id] == CellState::kUnknown;
  }
  return mask;
}

}  // namespace

absl::Status ObjectiveSpec::Validate() const {
  if (!(discount > 0.0 && discount <= 1.0)) {
    return absl::InvalidArgumentError("discount must lie in (0, 1]");
  }
  if (env.kind == EnvironmentMode::Kind::kMonteCarlo && env.samples < 1) {
    return absl::InvalidArgumentError("Monte-Carlo mode needs >= 1 sample");
  }
  if (env.kind == EnvironmentMode::Kind::kExact &&
      (env.enumeration_limit < 0 ||
       env.enumeration_limit > kMaxEnumerationBits)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "enumeration limit must lie in [0, ", kMaxEnumerationBits, "]"));
  }
  return absl::OkStatus();
}

absl::Status DistanceRewardConfig::Validate() const {
  if (!(view_value_threshold >= 0.0) || !(distance_factor >= 0.0)) {
    return absl::InvalidArgumentError(
        "view threshold and distance factor must be non-negative");
  }
  if (view_sample_count < 0) {
    return absl::InvalidArgumentError("view sample count must be >= 0");
  }
  return absl::OkStatus();
}

double BinaryEntropyBits(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

std::vector<double> CellWeights(const BeliefMap& belief, Weighting weighting) {
  double unknown_weight = 1.0;
  if (weighting == Weighting::kEntropy) {
    unknown_weight = BinaryEntropyBits(belief.occupancy_prior);
  }
  std::vector<double> weights(belief.grid.size(), 0.0);
  for (CellId id = 0; id < belief.grid.size(); ++id) {
    if (belief.grid[id] == CellState::kUnknown) weights[id] = unknown_weight;
  }
  return weights;
}

StateKey::StateKey(const RobotState& s)
    : x(std::bit_cast<std::uint64_t>(s.position.x())),
      y(std::bit_cast<std::uint64_t>(s.position.y())),
      z(std::bit_cast<std::uint64_t>(s.position.z())),
      yaw(s.yaw_quarters) {}

std::size_t StateKeyHash::operator()(const StateKey& k) const {
  return static_cast<std::size_t>(
      Mix64(k.x ^ Mix64(k.y ^ Mix64(k.z ^ static_cast<std::uint64_t>(k.yaw)))));
}

VisibilityCache::VisibilityCache(GroundTruthEnvironment env, CameraModel cam,
                                 std::vector<std::uint8_t> keep_mask)
    : env_(std::move(env)), cam_(cam), keep_(std::move(keep_mask)) {
  for (int yaw = 0; yaw < 4; ++yaw) rays_[yaw] = CameraRayDirections(cam_, yaw);
}

const std::vector<CellId>& VisibilityCache::Get(const RobotState& state) const {
  const StateKey key(state);
  {
    std::shared_lock lock(mu_);
    auto it = map_.find(key);
    if (it != map_.end()) return it->second;
  }
  std::vector<CellId> cells;
  cells.reserve(256);
  for (const Eigen::Vector3d& dir : rays_[state.yaw_quarters]) {
    TraverseSegment(env_.grid, state.position, dir, cam_.max_range,
                    [&](CellId id) {
                      if (keep_[id]) cells.push_back(id);
                      return env_.IsOccupied(id);
                    });
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  std::unique_lock lock(mu_);
  return map_.try_emplace(key, std::move(cells)).first->second;
}

RayBundle OptimisticRayBundle(const RobotState& state, const BeliefMap& belief,
                              const GroundTruthEnvironment& optimistic,
                              const CameraModel& cam) {
  (void)belief;
  RayBundle bundle;
  for (const Eigen::Vector3d& dir :
       CameraRayDirections(cam, state.yaw_quarters)) {
    std::vector<CellId> ray;
    TraverseSegment(optimistic.grid, state.position, dir, cam.max_range,
                    [&](CellId id) {
                      ray.push_back(id);
                      return optimistic.IsOccupied(id);
                    });
    if (!ray.empty()) bundle.push_back(std::move(ray));
  }
  std::sort(bundle.begin(), bundle.end());
  bundle.erase(std::unique(bundle.begin(), bundle.end()), bundle.end());
  return bundle;
}

// ---------------------------------------------------------------------------
// ViewObjective

ViewObjective::ViewObjective(const BeliefMap& belief, const CameraModel& cam,
                             ObjectiveSpec spec)
    : belief_(belief),
      cam_(cam),
      spec_(spec),
      weights_(CellWeights(belief, spec.weighting)),
      optimistic_(OptimisticEnvironment(belief)) {
  unknown_cache_ = std::make_unique<VisibilityCache>(optimistic_, cam_,
                                                     UnknownMask(belief_));
  if (spec_.ray_sum) return;
  switch (spec_.env.kind) {
    case EnvironmentMode::Kind::kOptimistic:
      scenarios_.push_back({1.0, std::make_unique<VisibilityCache>(
                                     optimistic_, cam_, PositiveMask(weights_))});
      break;
    case EnvironmentMode::Kind::kMonteCarlo: {
      const int n = std::max(1, spec_.env.samples);
      for (int s = 0; s < n; ++s) {
        scenarios_.push_back(
            {1.0 / n, std::make_unique<VisibilityCache>(
                          SampleEnvironment(belief_, DeriveSeed(spec_.env.seed,
                                                                {std::uint64_t(s)})),
                          cam_, PositiveMask(weights_))});
      }
      break;
    }
    case EnvironmentMode::Kind::kExact:
      break;
  }
}

ViewObjective::~ViewObjective() = default;

double ViewObjective::Value(std::span<const TrajectoryAction> actions) const {
  absl::StatusOr<double> value = TryValue(actions);
  if (!value.ok()) throw std::length_error(std::string(value.status().message()));
  return *value;
}

absl::StatusOr<double> ViewObjective::TryValue(
    std::span<const TrajectoryAction> actions) const {
  if (spec_.ray_sum) return RaySumValue(actions);
  if (spec_.env.kind == EnvironmentMode::Kind::kExact) {
    return ExactValue(actions);
  }
  double total = 0.0;
  for (const Scenario& scenario : scenarios_) {
    total += scenario.probability * ScenarioValue(scenario, actions);
  }
  return total;
}

double ViewObjective::ScenarioValue(
    const Scenario& scenario, std::span<const TrajectoryAction> actions) const {
  const std::vector<double> discount =
      DiscountTable(spec_.discount, MaxHorizon(actions));
  std::unordered_map<CellId, double> best;
  for (const TrajectoryAction& a : actions) {
    for (std::size_t l = 1; l < a.states.size(); ++l) {
      for (CellId c : scenario.cache->Get(a.states[l])) {
        double& b = best[c];
        b = std::max(b, discount[l]);
      }
    }
  }
  // Sum in cell order so the result does not depend on hash iteration.
  std::vector<std::pair<CellId, double>> sorted(best.begin(), best.end());
  std::sort(sorted.begin(), sorted.end());
  double value = 0.0;
  for (const auto& [c, d] : sorted) value += weights_[c] * d;
  return value;
}

const RayBundle& ViewObjective::Bundle(const RobotState& state) const {
  const StateKey key(state);
  {
    std::shared_lock lock(mu_);
    auto it = bundles_.find(key);
    if (it != bundles_.end()) return it->second;
  }
  RayBundle bundle = OptimisticRayBundle(state, belief_, optimistic_, cam_);
  std::unique_lock lock(mu_);
  return bundles_.try_emplace(key, std::move(bundle)).first->second;
}

std::vector<CellId> ViewObjective::RelevantUnknownCells(
    std::span<const TrajectoryAction> actions) const {
  std::vector<CellId> cells;
  for (const TrajectoryAction& a : actions) {
    for (std::size_t l = 1; l < a.states.size(); ++l) {
      const std::vector<CellId>& view = unknown_cache_->Get(a.states[l]);
      cells.insert(cells.end(), view.begin(), view.end());
    }
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

absl::StatusOr<double> ViewObjective::ExactValue(
    std::span<const TrajectoryAction> actions) const {
  const std::vector<CellId> relevant = RelevantUnknownCells(actions);
  const int limit = std::min(spec_.env.enumeration_limit, kMaxEnumerationBits);
  if (static_cast<int>(relevant.size()) > limit) {
    return absl::ResourceExhaustedError(
        absl::StrCat("exact enumeration over ", relevant.size(),
                     " unknown cells exceeds the limit of ", limit));
  }
  const int u = static_cast<int>(relevant.size());
  if (u == 0) return 0.0;
  std::unordered_map<CellId, int> bit_of;
  for (int i = 0; i < u; ++i) bit_of[relevant[i]] = i;

  // Each ray reduces to the ordered bits of its unknown cells; known free
  // cells neither block nor score, known occupied cells end the bundle ray.
  const int horizon = MaxHorizon(actions);
  const std::vector<double> discount = DiscountTable(spec_.discount, horizon);
  std::vector<std::vector<std::vector<int>>> rays_by_step(horizon + 1);
  for (const TrajectoryAction& a : actions) {
    for (std::size_t l = 1; l < a.states.size(); ++l) {
      for (const std::vector<CellId>& ray : Bundle(a.states[l])) {
        std::vector<int> bits;
        for (CellId c : ray) {
          auto it = bit_of.find(c);
          if (it != bit_of.end()) bits.push_back(it->second);
        }
        if (!bits.empty()) rays_by_step[l].push_back(std::move(bits));
      }
    }
  }
  for (auto& rays : rays_by_step) {
    std::sort(rays.begin(), rays.end());
    rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
  }

  std::vector<double> unit_weight(u);
  for (int i = 0; i < u; ++i) unit_weight[i] = weights_[relevant[i]];
  const double p = belief_.occupancy_prior;
  std::vector<double> best(u);
  double total = 0.0;
  const std::uint64_t count = std::uint64_t{1} << u;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    const int occupied = std::popcount(mask);
    const double probability =
        std::pow(p, occupied) * std::pow(1.0 - p, u - occupied);
    if (probability == 0.0) continue;
    std::fill(best.begin(), best.end(), 0.0);
    for (int l = 1; l <= horizon; ++l) {
      for (const std::vector<int>& ray : rays_by_step[l]) {
        for (int bit : ray) {
          best[bit] = std::max(best[bit], discount[l]);
          if (mask >> bit & 1) break;
        }
      }
    }
    double value = 0.0;
    for (int i = 0; i < u; ++i) value += unit_weight[i] * best[i];
    total += probability * value;
  }
  return total;
}

double ViewObjective::RayValue(const RobotState& state) const {
  const StateKey key(state);
  {
    std::shared_lock lock(mu_);
    auto it = ray_values_.find(key);
    if (it != ray_values_.end()) return it->second;
  }
  const double free_probability = 1.0 - belief_.occupancy_prior;
  double value = 0.0;
  for (const Eigen::Vector3d& dir :
       CameraRayDirections(cam_, state.yaw_quarters)) {
    double visible = 1.0;
    TraverseSegment(optimistic_.grid, state.position, dir, cam_.max_range,
                    [&](CellId id) {
                      value += weights_[id] * visible;
                      if (optimistic_.IsOccupied(id)) return true;
                      if (belief_.grid[id] == CellState::kUnknown) {
                        visible *= free_probability;
                      }
                      return false;
                    });
  }
  std::unique_lock lock(mu_);
  return ray_values_.try_emplace(key, value).first->second;
}

double ViewObjective::RaySumValue(
    std::span<const TrajectoryAction> actions) const {
  const std::vector<double> discount =
      DiscountTable(spec_.discount, MaxHorizon(actions));
  double value = 0.0;
  for (const TrajectoryAction* a : Distinct(actions)) {
    for (std::size_t l = 1; l < a->states.size(); ++l) {
      value += discount[l] * RayValue(a->states[l]);
    }
  }
  return value;
}

ViewObjective::Conditioned ViewObjective::Condition(
    std::span<const TrajectoryAction> conditioning) const {
  Conditioned c;
  c.parent_ = this;
  c.conditioning_.assign(conditioning.begin(), conditioning.end());
  if (spec_.ray_sum) return c;
  if (spec_.env.kind == EnvironmentMode::Kind::kExact) {
    c.base_value_ = Value(conditioning);
    return c;
  }
  const std::vector<double> discount =
      DiscountTable(spec_.discount, MaxHorizon(conditioning));
  c.credited_.resize(scenarios_.size());
  for (std::size_t s = 0; s < scenarios_.size(); ++s) {
    std::vector<double>& credited = c.credited_[s];
    credited.assign(belief_.grid.size(), 0.0);
    for (const TrajectoryAction& a : conditioning) {
      for (std::size_t l = 1; l < a.states.size(); ++l) {
        for (CellId cell : scenarios_[s].cache->Get(a.states[l])) {
          credited[cell] = std::max(credited[cell], discount[l]);
        }
      }
    }
  }
  c.stamp_.assign(belief_.grid.size(), 0);
  return c;
}

double ViewObjective::Conditioned::Gain(const TrajectoryAction& action) {
  const ViewObjective& f = *parent_;
  if (Contains(conditioning_, action)) return 0.0;
  if (f.spec_.ray_sum) {
    const TrajectoryAction one[] = {action};
    return f.RaySumValue(one);
  }
  if (f.spec_.env.kind == EnvironmentMode::Kind::kExact) {
    std::vector<TrajectoryAction> joint = conditioning_;
    joint.push_back(action);
    return f.Value(joint) - base_value_;
  }
  double gamma_l = 1.0;
  std::vector<double> discount(action.states.size(), 1.0);
  for (std::size_t l = 1; l < discount.size(); ++l) {
    gamma_l *= f.spec_.discount;
    discount[l] = gamma_l;
  }
  double gain = 0.0;
  for (std::size_t s = 0; s < f.scenarios_.size(); ++s) {
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
    const std::vector<double>& credited = credited_[s];
    double scenario_gain = 0.0;
    for (std::size_t l = 1; l < action.states.size(); ++l) {
      for (CellId c : f.scenarios_[s].cache->Get(action.states[l])) {
        if (stamp_[c] == epoch_) continue;
        stamp_[c] = epoch_;
        const double delta = discount[l] - credited[c];
        if (delta > 0.0) scenario_gain += f.weights_[c] * delta;
      }
    }
    gain += f.scenarios_[s].probability * scenario_gain;
  }
  return gain;
}

std::size_t ViewObjective::OptimisticNewCells(const RobotState& state) const {
  return unknown_cache_->Get(state).size();
}

// ---------------------------------------------------------------------------
// Free functions

std::vector<CellId> CoveredCells(std::span<const TrajectoryAction> actions,
                                 const GroundTruthEnvironment& env,
                                 const CameraModel& cam) {
  std::vector<CellId> cells;
  for (const TrajectoryAction& a : actions) {
    for (std::size_t l = 1; l < a.states.size(); ++l) {
      std::vector<CellId> view = CameraVisibleSet(a.states[l], env, cam);
      cells.insert(cells.end(), view.begin(), view.end());
    }
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

absl::StatusOr<double> ExpectedCoverage(
    std::span<const TrajectoryAction> actions, const BeliefMap& belief,
    const ObjectiveSpec& spec, const CameraModel& cam) {
  if (spec.ray_sum) {
    return absl::InvalidArgumentError(
        "expected coverage requires ray_sum = false");
  }
  if (absl::Status s = spec.Validate(); !s.ok()) return s;
  ViewObjective objective(belief, cam, spec);
  return objective.TryValue(actions);
}

absl::StatusOr<double> NoiselessMutualInformation(
    std::span<const TrajectoryAction> actions, const BeliefMap& belief,
    const CameraModel& cam, int enumeration_limit) {
  const GroundTruthEnvironment optimistic = OptimisticEnvironment(belief);
  std::vector<CellId> relevant;
  for (CellId c : CoveredCells(actions, optimistic, cam)) {
    if (belief.grid[c] == CellState::kUnknown) relevant.push_back(c);
  }
  const int limit = std::min(enumeration_limit, kMaxEnumerationBits);
  if (static_cast<int>(relevant.size()) > limit) {
    return absl::ResourceExhaustedError(
        absl::StrCat("mutual information enumeration over ", relevant.size(),
                     " unknown cells exceeds the limit of ", limit));
  }
  const int u = static_cast<int>(relevant.size());
  if (u == 0) return 0.0;

  // Y(X) is a deterministic function of the map, so I(E;Y) = H(Y). Outcomes
  // are keyed by (which relevant cells were observed, their occupancy).
  std::map<std::uint64_t, double> outcome_probability;
  const double p = belief.occupancy_prior;
  GroundTruthEnvironment env = optimistic;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << u); ++mask) {
    for (int i = 0; i < u; ++i) env.grid[relevant[i]] = (mask >> i) & 1;
    std::uint64_t observed = 0;
    std::size_t next = 0;
    for (CellId c : CoveredCells(actions, env, cam)) {
      while (next < relevant.size() && relevant[next] < c) ++next;
      if (next < relevant.size() && relevant[next] == c) {
        observed |= std::uint64_t{1} << next;
      }
    }
    const int occupied = std::popcount(mask);
    const double probability =
        std::pow(p, occupied) * std::pow(1.0 - p, u - occupied);
    outcome_probability[(observed << 32) | (mask & observed)] += probability;
  }
  double entropy = 0.0;
  for (const auto& [key, probability] : outcome_probability) {
    if (probability > 0.0) entropy -= probability * std::log2(probability);
  }
  return entropy;
}

absl::StatusOr<double> RaySumInformation(
    std::span<const TrajectoryAction> actions, const BeliefMap& belief,
    const ObjectiveSpec& spec, const CameraModel& cam) {
  if (!spec.ray_sum) {
    return absl::InvalidArgumentError("ray-sum information requires ray_sum");
  }
  if (absl::Status s = spec.Validate(); !s.ok()) return s;
  ViewObjective objective(belief, cam, spec);
  return objective.TryValue(actions);
}

std::vector<RobotState> SampleInformativeViews(const ViewObjective& objective,
                                               const DistanceRewardConfig& cfg) {
  const BeliefMap& belief = objective.belief();
  std::vector<CellId> free_cells;
  for (CellId id = 0; id < belief.grid.size(); ++id) {
    if (belief.grid[id] == CellState::kFree) free_cells.push_back(id);
  }
  std::vector<RobotState> views;
  if (free_cells.empty()) return views;
  Rng rng(cfg.sample_seed);
  std::unordered_set<StateKey, StateKeyHash> seen;
  for (int i = 0; i < cfg.view_sample_count; ++i) {
    RobotState candidate;
    candidate.position = belief.grid.CellToWorld(
        belief.grid.Unflatten(free_cells[rng.Below(free_cells.size())]));
    candidate.yaw_quarters = static_cast<int>(rng.Below(4));
    const double value =
        static_cast<double>(objective.OptimisticNewCells(candidate));
    if (value >= cfg.view_value_threshold &&
        seen.insert(StateKey(candidate)).second) {
      views.push_back(candidate);
    }
  }
  return views;
}

std::vector<RobotState> SampleInformativeViews(const BeliefMap& belief,
                                               const CameraModel& cam,
                                               const DistanceRewardConfig& cfg) {
  ViewObjective objective(belief, cam, ObjectiveSpec{});
  return SampleInformativeViews(objective, cfg);
}

double DistanceField::At(const Eigen::Vector3d& position) const {
  std::optional<CellIndex> c = meters.WorldToCell(position);
  if (!c) return kUnreachable;
  return meters.at(*c);
}

DistanceField ComputeDistanceField(const BeliefMap& belief,
                                   std::span<const RobotState> goal_views) {
  DistanceField field;
  field.meters = VoxelGrid3<double>(belief.grid.dims(), belief.grid.resolution(),
                                    DistanceField::kUnreachable);
  std::vector<int> hops(belief.grid.size(), -1);
  std::deque<CellId> queue;
  for (const RobotState& goal : goal_views) {
    std::optional<CellIndex> c = belief.grid.WorldToCell(goal.position);
    if (!c) continue;
    const CellId id = belief.grid.Flatten(*c);
    if (belief.grid[id] != CellState::kFree || hops[id] == 0) continue;
    hops[id] = 0;
    queue.push_back(id);
    field.has_goals = true;
  }
  static constexpr int kOffsets[6][3] = {{1, 0, 0},  {-1, 0, 0}, {0, 1, 0},
                                         {0, -1, 0}, {0, 0, 1},  {0, 0, -1}};
  while (!queue.empty()) {
    const CellId id = queue.front();
    queue.pop_front();
    const CellIndex c = belief.grid.Unflatten(id);
    for (const auto& o : kOffsets) {
      const CellIndex n{c.x + o[0], c.y + o[1], c.z + o[2]};
      if (!belief.grid.Contains(n)) continue;
      const CellId nid = belief.grid.Flatten(n);
      if (hops[nid] >= 0 || belief.grid[nid] != CellState::kFree) continue;
      hops[nid] = hops[id] + 1;
      queue.push_back(nid);
    }
  }
  for (CellId id = 0; id < belief.grid.size(); ++id) {
    if (hops[id] >= 0) field.meters[id] = hops[id] * belief.grid.resolution();
  }
  return field;
}

double DistanceReward(const TrajectoryAction& action, const DistanceField& field,
                      double alpha) {
  if (!field.has_goals || action.states.size() < 2) return 0.0;
  const double d0 = field.At(action.states.front().position);
  if (!std::isfinite(d0)) return 0.0;
  double closest = d0;
  for (std::size_t l = 1; l < action.states.size(); ++l) {
    closest = std::min(closest, field.At(action.states[l].position));
  }
  const double progress = std::max(0.0, d0 - closest);
  return alpha * progress / std::max(d0, field.meters.resolution());
}

// ---------------------------------------------------------------------------
// Objective

Objective::Objective(const BeliefMap& belief, const CameraModel& cam,
                     ObjectiveSpec spec, DistanceField field, double alpha)
    : view_(belief, cam, spec), field_(std::move(field)), alpha_(alpha) {}

double Objective::Value(std::span<const TrajectoryAction> actions) const {
  std::map<int, double> per_robot;
  for (const TrajectoryAction& a : actions) {
    double& d = per_robot[a.robot];
    d = std::max(d, DistanceReward(a, field_, alpha_));
  }
  double value = view_.Value(actions);
  for (const auto& [robot, d] : per_robot) value += d;
  return value;
}

Objective::Conditioned Objective::Condition(
    std::span<const TrajectoryAction> conditioning) const {
  Conditioned c;
  c.parent_ = this;
  c.view_ = view_.Condition(conditioning);
  for (const TrajectoryAction& a : conditioning) {
    double& d = c.robot_distance_[a.robot];
    d = std::max(d, DistanceReward(a, field_, alpha_));
  }
  return c;
}

double Objective::Conditioned::DistanceGain(
    const TrajectoryAction& action) const {
  const double d = DistanceReward(action, parent_->field_, parent_->alpha_);
  auto it = robot_distance_.find(action.robot);
  const double credited = it == robot_distance_.end() ? 0.0 : it->second;
  return std::max(0.0, d - credited);
}

double Objective::Conditioned::Gain(const TrajectoryAction& action) {
  return view_.Gain(action) + DistanceGain(action);
}

absl::StatusOr<double> CombinedObjective(
    std::span<const TrajectoryAction> actions, const BeliefMap& belief,
    const ObjectiveSpec& spec, const CameraModel& cam,
    const DistanceRewardConfig& dist_cfg) {
  if (absl::Status s = spec.Validate(); !s.ok()) return s;
  if (absl::Status s = dist_cfg.Validate(); !s.ok()) return s;
  ViewObjective sampler(belief, cam, ObjectiveSpec{});
  const std::vector<RobotState> goals = SampleInformativeViews(sampler, dist_cfg);
  Objective objective(belief, cam, spec, ComputeDistanceField(belief, goals),
                      dist_cfg.distance_factor);
  std::map<int, double> per_robot;
  for (const TrajectoryAction& a : actions) {
    double& d = per_robot[a.robot];
    d = std::max(d, DistanceReward(a, objective.field(), objective.alpha()));
  }
  absl::StatusOr<double> view = objective.view().TryValue(actions);
  if (!view.ok()) return view.status();
  double value = *view;
  for (const auto& [robot, d] : per_robot) value += d;
  return value;
}

}  // namespace volex
