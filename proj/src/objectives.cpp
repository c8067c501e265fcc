// Copyright 2026 The bfosp Authors.
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

#include "bfosp/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bfosp/error.hpp"

namespace bfosp {

std::string_view to_string(TargetShape shape) {
  return shape == TargetShape::kDecreasing ? "decreasing" : "unimodal";
}

TargetShape target_shape_from_string(std::string_view name) {
  if (name == "decreasing") return TargetShape::kDecreasing;
  if (name == "unimodal") return TargetShape::kUnimodal;
  throw ConfigError("unknown synthetic target shape '" + std::string(name) + "'");
}

std::vector<double> benchmark_grid() {
  std::vector<double> grid(SyntheticTarget::kGridSize);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(grid.size());
  }
  return grid;
}

SyntheticTarget SyntheticTarget::decreasing() {
  SyntheticTarget t;
  t.shape = TargetShape::kDecreasing;
  for (double x : benchmark_grid()) t.target_vector.push_back(std::exp(-3.0 * x));
  const auto [lo, hi] = std::minmax_element(t.target_vector.begin(), t.target_vector.end());
  const double min = *lo;
  const double range = *hi - *lo;
  for (double& v : t.target_vector) v = (v - min) / range;
  return t;
}

SyntheticTarget SyntheticTarget::unimodal() {
  SyntheticTarget t;
  t.shape = TargetShape::kUnimodal;
  for (double x : benchmark_grid()) {
    const double z = (x - 0.4) / 0.2;
    t.target_vector.push_back(std::exp(-z * z));
  }
  return t;
}

SyntheticTarget SyntheticTarget::preset(TargetShape shape) {
  return shape == TargetShape::kDecreasing ? decreasing() : unimodal();
}

void SyntheticTarget::validate() const {
  if (target_vector.size() != kGridSize) {
    throw ConfigError("synthetic target needs " + std::to_string(kGridSize) + " values");
  }
  if (!(spread > 0.0)) throw ConfigError("synthetic target spread must be positive");
  const auto& s = target_vector;
  if (shape == TargetShape::kDecreasing) {
    for (std::size_t i = 1; i < s.size(); ++i) {
      if (s[i] > s[i - 1]) throw ConfigError("decreasing target increases on the grid");
    }
  } else {
    std::size_t i = 1;
    while (i < s.size() && s[i] >= s[i - 1]) ++i;
    while (i < s.size() && s[i] <= s[i - 1]) ++i;
    if (i != s.size()) throw ConfigError("unimodal target has more than one peak on the grid");
  }
}

double synthetic_utility(const SyntheticTarget& target, const BernsteinPoly& candidate) {
  const std::vector<double> s = poly_eval(candidate, benchmark_grid());
  double dist2 = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double d = s[i] - target.target_vector[i];
    dist2 += d * d;
  }
  return std::exp(-dist2 / (2.0 * target.spread * target.spread));
}

Objective make_objective(const SyntheticTarget& target) {
  return [target](const BernsteinPoly& p, std::span<const double>) {
    return synthetic_utility(target, p);
  };
}

OptimizerConfig synthetic_config(const ShapePrior& prior, int iterations, std::uint64_t seed) {
  OptimizerConfig cfg;
  cfg.start_order = 5;
  cfg.max_order = 10;
  cfg.trigger_fraction = 0.95;
  cfg.fixed_increment_period = 10;
  cfg.max_iterations = iterations;
  cfg.prior = prior;
  cfg.acquisition.batch_size = 1;
  cfg.acquisition.rng_seed = seed;
  return cfg;
}

SyntheticRun run_synthetic(const SyntheticTarget& target, const OptimizerConfig& config,
                           int iterations) {
  target.validate();
  SyntheticRun run{initial_state(config, "synthetic-" + std::string(to_string(target.shape))),
                   {}};
  const Objective objective = make_objective(target);
  for (int r = 0; r < iterations && !run.state.finished(); ++r) {
    run.state = run_closed_loop(std::move(run.state), objective, 1);
    run.incumbent_trace.push_back(run.state.log.back().incumbent_value);
  }
  return run;
}

std::vector<ExternalRequest> external_requests(const CampaignState& state,
                                               std::size_t grid_size) {
  std::vector<ExternalRequest> out;
  for (const auto& p : state.pending) {
    if (p.value) continue;
    out.push_back({p.token,
                   sample_curve(BernsteinPoly(p.point.alpha), grid_size, state.config.rescale),
                   p.point.aux});
  }
  return out;
}

}  // namespace bfosp
