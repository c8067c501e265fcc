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

#pragma once

// Built-in synthetic benchmarks and the exchange format for external
// (human or program) objectives.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bfosp/bernstein.hpp"
#include "bfosp/optimizer.hpp"

namespace bfosp {

enum class TargetShape { kDecreasing, kUnimodal };

std::string_view to_string(TargetShape shape);
TargetShape target_shape_from_string(std::string_view name);

/// Optimal control function sampled on the fixed benchmark grid.
struct SyntheticTarget {
  static constexpr std::size_t kGridSize = 10;
  static constexpr double kDefaultSpread = 0.5;

  std::vector<double> target_vector;
  TargetShape shape = TargetShape::kDecreasing;
  double spread = kDefaultSpread;

  /// exp(-3 t) on the grid, rescaled to span [0, 1].
  static SyntheticTarget decreasing();
  /// exp(-((t - 0.4) / 0.2)^2) on the grid.
  static SyntheticTarget unimodal();
  static SyntheticTarget preset(TargetShape shape);

  /// ConfigError if the vector has the wrong length, a non-positive spread,
  /// or does not respect its declared shape on the grid.
  void validate() const;
};

/// t_i = (i + 0.5) / 10, i = 0..9.
std::vector<double> benchmark_grid();

/// exp(-||s - s*||^2 / (2 spread^2)) where s samples `candidate` on the
/// benchmark grid. In (0, 1]; 1 exactly at the target.
double synthetic_utility(const SyntheticTarget& target, const BernsteinPoly& candidate);

Objective make_objective(const SyntheticTarget& target);

/// Benchmark configuration: order 5 -> 10, omega 10, trigger 0.95,
/// sequential acquisition.
OptimizerConfig synthetic_config(const ShapePrior& prior, int iterations, std::uint64_t seed);

struct SyntheticRun {
  CampaignState state;
  /// Incumbent utility after each round.
  std::vector<double> incumbent_trace;
};

SyntheticRun run_synthetic(const SyntheticTarget& target, const OptimizerConfig& config,
                           int iterations);

/// Curve handed to an external evaluator for one pending suggestion.
struct ExternalRequest {
  std::string token;
  CurveSample curve;
  std::vector<double> aux;
};

/// Evaluator's answer in user units (negation for minimisation is applied by
/// the campaign).
struct ExternalResponse {
  std::string token;
  double y = 0.0;
};

/// Requests for every unresolved pending suggestion, curves in application
/// units on `grid_size` points.
std::vector<ExternalRequest> external_requests(const CampaignState& state,
                                               std::size_t grid_size = 101);

}  // namespace bfosp
