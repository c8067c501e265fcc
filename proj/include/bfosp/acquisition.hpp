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

// GP-UCB acquisition over the shape-feasible coefficient set, and GP-UCB-PE
// batches (one UCB point, the rest chosen by pure exploration).

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bfosp/bernstein.hpp"
#include "bfosp/gp.hpp"
#include "bfosp/random.hpp"

namespace bfosp {

struct AcquisitionConfig {
  /// Confidence parameter of the beta schedule, in (0, 1).
  double delta = 0.1;
  /// Feasible random candidates scored before local refinement.
  int candidate_count = 2000;
  int refine_steps = 20;
  int batch_size = 1;
  std::uint64_t rng_seed = 0;

  static constexpr double kRefineInitialStep = 0.05;
  static constexpr double kRefineShrink = 0.7;
  static constexpr double kMinSeparation = 1e-6;

  /// ConfigError on out-of-range fields.
  void validate() const;

  friend bool operator==(const AcquisitionConfig&, const AcquisitionConfig&) = default;
};

/// beta_t = 2 ln(t^(dim/2 + 2) pi^2 / (3 delta)), natural log.
double beta(int t, int dim, double delta);

/// mean + sqrt(beta_val) * sqrt(variance).
double ucb(const Prediction& p, double beta_val);
double ucb(const GpSurrogate& gp, std::span<const double> x, double beta_val);

/// Feasible design region at one polynomial order: coefficients under the
/// shape prior in the unit box, aux components in their bounds.
struct SearchSpace {
  int order = 0;
  ShapePrior prior;
  InputSpace inputs;

  std::size_t alpha_size() const { return static_cast<std::size_t>(order) + 1; }
  std::size_t dim() const { return alpha_size() + inputs.aux_bounds.size(); }

  /// Uniform feasible draw, returned as unit-box features.
  std::vector<double> draw_features(Rng& rng) const;
  /// Clamp to the unit box and re-sort the coefficient part onto the prior.
  void project(std::span<double> features) const;
  bool feasible_features(std::span<const double> features, double slack = 0.0) const;
  bool is_feasible(const DesignPoint& x, double slack = 0.0) const;
  DesignPoint to_point(std::span<const double> features) const;
};

struct Selection {
  DesignPoint point;
  std::vector<double> features;
  /// Objective (UCB or exploration variance) at the returned point.
  double value = 0.0;
  /// Best objective among the raw candidate pool, before refinement.
  double pool_best = 0.0;
};

/// Best UCB point: candidate_count feasible draws, then refine_steps rounds of
/// coordinate-wise Gaussian perturbation (step 0.05, shrinking x0.7), each
/// proposal projected back onto the feasible set and accepted only if it
/// improves the UCB. With no surrogate (cold start) a random feasible point
/// is returned. Ties resolve to the lowest candidate index.
Selection maximize_constrained(const GpSurrogate* gp, const SearchSpace& space,
                               const AcquisitionConfig& cfg, int t, Rng& rng);

/// Convenience overload seeded from cfg.rng_seed.
Selection maximize_constrained(const GpSurrogate* gp, const SearchSpace& space,
                               const AcquisitionConfig& cfg, int t);

/// Point with maximal posterior variance under `gp`, same candidate scheme.
/// Points within kMinSeparation (max-norm) of `exclude` are rejected.
Selection maximize_variance(const GpSurrogate& gp, const SearchSpace& space,
                            const AcquisitionConfig& cfg,
                            std::span<const std::vector<double>> exclude, Rng& rng);

/// GP-UCB-PE batch of cfg.batch_size points. Point 1 maximises UCB; point j>1
/// maximises the variance of `gp` augmented with points 1..j-1. Cold start
/// returns distinct random feasible points.
std::vector<Selection> suggest_batch(const GpSurrogate* gp, const SearchSpace& space,
                                     const AcquisitionConfig& cfg, int t, Rng& rng);

std::vector<Selection> suggest_batch(const GpSurrogate* gp, const SearchSpace& space,
                                     const AcquisitionConfig& cfg, int t);

}  // namespace bfosp
