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

#include "bfosp/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "bfosp/error.hpp"

namespace bfosp {

void AcquisitionConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("acquisition delta must lie in (0, 1)");
  if (candidate_count < 1) throw ConfigError("candidate_count must be >= 1");
  if (refine_steps < 0) throw ConfigError("refine_steps must be >= 0");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
}

double beta(int t, int dim, double delta) {
  if (t < 1) throw DomainError("beta needs iteration index t >= 1");
  const double exponent = dim / 2.0 + 2.0;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return 2.0 * (exponent * std::log(static_cast<double>(t)) + std::log(pi2 / (3.0 * delta)));
}

double ucb(const Prediction& p, double beta_val) {
  return p.mean + std::sqrt(beta_val) * std::sqrt(p.variance);
}

double ucb(const GpSurrogate& gp, std::span<const double> x, double beta_val) {
  return ucb(gp.predict(x), beta_val);
}

std::vector<double> SearchSpace::draw_features(Rng& rng) const {
  std::vector<double> f = draw_feasible(prior, order, rng);
  for (std::size_t i = 0; i < inputs.aux_bounds.size(); ++i) f.push_back(uniform01(rng));
  return f;
}

void SearchSpace::project(std::span<double> features) const {
  project_feasible(prior, features.first(alpha_size()));
  for (double& v : features.subspan(alpha_size())) v = std::clamp(v, 0.0, 1.0);
}

bool SearchSpace::feasible_features(std::span<const double> features, double slack) const {
  if (features.size() != dim()) return false;
  return bfosp::is_feasible(prior, features.first(alpha_size()), slack) &&
         in_unit_box(features.subspan(alpha_size()), slack);
}

bool SearchSpace::is_feasible(const DesignPoint& x, double slack) const {
  if (x.alpha.size() != alpha_size() || x.aux.size() != inputs.aux_bounds.size()) return false;
  return feasible_features(inputs.features(x), slack);
}

DesignPoint SearchSpace::to_point(std::span<const double> features) const {
  return inputs.point(features, alpha_size());
}

namespace {

using BatchScore = std::function<std::vector<double>(const std::vector<std::vector<double>>&)>;
using PointScore = std::function<double(std::span<const double>)>;

bool too_close(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d < AcquisitionConfig::kMinSeparation;
}

bool excluded(std::span<const double> x, std::span<const std::vector<double>> exclude) {
  return std::any_of(exclude.begin(), exclude.end(),
                     [&](const std::vector<double>& e) { return too_close(x, e); });
}

Selection search(const BatchScore& score_batch, const PointScore& score_one,
                 const SearchSpace& space, const AcquisitionConfig& cfg,
                 std::span<const std::vector<double>> exclude, Rng& rng) {
  std::vector<std::vector<double>> pool;
  pool.reserve(static_cast<std::size_t>(cfg.candidate_count));
  for (int i = 0; i < cfg.candidate_count; ++i) pool.push_back(space.draw_features(rng));
  const std::vector<double> scores = score_batch(pool);

  std::size_t best = pool.size();
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (excluded(pool[i], exclude)) continue;
    if (best == pool.size() || scores[i] > scores[best]) best = i;
  }
  // Every candidate collided with an excluded point: draw until one does not.
  std::vector<double> current;
  double current_score = 0.0;
  if (best == pool.size()) {
    do {
      current = space.draw_features(rng);
    } while (excluded(current, exclude));
    current_score = score_one(current);
  } else {
    current = pool[best];
    current_score = scores[best];
  }
  const double pool_best = current_score;

  double step = AcquisitionConfig::kRefineInitialStep;
  std::vector<double> proposal;
  for (int s = 0; s < cfg.refine_steps; ++s) {
    for (std::size_t j = 0; j < current.size(); ++j) {
      proposal = current;
      proposal[j] += step * standard_normal(rng);
      space.project(proposal);
      if (proposal == current || excluded(proposal, exclude)) continue;
      const double value = score_one(proposal);
      if (value > current_score) {
        current.swap(proposal);
        current_score = value;
      }
    }
    step *= AcquisitionConfig::kRefineShrink;
  }

  Selection out;
  out.point = space.to_point(current);
  out.features = std::move(current);
  out.value = current_score;
  out.pool_best = pool_best;
  return out;
}

Selection random_selection(const SearchSpace& space,
                           std::span<const std::vector<double>> exclude, Rng& rng) {
  Selection out;
  do {
    out.features = space.draw_features(rng);
  } while (excluded(out.features, exclude));
  out.point = space.to_point(out.features);
  return out;
}

}  // namespace

Selection maximize_constrained(const GpSurrogate* gp, const SearchSpace& space,
                               const AcquisitionConfig& cfg, int t, Rng& rng) {
  cfg.validate();
  space.prior.validate(space.order);
  if (gp == nullptr || gp->size() == 0) return random_selection(space, {}, rng);
  if (gp->dim() != space.dim()) throw ConfigError("surrogate dimension does not match search space");

  const double b = beta(t, static_cast<int>(space.dim()), cfg.delta);
  const BatchScore batch = [&](const std::vector<std::vector<double>>& xs) {
    const auto preds = gp->predict(xs);
    std::vector<double> v(preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) v[i] = ucb(preds[i], b);
    return v;
  };
  const PointScore one = [&](std::span<const double> x) { return ucb(*gp, x, b); };
  return search(batch, one, space, cfg, {}, rng);
}

Selection maximize_constrained(const GpSurrogate* gp, const SearchSpace& space,
                               const AcquisitionConfig& cfg, int t) {
  Rng rng = make_rng(cfg.rng_seed);
  return maximize_constrained(gp, space, cfg, t, rng);
}

Selection maximize_variance(const GpSurrogate& gp, const SearchSpace& space,
                            const AcquisitionConfig& cfg,
                            std::span<const std::vector<double>> exclude, Rng& rng) {
  cfg.validate();
  if (gp.dim() != space.dim()) throw ConfigError("surrogate dimension does not match search space");
  const BatchScore batch = [&](const std::vector<std::vector<double>>& xs) {
    const auto preds = gp.predict(xs);
    std::vector<double> v(preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) v[i] = preds[i].variance;
    return v;
  };
  const PointScore one = [&](std::span<const double> x) { return gp.predict(x).variance; };
  return search(batch, one, space, cfg, exclude, rng);
}

std::vector<Selection> suggest_batch(const GpSurrogate* gp, const SearchSpace& space,
                                     const AcquisitionConfig& cfg, int t, Rng& rng) {
  cfg.validate();
  const auto b = static_cast<std::size_t>(cfg.batch_size);
  std::vector<Selection> batch;
  std::vector<std::vector<double>> chosen;
  batch.reserve(b);

  if (gp == nullptr || gp->size() == 0) {
    space.prior.validate(space.order);
    while (batch.size() < b) {
      batch.push_back(random_selection(space, chosen, rng));
      chosen.push_back(batch.back().features);
    }
    return batch;
  }

  batch.push_back(maximize_constrained(gp, space, cfg, t, rng));
  chosen.push_back(batch.back().features);
  while (batch.size() < b) {
    const GpSurrogate explore = gp->augmented(chosen);
    batch.push_back(maximize_variance(explore, space, cfg, chosen, rng));
    chosen.push_back(batch.back().features);
  }
  return batch;
}

std::vector<Selection> suggest_batch(const GpSurrogate* gp, const SearchSpace& space,
                                     const AcquisitionConfig& cfg, int t) {
  Rng rng = make_rng(cfg.rng_seed);
  return suggest_batch(gp, space, cfg, t, rng);
}

}  // namespace bfosp
