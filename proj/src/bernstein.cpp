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

#include "bfosp/bernstein.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "bfosp/error.hpp"
#include "bfosp/simd.hpp"

namespace bfosp {

BernsteinPoly::BernsteinPoly() : coeffs_{0.0} {}

BernsteinPoly::BernsteinPoly(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) {
    throw DomainError("Bernstein polynomial needs at least one coefficient");
  }
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw DomainError("Bernstein coefficient is not finite");
  }
}

BernsteinPoly BernsteinPoly::constant(int order, double value) {
  if (order < 0) throw DomainError("negative polynomial order");
  return BernsteinPoly(std::vector<double>(static_cast<std::size_t>(order) + 1, value));
}

double BernsteinPoly::operator()(double t) const { return poly_eval(*this, t); }

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return c;
}

namespace {

void check_unit(double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError("t = " + std::to_string(t) + " is outside [0, 1]");
  }
}

}  // namespace

double basis_eval(int n, int v, double t) {
  if (n < 0 || v < 0 || v > n) {
    throw DomainError("basis index v = " + std::to_string(v) + " out of range for order " +
                      std::to_string(n));
  }
  check_unit(t);
  return binomial(n, v) * std::pow(t, v) * std::pow(1.0 - t, n - v);
}

double poly_eval(const BernsteinPoly& p, double t) {
  check_unit(t);
  double out = 0.0;
  simd::scalar::bernstein_eval(p.coeffs(), std::span<const double>(&t, 1),
                               std::span<double>(&out, 1));
  return out;
}

std::vector<double> poly_eval(const BernsteinPoly& p, std::span<const double> ts) {
  for (double t : ts) check_unit(t);
  std::vector<double> out(ts.size());
  simd::bernstein_eval(p.coeffs(), ts, out);
  return out;
}

BernsteinPoly derivative(const BernsteinPoly& p) {
  const int n = p.order();
  if (n == 0) return BernsteinPoly();
  const auto a = p.coeffs();
  std::vector<double> d(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) d[v] = n * (a[v + 1] - a[v]);
  return BernsteinPoly(std::move(d));
}

double max_adjacent_difference(std::span<const double> coeffs) {
  double d = 0.0;
  for (std::size_t v = 0; v + 1 < coeffs.size(); ++v) {
    d = std::max(d, std::abs(coeffs[v + 1] - coeffs[v]));
  }
  return d;
}

double derivative_bound(const BernsteinPoly& p) {
  return p.order() * max_adjacent_difference(p.coeffs());
}

std::vector<double> elevate(std::span<const double> coeffs) {
  if (coeffs.empty()) throw DomainError("cannot elevate an empty coefficient vector");
  const std::size_t n = coeffs.size() - 1;
  const double np1 = static_cast<double>(n + 1);
  std::vector<double> out(n + 2);
  out[0] = coeffs[0];
  for (std::size_t v = 1; v <= n; ++v) {
    const double w = static_cast<double>(v) / np1;
    out[v] = w * coeffs[v - 1] + (1.0 - w) * coeffs[v];
  }
  out[n + 1] = coeffs[n];
  return out;
}

BernsteinPoly elevate(const BernsteinPoly& p) { return BernsteinPoly(elevate(p.coeffs())); }

std::string_view to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::kRangeOnly:
      return "range";
    case ShapeKind::kIncreasing:
      return "increasing";
    case ShapeKind::kDecreasing:
      return "decreasing";
    case ShapeKind::kUnimodal:
      return "unimodal";
  }
  return "unknown";
}

ShapeKind shape_kind_from_string(std::string_view name) {
  if (name == "range" || name == "range_only" || name == "none") return ShapeKind::kRangeOnly;
  if (name == "increasing") return ShapeKind::kIncreasing;
  if (name == "decreasing") return ShapeKind::kDecreasing;
  if (name == "unimodal") return ShapeKind::kUnimodal;
  throw ConfigError("unknown shape prior '" + std::string(name) + "'");
}

int ShapePrior::min_order() const {
  switch (kind) {
    case ShapeKind::kRangeOnly:
      return 0;
    case ShapeKind::kIncreasing:
    case ShapeKind::kDecreasing:
      return 1;
    case ShapeKind::kUnimodal:
      return 3;
  }
  return 0;
}

void ShapePrior::validate(int order) const {
  if (order < min_order()) {
    throw ConfigError(std::string(to_string(kind)) + " prior needs order >= " +
                      std::to_string(min_order()) + ", got " + std::to_string(order));
  }
  if (mode_index) {
    if (kind != ShapeKind::kUnimodal) {
      throw ConfigError("mode_index is only meaningful for a unimodal prior");
    }
    if (*mode_index <= 0 || *mode_index >= order) {
      throw ConfigError("unimodal mode index l = " + std::to_string(*mode_index) +
                        " must satisfy 0 < l < " + std::to_string(order));
    }
  }
}

std::vector<LinearInequality> constraint_set(const ShapePrior& prior, int order) {
  prior.validate(order);
  const auto n = static_cast<std::size_t>(order);
  std::vector<LinearInequality> out;
  switch (prior.kind) {
    case ShapeKind::kRangeOnly:
      break;
    case ShapeKind::kIncreasing:
      for (std::size_t v = 0; v < n; ++v) out.push_back({v + 1, v});
      break;
    case ShapeKind::kDecreasing:
      for (std::size_t v = 0; v < n; ++v) out.push_back({v, v + 1});
      break;
    case ShapeKind::kUnimodal: {
      if (!prior.mode_index) {
        throw ConfigError("unimodal constraint set needs a mode index");
      }
      const auto l = static_cast<std::size_t>(*prior.mode_index);
      for (std::size_t v = 0; v < l; ++v) out.push_back({v + 1, v});
      for (std::size_t v = l; v < n; ++v) out.push_back({v, v + 1});
      break;
    }
  }
  return out;
}

bool in_unit_box(std::span<const double> coeffs, double slack) {
  return std::all_of(coeffs.begin(), coeffs.end(),
                     [slack](double c) { return c >= -slack && c <= 1.0 + slack; });
}

namespace {

bool satisfies(const std::vector<LinearInequality>& set, std::span<const double> coeffs,
               double slack) {
  return std::all_of(set.begin(), set.end(),
                     [&](const LinearInequality& c) { return c(coeffs) >= -slack; });
}

// Peak index for flank projection, kept admissible for the order.
std::size_t unimodal_peak(const ShapePrior& prior, std::span<const double> coeffs) {
  const std::size_t n = coeffs.size() - 1;
  if (prior.mode_index) return static_cast<std::size_t>(*prior.mode_index);
  const auto it = std::max_element(coeffs.begin(), coeffs.end());
  const auto m = static_cast<std::size_t>(it - coeffs.begin());
  return std::clamp<std::size_t>(m, 1, n - 1);
}

void arrange_unimodal(std::span<double> coeffs, std::size_t l) {
  const auto it = std::max_element(coeffs.begin(), coeffs.end());
  std::iter_swap(it, coeffs.begin() + static_cast<std::ptrdiff_t>(l));
  std::sort(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(l));
  std::sort(coeffs.begin() + static_cast<std::ptrdiff_t>(l) + 1, coeffs.end(),
            std::greater<>());
}

}  // namespace

bool is_feasible(const ShapePrior& prior, std::span<const double> coeffs, double slack) {
  if (coeffs.empty() || !in_unit_box(coeffs, slack)) return false;
  const int order = static_cast<int>(coeffs.size()) - 1;
  if (order < prior.min_order()) return false;
  if (prior.kind == ShapeKind::kUnimodal && !prior.mode_index) {
    for (int l = 1; l < order; ++l) {
      if (satisfies(constraint_set(ShapePrior::unimodal(l), order), coeffs, slack)) return true;
    }
    return false;
  }
  if (prior.mode_index && (*prior.mode_index <= 0 || *prior.mode_index >= order)) return false;
  return satisfies(constraint_set(prior, order), coeffs, slack);
}

void project_feasible(const ShapePrior& prior, std::span<double> coeffs) {
  for (double& c : coeffs) c = std::clamp(c, 0.0, 1.0);
  switch (prior.kind) {
    case ShapeKind::kRangeOnly:
      break;
    case ShapeKind::kIncreasing:
      std::sort(coeffs.begin(), coeffs.end());
      break;
    case ShapeKind::kDecreasing:
      std::sort(coeffs.begin(), coeffs.end(), std::greater<>());
      break;
    case ShapeKind::kUnimodal:
      if (coeffs.size() >= 4) arrange_unimodal(coeffs, unimodal_peak(prior, coeffs));
      break;
  }
}

std::vector<double> draw_feasible(const ShapePrior& prior, int order, Rng& rng) {
  prior.validate(order);
  std::vector<double> a(static_cast<std::size_t>(order) + 1);
  for (double& c : a) c = uniform01(rng);
  switch (prior.kind) {
    case ShapeKind::kRangeOnly:
      break;
    case ShapeKind::kIncreasing:
      std::sort(a.begin(), a.end());
      break;
    case ShapeKind::kDecreasing:
      std::sort(a.begin(), a.end(), std::greater<>());
      break;
    case ShapeKind::kUnimodal: {
      const int l = prior.mode_index ? *prior.mode_index : uniform_int(rng, 1, order - 1);
      arrange_unimodal(a, static_cast<std::size_t>(l));
      break;
    }
  }
  return a;
}

std::vector<std::vector<double>> sample_feasible(const ShapePrior& prior, int order,
                                                 std::uint64_t seed, std::size_t count) {
  Rng rng = make_rng(seed);
  std::vector<std::vector<double>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(draw_feasible(prior, order, rng));
  return out;
}

void RescaleRecord::validate() const {
  for (double v : {t_min, t_max, y_min, y_max}) {
    if (!std::isfinite(v)) throw ConfigError("rescale bounds must be finite");
  }
  if (!(t_max > t_min)) throw ConfigError("rescale needs t_max > t_min");
  if (y_max == y_min) throw ConfigError("rescale needs y_max != y_min");
}

void CurveSample::validate() const {
  if (grid.size() != values.size()) throw DomainError("curve grid/values length mismatch");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) throw DomainError("curve grid outside [0, 1]");
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw DomainError("curve grid is not strictly increasing");
    }
  }
}

CurveSample sample_curve(const BernsteinPoly& p, std::size_t grid_size,
                         const RescaleRecord& rescale) {
  if (grid_size < 2) throw DomainError("curve grid needs at least two points");
  CurveSample out;
  out.grid.resize(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) {
    out.grid[i] = static_cast<double>(i) / static_cast<double>(grid_size - 1);
  }
  out.values = poly_eval(p, out.grid);
  for (double& v : out.values) v = rescale.value(v);
  return out;
}

}  // namespace bfosp
