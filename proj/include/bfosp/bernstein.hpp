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

// Bernstein-basis polynomials on the unit interval: evaluation, calculus,
// order elevation, and the linear coefficient constraints that encode shape
// priors (range, monotone, unimodal).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bfosp/random.hpp"

namespace bfosp {

/// g(t) = sum_v coeffs[v] * b_{v,n}(t) on t in [0, 1], with n = coeffs.size() - 1.
class BernsteinPoly {
 public:
  /// The zero polynomial of order 0.
  BernsteinPoly();
  /// Throws DomainError if `coeffs` is empty or holds a non-finite value.
  explicit BernsteinPoly(std::vector<double> coeffs);

  static BernsteinPoly constant(int order, double value);

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const double> coeffs() const { return coeffs_; }

  double operator()(double t) const;

  friend bool operator==(const BernsteinPoly&, const BernsteinPoly&) = default;

 private:
  std::vector<double> coeffs_;
};

/// C(n, k) by multiplicative recurrence; exact for the orders used here.
double binomial(int n, int k);

/// b_{v,n}(t) = C(n,v) t^v (1-t)^(n-v). DomainError unless 0 <= v <= n and
/// t in [0, 1].
double basis_eval(int n, int v, double t);

/// DomainError if t is outside [0, 1].
double poly_eval(const BernsteinPoly& p, double t);

/// Evaluates at many points through the SIMD dispatch layer.
std::vector<double> poly_eval(const BernsteinPoly& p, std::span<const double> ts);

/// Order n-1 polynomial with coefficients n (a_{v+1} - a_v). A constant
/// (order 0) maps to the zero polynomial of order 0.
BernsteinPoly derivative(const BernsteinPoly& p);

/// max_v |a_{v+1} - a_v| over adjacent coefficients; 0 for fewer than two.
double max_adjacent_difference(std::span<const double> coeffs);

/// n * max_v |a_{v+1} - a_v|. Upper bound on max_t |g'(t)|.
double derivative_bound(const BernsteinPoly& p);

/// Exact re-expression at order n+1:
///   a'_v = v/(n+1) a_{v-1} + (1 - v/(n+1)) a_v,  v = 0..n+1.
BernsteinPoly elevate(const BernsteinPoly& p);

/// Coefficient-vector form of elevate().
std::vector<double> elevate(std::span<const double> coeffs);

enum class ShapeKind { kRangeOnly, kIncreasing, kDecreasing, kUnimodal };

std::string_view to_string(ShapeKind kind);
/// ConfigError on unknown names. Accepts "range", "increasing",
/// "decreasing", "unimodal".
ShapeKind shape_kind_from_string(std::string_view name);

struct ShapePrior {
  ShapeKind kind = ShapeKind::kRangeOnly;
  /// Unimodal peak coefficient index l, 0 < l < n. When unset, every
  /// admissible l is allowed.
  std::optional<int> mode_index;

  static ShapePrior range_only() { return {}; }
  static ShapePrior increasing() { return {ShapeKind::kIncreasing, {}}; }
  static ShapePrior decreasing() { return {ShapeKind::kDecreasing, {}}; }
  static ShapePrior unimodal(std::optional<int> l = {}) {
    return {ShapeKind::kUnimodal, l};
  }

  /// Smallest polynomial order this prior can be applied to.
  int min_order() const;

  /// ConfigError if the prior cannot be applied at `order`.
  void validate(int order) const;

  friend bool operator==(const ShapePrior&, const ShapePrior&) = default;
};

/// C(a) = a[upper] - a[lower] >= 0.
struct LinearInequality {
  std::size_t upper = 0;
  std::size_t lower = 0;

  double operator()(std::span<const double> coeffs) const {
    return coeffs[upper] - coeffs[lower];
  }
};

/// Inequality set for `prior` at `order`. RangeOnly yields no functionals
/// (the unit box handles range); the others yield n. Unimodal uses
/// a_{v+1} >= a_v for v < l and a_v >= a_{v+1} for v >= l, and needs a
/// mode index.
std::vector<LinearInequality> constraint_set(const ShapePrior& prior, int order);

bool in_unit_box(std::span<const double> coeffs, double slack = 0.0);

/// True when `coeffs` lies in the unit box and satisfies the prior. A
/// unimodal prior without mode index accepts any admissible l.
bool is_feasible(const ShapePrior& prior, std::span<const double> coeffs,
                 double slack = 0.0);

/// Maps an arbitrary vector onto the feasible set: clamp to [0, 1] then
/// re-sort (monotone) or flank re-sort around the peak (unimodal). The
/// multiset of clamped values is preserved.
void project_feasible(const ShapePrior& prior, std::span<double> coeffs);

/// One feasible coefficient vector of length order+1 drawn from `rng`.
std::vector<double> draw_feasible(const ShapePrior& prior, int order, Rng& rng);

/// `count` feasible vectors, deterministic in `seed`.
std::vector<std::vector<double>> sample_feasible(const ShapePrior& prior, int order,
                                                 std::uint64_t seed, std::size_t count);

/// Affine map from the unit square to application units (time, control).
struct RescaleRecord {
  double t_min = 0.0;
  double t_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;

  double time(double unit_t) const { return t_min + (t_max - t_min) * unit_t; }
  double value(double unit_y) const { return y_min + (y_max - y_min) * unit_y; }

  /// ConfigError unless both ranges are finite and non-degenerate.
  void validate() const;

  friend bool operator==(const RescaleRecord&, const RescaleRecord&) = default;
};

/// A control function sampled on a strictly increasing grid in [0, 1].
struct CurveSample {
  std::vector<double> grid;
  std::vector<double> values;

  /// DomainError on length mismatch, non-increasing grid or grid outside [0, 1].
  void validate() const;
};

/// Samples `p` on `grid_size` equispaced points covering [0, 1]; values are
/// mapped through `rescale`.
CurveSample sample_curve(const BernsteinPoly& p, std::size_t grid_size,
                         const RescaleRecord& rescale = {});

}  // namespace bfosp
