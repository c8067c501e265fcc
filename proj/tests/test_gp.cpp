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

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

#include "bfosp/error.hpp"
#include "bfosp/gp.hpp"
#include "bfosp/random.hpp"
#include "bfosp/simd.hpp"
#include "oracles.hpp"

using namespace bfosp;

namespace {

std::vector<std::vector<double>> random_inputs(Rng& rng, std::size_t n, std::size_t dim) {
  std::vector<std::vector<double>> xs(n, std::vector<double>(dim));
  for (auto& x : xs) {
    for (double& v : x) v = uniform01(rng);
  }
  return xs;
}

std::vector<double> random_outputs(Rng& rng, std::size_t n) {
  std::vector<double> ys(n);
  for (double& y : ys) y = standard_normal(rng);
  return ys;
}

/// Sample of a zero-mean SE process at `xs` (jittered Cholesky of the Gram matrix).
std::vector<double> se_draw(Rng& rng, const std::vector<std::vector<double>>& xs, double ls) {
  const std::size_t n = xs.size();
  const std::vector<double> scales(xs[0].size(), ls);
  Eigen::MatrixXd k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) k(i, j) = oracle::se_kernel(xs[i], xs[j], 1.0, scales);
    k(i, i) += 1e-8;
  }
  const Eigen::MatrixXd l = k.llt().matrixL();
  Eigen::VectorXd z(n);
  for (std::size_t i = 0; i < n; ++i) z(i) = standard_normal(rng);
  const Eigen::VectorXd f = l * z;
  return {f.data(), f.data() + n};
}

}  // namespace

TEST_CASE("kernel_eval examples") {
  const auto p = KernelParams::isotropic(1, 1.0, 1.0, 1e-4);
  const std::vector<double> a{0.3}, b{1.3}, far{1e6};
  CHECK(kernel_eval(a, a, p) == 1.0);
  CHECK(kernel_eval(a, b, p) == doctest::Approx(0.6065306597126334).epsilon(1e-15));
  CHECK(kernel_eval(a, far, p) == 0.0);
  CHECK(kernel_eval(a, b, p) == kernel_eval(b, a, p));
  const std::vector<double> two{0.1, 0.2};
  CHECK_THROWS_AS(kernel_eval(a, two, p), ConfigError);
}

TEST_CASE("single observation posterior") {
  const auto p = KernelParams::isotropic(2, 0.3, 1.0, 0.25);
  const auto gp = GpSurrogate::fit({{0.4, 0.6}}, {2.0}, p);
  const Prediction at = gp.predict(std::vector<double>{0.4, 0.6});
  CHECK(at.mean == doctest::Approx(1.6).epsilon(1e-12));
  CHECK(at.variance == doctest::Approx(0.2).epsilon(1e-12));

  const Prediction far = gp.predict(std::vector<double>{40.0, -40.0});
  CHECK(std::abs(far.mean) <= 1e-12);
  CHECK(far.variance == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(gp.predict(std::vector<double>{0.1}), ConfigError);
}

TEST_CASE("duplicated inputs with positive noise fit without jitter") {
  const auto p = KernelParams::isotropic(1, 0.2, 1.0, 1e-4);
  const auto gp = GpSurrogate::fit({{0.5}, {0.5}, {0.5}}, {1.0, 1.2, 0.8}, p);
  CHECK(gp.size() == 3);
  const Prediction at = gp.predict(std::vector<double>{0.5});
  CHECK(at.mean == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(at.variance >= 0.0);
}

TEST_CASE("near-singular systems are rescued by jitter") {
  const auto p = KernelParams::isotropic(1, 0.2, 1.0, 0.0);
  const auto gp = GpSurrogate::fit({{0.5}, {0.5}}, {1.0, 1.0}, p);
  CHECK(gp.jitter() > 0.0);
  CHECK(gp.jitter() <= GpSurrogate::kInitialJitter * std::pow(2.0, GpSurrogate::kMaxJitterDoublings));
}

TEST_CASE("fit rejects malformed data") {
  const auto p = KernelParams::isotropic(1, 0.2, 1.0, 1e-4);
  CHECK_THROWS(GpSurrogate::fit(std::vector<std::vector<double>>{}, std::vector<double>{}, p));
  CHECK_THROWS(GpSurrogate::fit({{0.1}, {0.2}}, {1.0}, p));
  CHECK_THROWS(GpSurrogate::fit({{0.1}, {0.2, 0.3}}, {1.0, 2.0}, p));
  CHECK_THROWS(GpSurrogate::fit({{0.1}}, {std::numeric_limits<double>::quiet_NaN()}, p));
}

TEST_CASE("posterior matches the dense-solve oracle") {
  Rng rng = make_rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = static_cast<std::size_t>(uniform_int(rng, 1, 20));
    const auto dim = static_cast<std::size_t>(uniform_int(rng, 1, 8));
    const auto xs = random_inputs(rng, n, dim);
    const auto ys = random_outputs(rng, n);
    KernelParams p;
    p.signal_variance = 0.25 + 3.75 * uniform01(rng);
    p.noise_variance = std::pow(10.0, -6.0 + 4.0 * uniform01(rng));
    p.length_scales.resize(dim);
    for (double& l : p.length_scales) l = 0.2 + 0.8 * uniform01(rng);
    const auto gp = GpSurrogate::fit(xs, ys, p);
    REQUIRE(gp.jitter() == 0.0);
    const auto queries = random_inputs(rng, 10, dim);
    const auto batched = gp.predict(queries);
    for (std::size_t q = 0; q < queries.size(); ++q) {
      const auto ref = oracle::gp_posterior(xs, ys, p.signal_variance, p.length_scales,
                                            p.noise_variance, queries[q]);
      const Prediction got = gp.predict(queries[q]);
      CHECK(std::abs(got.mean - ref.mean) <= 1e-8);
      CHECK(std::abs(got.variance - std::max(0.0, ref.variance)) <= 1e-8);
      CHECK(std::abs(batched[q].mean - got.mean) <= 1e-9);
      CHECK(std::abs(batched[q].variance - got.variance) <= 1e-9);
    }
  }
}

TEST_CASE("scalar and vector dispatch give the same posterior") {
  Rng rng = make_rng(32);
  const auto xs = random_inputs(rng, 40, 7);
  const auto ys = random_outputs(rng, 40);
  const auto queries = random_inputs(rng, 50, 7);
  const auto p = KernelParams::isotropic(7, 0.5, 1.0, 1e-4);
  const simd::Level before = simd::active_level();
  simd::set_level(simd::Level::kScalar);
  const auto ref = GpSurrogate::fit(xs, ys, p).predict(queries);
  simd::set_level(simd::detected_level());
  const auto got = GpSurrogate::fit(xs, ys, p).predict(queries);
  simd::set_level(before);
  for (std::size_t i = 0; i < queries.size(); ++i) {
    CHECK(std::abs(got[i].mean - ref[i].mean) <= 1e-10);
    CHECK(std::abs(got[i].variance - ref[i].variance) <= 1e-10);
  }
}

TEST_CASE("property: near-noiseless posterior interpolates training data") {
  Rng rng = make_rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    const auto xs = random_inputs(rng, 50, 3);
    const auto ys = random_outputs(rng, 50);
    const auto gp = GpSurrogate::fit(xs, ys, KernelParams::isotropic(3, 0.3, 1.0, 1e-10));
    for (std::size_t i = 0; i < xs.size(); ++i) {
      CHECK(std::abs(gp.predict(xs[i]).mean - ys[i]) <= 1e-4);
    }
  }
}

TEST_CASE("property: variance is bounded and shrinks with more data") {
  Rng rng = make_rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    const auto xs = random_inputs(rng, 15, 4);
    const auto ys = random_outputs(rng, 15);
    const auto queries = random_inputs(rng, 25, 4);
    const auto p = KernelParams::isotropic(4, 0.4, 2.0, 1e-3);
    std::vector<double> prev(queries.size(), p.signal_variance + p.noise_variance);
    for (std::size_t n = 1; n <= xs.size(); ++n) {
      const auto gp = GpSurrogate::fit({xs.begin(), xs.begin() + static_cast<long>(n)},
                                       {ys.begin(), ys.begin() + static_cast<long>(n)}, p);
      for (std::size_t q = 0; q < queries.size(); ++q) {
        const double v = gp.predict(queries[q]).variance;
        CHECK(v >= 0.0);
        CHECK(v <= p.signal_variance + p.noise_variance);
        CHECK(v <= prev[q] + 1e-9);
        prev[q] = v;
      }
    }
  }
}

TEST_CASE("property: standardised predictions are affine equivariant") {
  Rng rng = make_rng(35);
  for (int trial = 0; trial < 20; ++trial) {
    const auto xs = random_inputs(rng, 12, 3);
    const auto ys = random_outputs(rng, 12);
    const double a = 0.1 + 10.0 * uniform01(rng);
    const double b = -50.0 + 100.0 * uniform01(rng);
    std::vector<double> zs(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) zs[i] = a * ys[i] + b;
    const auto p = KernelParams::isotropic(3, 0.3, 1.0, 1e-4);
    const auto g1 = StandardizedGp::fit(xs, ys, p);
    const auto g2 = StandardizedGp::fit(xs, zs, p);
    for (const auto& q : random_inputs(rng, 10, 3)) {
      const Prediction p1 = g1.predict(q);
      const Prediction p2 = g2.predict(q);
      CHECK(std::abs(p2.mean - (a * p1.mean + b)) <= 1e-10 * std::max(1.0, std::abs(p2.mean)));
      CHECK(std::abs(p2.variance - a * a * p1.variance) <= 1e-10 * std::max(1.0, p2.variance));
    }
  }
}

TEST_CASE("hyperparameter selection") {
  SUBCASE("defaults with fewer than three observations") {
    const auto k = select_hyperparameters({{0.1, 0.2}, {0.3, 0.4}}, std::vector<double>{1.0, 2.0});
    CHECK(k == default_kernel_params(2));
    CHECK(k.length_scales == std::vector<double>{0.2, 0.2});
    CHECK(k.signal_variance == 1.0);
    CHECK(k.noise_variance == 1e-4);
  }
  SUBCASE("constant outputs are handled deterministically") {
    const std::vector<std::vector<double>> xs{{0.1}, {0.5}, {0.9}, {0.3}};
    const std::vector<double> ys(4, 3.0);
    const auto k1 = select_hyperparameters(xs, ys);
    const auto k2 = select_hyperparameters(xs, ys);
    CHECK(k1 == k2);
  }
  SUBCASE("length-scale is recovered from SE draws") {
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng rng = make_rng(seed, 36);
      const auto xs = random_inputs(rng, 40, 2);
      const auto ys = se_draw(rng, xs, 0.2);
      const double ls = select_hyperparameters(xs, ys).length_scales[0];
      hits += (ls == 0.1 || ls == 0.2 || ls == 0.5) ? 1 : 0;
    }
    CHECK(hits >= 16);
  }
}

TEST_CASE("augmented surrogate collapses variance at added points") {
  Rng rng = make_rng(37);
  const auto xs = random_inputs(rng, 8, 3);
  const auto ys = random_outputs(rng, 8);
  const auto p = KernelParams::isotropic(3, 0.3, 1.0, 1e-6);
  const auto gp = GpSurrogate::fit(xs, ys, p);
  const auto extra = random_inputs(rng, 5, 3);
  const auto aug = gp.augmented(extra);
  CHECK(aug.size() == 13);
  for (const auto& x : extra) CHECK(aug.predict(x).variance <= p.noise_variance + 1e-9);
}
