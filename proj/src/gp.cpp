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

#include "bfosp/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bfosp/error.hpp"
#include "bfosp/simd.hpp"

namespace bfosp {

std::vector<double> InputSpace::features(const DesignPoint& x) const {
  if (x.aux.size() != aux_bounds.size()) {
    throw ConfigError("design point has " + std::to_string(x.aux.size()) +
                      " aux values, space expects " + std::to_string(aux_bounds.size()));
  }
  std::vector<double> f(x.alpha);
  f.reserve(x.alpha.size() + x.aux.size());
  for (std::size_t i = 0; i < x.aux.size(); ++i) {
    const Bounds& b = aux_bounds[i];
    f.push_back((x.aux[i] - b.lo) / (b.hi - b.lo));
  }
  return f;
}

DesignPoint InputSpace::point(std::span<const double> features, std::size_t alpha_size) const {
  if (features.size() != alpha_size + aux_bounds.size()) {
    throw ConfigError("feature vector length does not match the input space");
  }
  DesignPoint x;
  x.alpha.assign(features.begin(), features.begin() + static_cast<std::ptrdiff_t>(alpha_size));
  for (std::size_t i = 0; i < aux_bounds.size(); ++i) {
    const Bounds& b = aux_bounds[i];
    x.aux.push_back(b.lo + (b.hi - b.lo) * features[alpha_size + i]);
  }
  return x;
}

KernelParams KernelParams::isotropic(std::size_t dim, double length_scale,
                                     double signal_variance, double noise_variance) {
  return {signal_variance, std::vector<double>(dim, length_scale), noise_variance};
}

double kernel_eval(std::span<const double> a, std::span<const double> b,
                   const KernelParams& params) {
  if (a.size() != b.size() || a.size() != params.length_scales.size()) {
    throw ConfigError("kernel inputs have mismatched dimensions");
  }
  double r2 = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double z = (a[d] - b[d]) / params.length_scales[d];
    r2 += z * z;
  }
  return params.signal_variance * std::exp(-0.5 * r2);
}

GpSurrogate GpSurrogate::fit(std::vector<std::vector<double>> inputs,
                             std::vector<double> outputs, KernelParams params) {
  if (inputs.empty()) throw ConfigError("GP fit needs at least one observation");
  if (inputs.size() != outputs.size()) throw ConfigError("GP inputs/outputs length mismatch");
  const std::size_t dim = inputs.front().size();
  for (const auto& x : inputs) {
    if (x.size() != dim) throw ConfigError("GP inputs have mixed dimensions");
  }
  if (params.length_scales.size() != dim) {
    throw ConfigError("kernel has " + std::to_string(params.length_scales.size()) +
                      " length-scales for " + std::to_string(dim) + " inputs");
  }
  for (double y : outputs) {
    if (!std::isfinite(y)) throw ConfigError("GP output is not finite");
  }

  GpSurrogate gp;
  const std::size_t n = inputs.size();
  gp.dim_ = dim;
  gp.params_ = std::move(params);
  gp.inputs_ = std::move(inputs);
  gp.outputs_ = std::move(outputs);
  gp.cols_.resize(dim * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < dim; ++d) gp.cols_[d * n + i] = gp.inputs_[i][d];
  }
  gp.inv_scale_.resize(dim);
  for (std::size_t d = 0; d < dim; ++d) gp.inv_scale_[d] = 1.0 / gp.params_.length_scales[d];

  Eigen::MatrixXd k(n, n);
  std::vector<double> r2(n);
  for (std::size_t i = 0; i < n; ++i) {
    simd::scaled_sq_distances(gp.inputs_[i], gp.cols_.data(), n, gp.inv_scale_, r2);
    for (std::size_t j = 0; j < n; ++j) {
      k(i, j) = gp.params_.signal_variance * std::exp(-0.5 * r2[j]);
    }
  }
  // Exact symmetry regardless of the kernel path's rounding.
  k = (0.5 * (k + k.transpose())).eval();
  k.diagonal().array() += gp.params_.noise_variance;

  double jitter = 0.0;
  for (int attempt = 0; attempt <= kMaxJitterDoublings + 1; ++attempt) {
    Eigen::MatrixXd kj = k;
    kj.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(kj);
    bool ok = llt.info() == Eigen::Success;
    if (ok) {
      const auto diag = llt.matrixL().toDenseMatrix().diagonal();
      ok = diag.allFinite() && (diag.array() > 0.0).all();
    }
    if (ok) {
      gp.chol_ = llt.matrixL();
      gp.jitter_ = jitter;
      const Eigen::Map<const Eigen::VectorXd> y(gp.outputs_.data(),
                                                static_cast<Eigen::Index>(n));
      gp.weights_ = llt.solve(y);
      return gp;
    }
    jitter = attempt == 0 ? kInitialJitter : jitter * 2.0;
  }
  throw NumericalError("Cholesky factorisation failed after maximum jitter " +
                       std::to_string(jitter / 2.0));
}

GpSurrogate GpSurrogate::fit(std::span<const Observation> data, const InputSpace& space,
                             KernelParams params) {
  std::vector<std::vector<double>> inputs;
  std::vector<double> outputs;
  inputs.reserve(data.size());
  outputs.reserve(data.size());
  for (const auto& obs : data) {
    inputs.push_back(space.features(obs.point));
    outputs.push_back(obs.value);
  }
  return fit(std::move(inputs), std::move(outputs), std::move(params));
}

void GpSurrogate::check_dim(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw ConfigError("prediction input has " + std::to_string(x.size()) +
                      " dimensions, surrogate expects " + std::to_string(dim_));
  }
}

Prediction GpSurrogate::finish(double mean, double quad) const {
  const double upper = params_.signal_variance + params_.noise_variance;
  const double var = std::clamp(params_.signal_variance - quad, 0.0, upper);
  return {mean, var};
}

Prediction GpSurrogate::predict(std::span<const double> x) const {
  check_dim(x);
  const std::size_t n = size();
  std::vector<double> kx(n);
  simd::scaled_sq_distances(x, cols_.data(), n, inv_scale_, kx);
  for (double& v : kx) v = params_.signal_variance * std::exp(-0.5 * v);
  const double mean = simd::dot(kx, std::span<const double>(weights_.data(), n));
  Eigen::Map<Eigen::VectorXd> kv(kx.data(), static_cast<Eigen::Index>(n));
  chol_.triangularView<Eigen::Lower>().solveInPlace(kv);
  return finish(mean, kv.squaredNorm());
}

std::vector<Prediction> GpSurrogate::predict(const std::vector<std::vector<double>>& xs) const {
  const std::size_t m = xs.size();
  const std::size_t n = size();
  if (m == 0) return {};
  std::vector<double> cand_cols(dim_ * m);
  for (std::size_t j = 0; j < m; ++j) {
    check_dim(xs[j]);
    for (std::size_t d = 0; d < dim_; ++d) cand_cols[d * m + j] = xs[j][d];
  }
  Eigen::MatrixXd kstar(n, m);
  std::vector<double> row(m);
  for (std::size_t i = 0; i < n; ++i) {
    simd::scaled_sq_distances(inputs_[i], cand_cols.data(), m, inv_scale_, row);
    for (std::size_t j = 0; j < m; ++j) {
      kstar(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          params_.signal_variance * std::exp(-0.5 * row[j]);
    }
  }
  const Eigen::VectorXd means = kstar.transpose() * weights_;
  chol_.triangularView<Eigen::Lower>().solveInPlace(kstar);
  const Eigen::VectorXd quad = kstar.colwise().squaredNorm().transpose();
  std::vector<Prediction> out(m);
  for (std::size_t j = 0; j < m; ++j) {
    out[j] = finish(means(static_cast<Eigen::Index>(j)), quad(static_cast<Eigen::Index>(j)));
  }
  return out;
}

double GpSurrogate::log_marginal_likelihood() const {
  const auto n = static_cast<Eigen::Index>(size());
  const Eigen::Map<const Eigen::VectorXd> y(outputs_.data(), n);
  const double fit_term = -0.5 * y.dot(weights_);
  const double log_det = chol_.diagonal().array().log().sum();
  return fit_term - log_det - 0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
}

GpSurrogate GpSurrogate::augmented(std::span<const std::vector<double>> extra) const {
  auto inputs = inputs_;
  inputs.insert(inputs.end(), extra.begin(), extra.end());
  std::vector<double> outputs(inputs.size(), 0.0);
  return fit(std::move(inputs), std::move(outputs), params_);
}

OutputScaler OutputScaler::from(std::span<const double> y) {
  OutputScaler s;
  if (y.empty()) return s;
  double sum = 0.0;
  for (double v : y) sum += v;
  s.mean = sum / static_cast<double>(y.size());
  double ss = 0.0;
  for (double v : y) ss += (v - s.mean) * (v - s.mean);
  const double sd = std::sqrt(ss / static_cast<double>(y.size()));
  s.scale = sd > 1e-12 * std::max(1.0, std::abs(s.mean)) ? sd : 1.0;
  return s;
}

StandardizedGp StandardizedGp::fit(std::vector<std::vector<double>> inputs,
                                   std::span<const double> outputs, KernelParams params) {
  const OutputScaler scaler = OutputScaler::from(outputs);
  std::vector<double> z(outputs.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = scaler.forward(outputs[i]);
  return StandardizedGp(GpSurrogate::fit(std::move(inputs), std::move(z), std::move(params)),
                        scaler);
}

Prediction StandardizedGp::predict(std::span<const double> x) const {
  const Prediction p = gp_.predict(x);
  return {scaler_.inverse(p.mean), p.variance * scaler_.scale * scaler_.scale};
}

KernelParams default_kernel_params(std::size_t dim) {
  return KernelParams::isotropic(dim, HyperGrid::kDefaultLengthScale,
                                 HyperGrid::kDefaultSignalVariance,
                                 HyperGrid::kDefaultNoiseVariance);
}

KernelParams select_hyperparameters(const std::vector<std::vector<double>>& inputs,
                                    std::span<const double> outputs) {
  const std::size_t dim = inputs.empty() ? 0 : inputs.front().size();
  if (inputs.size() < 3) return default_kernel_params(dim);

  const OutputScaler scaler = OutputScaler::from(outputs);
  std::vector<double> z(outputs.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = scaler.forward(outputs[i]);

  KernelParams best = default_kernel_params(dim);
  double best_lml = -std::numeric_limits<double>::infinity();
  for (double ls : HyperGrid::kLengthScales) {
    for (double sf2 : HyperGrid::kSignalVariances) {
      for (double sn2 : HyperGrid::kNoiseVariances) {
        KernelParams candidate = KernelParams::isotropic(dim, ls, sf2, sn2);
        try {
          const double lml = GpSurrogate::fit(inputs, z, candidate).log_marginal_likelihood();
          if (std::isfinite(lml) && lml > best_lml) {
            best_lml = lml;
            best = std::move(candidate);
          }
        } catch (const NumericalError&) {
          // Skip grid points whose kernel matrix cannot be factorised.
        }
      }
    }
  }
  return best;
}

}  // namespace bfosp
