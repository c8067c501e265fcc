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

// Exact Gaussian-process regression with a squared-exponential kernel and a
// zero prior mean.

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace bfosp {

struct Bounds {
  double lo = 0.0;
  double hi = 1.0;

  friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// BO input x = (alpha, u): Bernstein coefficients plus auxiliary controls in
/// application units.
struct DesignPoint {
  std::vector<double> alpha;
  std::vector<double> aux;

  friend bool operator==(const DesignPoint&, const DesignPoint&) = default;
};

struct Observation {
  DesignPoint point;
  double value = 0.0;
  int batch_id = 0;
  int iteration = 0;

  friend bool operator==(const Observation&, const Observation&) = default;
};

/// Maps design points to unit-box kernel features: alpha unchanged, each aux
/// component normalised by its bounds.
struct InputSpace {
  std::vector<Bounds> aux_bounds;

  std::vector<double> features(const DesignPoint& x) const;
  DesignPoint point(std::span<const double> features, std::size_t alpha_size) const;
};

struct KernelParams {
  double signal_variance = 1.0;
  std::vector<double> length_scales;
  double noise_variance = 1e-4;

  static KernelParams isotropic(std::size_t dim, double length_scale, double signal_variance,
                                double noise_variance);

  friend bool operator==(const KernelParams&, const KernelParams&) = default;
};

/// sf2 * exp(-0.5 * sum_d ((a_d - b_d) / l_d)^2). ConfigError on dimension
/// mismatch.
double kernel_eval(std::span<const double> a, std::span<const double> b,
                   const KernelParams& params);

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;
};

/// Fitted posterior. Immutable after fit(); safe to share between threads.
class GpSurrogate {
 public:
  static constexpr double kInitialJitter = 1e-10;
  static constexpr int kMaxJitterDoublings = 10;

  /// Caches the Cholesky factor of K + noise*I. Diagonal jitter starts at
  /// kInitialJitter and doubles up to kMaxJitterDoublings times before a
  /// NumericalError is raised.
  static GpSurrogate fit(std::vector<std::vector<double>> inputs, std::vector<double> outputs,
                         KernelParams params);

  /// Features come from `space`; outputs are the raw observed values.
  static GpSurrogate fit(std::span<const Observation> data, const InputSpace& space,
                         KernelParams params);

  std::size_t size() const { return outputs_.size(); }
  std::size_t dim() const { return dim_; }
  const KernelParams& params() const { return params_; }
  const std::vector<std::vector<double>>& inputs() const { return inputs_; }
  /// Diagonal jitter that made the factorisation succeed (0 if none).
  double jitter() const { return jitter_; }

  Prediction predict(std::span<const double> x) const;
  /// Batched prediction, vectorised across the candidate set.
  std::vector<Prediction> predict(const std::vector<std::vector<double>>& xs) const;

  double log_marginal_likelihood() const;

  /// Surrogate whose input set also holds `extra`, with placeholder outputs.
  /// Posterior variance does not depend on outputs, so this gives the
  /// exploration variance after hypothetically sampling `extra`.
  GpSurrogate augmented(std::span<const std::vector<double>> extra) const;

 private:
  GpSurrogate() = default;
  void check_dim(std::span<const double> x) const;
  Prediction finish(double mean, double quad) const;

  std::size_t dim_ = 0;
  KernelParams params_;
  std::vector<std::vector<double>> inputs_;
  std::vector<double> outputs_;
  std::vector<double> cols_;  // dim_ blocks of size() values
  std::vector<double> inv_scale_;
  Eigen::MatrixXd chol_;      // lower factor of K + (noise + jitter) I
  Eigen::VectorXd weights_;   // (K + noise I)^{-1} y
  double jitter_ = 0.0;
};

/// Affine output map y -> (y - mean) / scale. A degenerate (constant) sample
/// uses scale 1.
struct OutputScaler {
  double mean = 0.0;
  double scale = 1.0;

  static OutputScaler from(std::span<const double> y);
  double forward(double y) const { return (y - mean) / scale; }
  double inverse(double z) const { return mean + scale * z; }
};

/// GP fitted on standardised outputs; predictions are reported in the
/// original output units.
class StandardizedGp {
 public:
  static StandardizedGp fit(std::vector<std::vector<double>> inputs,
                            std::span<const double> outputs, KernelParams params);

  const GpSurrogate& surrogate() const { return gp_; }
  const OutputScaler& scaler() const { return scaler_; }
  Prediction predict(std::span<const double> x) const;

 private:
  StandardizedGp(GpSurrogate gp, OutputScaler scaler)
      : gp_(std::move(gp)), scaler_(scaler) {}

  GpSurrogate gp_;
  OutputScaler scaler_;
};

/// Candidate grids for select_hyperparameters(). Noise values are relative
/// to the (unit) variance of the standardised outputs.
struct HyperGrid {
  static constexpr double kLengthScales[] = {0.05, 0.1, 0.2, 0.5, 1.0};
  static constexpr double kSignalVariances[] = {0.25, 1.0, 4.0};
  static constexpr double kNoiseVariances[] = {1e-6, 1e-4, 1e-2};
  static constexpr double kDefaultLengthScale = 0.2;
  static constexpr double kDefaultSignalVariance = 1.0;
  static constexpr double kDefaultNoiseVariance = 1e-4;
};

/// Defaults for `dim` inputs: isotropic length-scale 0.2, unit signal variance,
/// noise 1e-4.
KernelParams default_kernel_params(std::size_t dim);

/// Grid search of the log marginal likelihood of the standardised outputs over
/// isotropic length-scale x signal variance x noise. Iteration order is
/// length-scale, then signal, then noise; ties keep the first. Fewer than three
/// observations return the defaults.
KernelParams select_hyperparameters(const std::vector<std::vector<double>>& inputs,
                                    std::span<const double> outputs);

}  // namespace bfosp
