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

#include "bfosp/simd.hpp"

#include <vector>

namespace bfosp::simd::scalar {

void scaled_sq_distances(std::span<const double> query, const double* cols,
                         std::size_t stride, std::span<const double> inv_scale,
                         std::span<double> out) {
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
  for (std::size_t d = 0; d < query.size(); ++d) {
    const double q = query[d];
    const double s = inv_scale[d];
    const double* col = cols + d * stride;
    for (std::size_t i = 0; i < n; ++i) {
      const double diff = (q - col[i]) * s;
      out[i] += diff * diff;
    }
  }
}

void bernstein_eval(std::span<const double> coeffs, std::span<const double> ts,
                    std::span<double> out) {
  const std::size_t m = coeffs.size();
  std::vector<double> work(m);
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double t = ts[k];
    const double u = 1.0 - t;
    for (std::size_t j = 0; j < m; ++j) work[j] = coeffs[j];
    for (std::size_t r = 1; r < m; ++r) {
      for (std::size_t j = 0; j + r < m; ++j) {
        work[j] = u * work[j] + t * work[j + 1];
      }
    }
    out[k] = m == 0 ? 0.0 : work[0];
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace bfosp::simd::scalar
