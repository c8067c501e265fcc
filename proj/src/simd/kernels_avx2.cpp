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

// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include "bfosp/simd.hpp"

#include <immintrin.h>

#include <vector>

namespace bfosp::simd::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void scaled_sq_distances(std::span<const double> query, const double* cols,
                         std::size_t stride, std::span<const double> inv_scale,
                         std::span<double> out) {
  const std::size_t n = out.size();
  const std::size_t dims = query.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t d = 0; d < dims; ++d) {
      const __m256d q = _mm256_set1_pd(query[d]);
      const __m256d s = _mm256_set1_pd(inv_scale[d]);
      const __m256d x = _mm256_loadu_pd(cols + d * stride + i);
      const __m256d diff = _mm256_mul_pd(_mm256_sub_pd(q, x), s);
      acc = _mm256_fmadd_pd(diff, diff, acc);
    }
    _mm256_storeu_pd(out.data() + i, acc);
  }
  for (; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t d = 0; d < dims; ++d) {
      const double diff = (query[d] - cols[d * stride + i]) * inv_scale[d];
      acc += diff * diff;
    }
    out[i] = acc;
  }
}

void bernstein_eval(std::span<const double> coeffs, std::span<const double> ts,
                    std::span<double> out) {
  const std::size_t m = coeffs.size();
  if (m == 0) {
    for (double& v : out) v = 0.0;
    return;
  }
  // Lane-major scratch: four doubles per coefficient.
  std::vector<double> work(4 * m);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t k = 0;
  for (; k + 4 <= ts.size(); k += 4) {
    const __m256d t = _mm256_loadu_pd(ts.data() + k);
    const __m256d u = _mm256_sub_pd(one, t);
    for (std::size_t j = 0; j < m; ++j) _mm256_storeu_pd(&work[4 * j], _mm256_set1_pd(coeffs[j]));
    for (std::size_t r = 1; r < m; ++r) {
      __m256d left = _mm256_loadu_pd(&work[0]);
      for (std::size_t j = 0; j + r < m; ++j) {
        const __m256d right = _mm256_loadu_pd(&work[4 * (j + 1)]);
        _mm256_storeu_pd(&work[4 * j], _mm256_fmadd_pd(u, left, _mm256_mul_pd(t, right)));
        left = right;
      }
    }
    _mm256_storeu_pd(out.data() + k, _mm256_loadu_pd(&work[0]));
  }
  if (k < ts.size()) {
    scalar::bernstein_eval(coeffs, ts.subspan(k), out.subspan(k));
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i),
                          _mm256_loadu_pd(b.data() + i), acc);
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i] * b[i];
  return hsum(acc) + tail;
}

}  // namespace bfosp::simd::avx2
