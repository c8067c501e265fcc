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

// Data-parallel inner loops used by the surrogate and by curve sampling.
//
// Every kernel has a portable scalar reference in bfosp::simd::scalar and an
// AVX2/FMA variant in bfosp::simd::avx2 (x86-64 only). The free functions in
// bfosp::simd dispatch at runtime on the detected CPU level; the level can be
// pinned with set_level() or the BFOSP_SIMD environment variable
// ("scalar" | "avx2"). Variants agree to floating-point round-off, not bitwise.

#include <cstddef>
#include <span>
#include <string_view>

namespace bfosp::simd {

enum class Level { kScalar, kAvx2 };

std::string_view to_string(Level level);

/// Highest level supported by this CPU and this build.
Level detected_level();

/// Level currently used by the dispatching entry points.
Level active_level();

/// Pins the dispatch level. Requests above detected_level() are clamped.
void set_level(Level level);

/// out[i] = sum_d ((query[d] - cols[d * stride + i]) * inv_scale[d])^2 for
/// i in [0, out.size()). `cols` is column-major: one contiguous block of
/// `stride` values per input dimension.
void scaled_sq_distances(std::span<const double> query, const double* cols,
                         std::size_t stride, std::span<const double> inv_scale,
                         std::span<double> out);

/// Evaluates the Bernstein polynomial with the given coefficients at every
/// t in `ts` (de Casteljau, lanes across t).
void bernstein_eval(std::span<const double> coeffs, std::span<const double> ts,
                    std::span<double> out);

/// sum_i a[i] * b[i]
double dot(std::span<const double> a, std::span<const double> b);

namespace scalar {
void scaled_sq_distances(std::span<const double> query, const double* cols,
                         std::size_t stride, std::span<const double> inv_scale,
                         std::span<double> out);
void bernstein_eval(std::span<const double> coeffs, std::span<const double> ts,
                    std::span<double> out);
double dot(std::span<const double> a, std::span<const double> b);
}  // namespace scalar

#if defined(BFOSP_HAVE_AVX2)
namespace avx2 {
void scaled_sq_distances(std::span<const double> query, const double* cols,
                         std::size_t stride, std::span<const double> inv_scale,
                         std::span<double> out);
void bernstein_eval(std::span<const double> coeffs, std::span<const double> ts,
                    std::span<double> out);
double dot(std::span<const double> a, std::span<const double> b);
}  // namespace avx2
#endif

}  // namespace bfosp::simd
