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

#include <atomic>
#include <cstdlib>
#include <string>

#include "bfosp/simd.hpp"

namespace bfosp::simd {

namespace {

Level probe() {
#if defined(BFOSP_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return Level::kAvx2;
  }
#endif
  return Level::kScalar;
}

Level initial_level() {
  const Level best = probe();
  if (const char* env = std::getenv("BFOSP_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return Level::kScalar;
  }
  return best;
}

std::atomic<Level>& current() {
  static std::atomic<Level> level{initial_level()};
  return level;
}

}  // namespace

std::string_view to_string(Level level) {
  switch (level) {
    case Level::kScalar:
      return "scalar";
    case Level::kAvx2:
      return "avx2";
  }
  return "unknown";
}

Level detected_level() {
  static const Level level = probe();
  return level;
}

Level active_level() { return current().load(std::memory_order_relaxed); }

void set_level(Level level) {
  if (static_cast<int>(level) > static_cast<int>(detected_level())) {
    level = detected_level();
  }
  current().store(level, std::memory_order_relaxed);
}

void scaled_sq_distances(std::span<const double> query, const double* cols,
                         std::size_t stride, std::span<const double> inv_scale,
                         std::span<double> out) {
#if defined(BFOSP_HAVE_AVX2)
  if (active_level() == Level::kAvx2) {
    avx2::scaled_sq_distances(query, cols, stride, inv_scale, out);
    return;
  }
#endif
  scalar::scaled_sq_distances(query, cols, stride, inv_scale, out);
}

void bernstein_eval(std::span<const double> coeffs, std::span<const double> ts,
                    std::span<double> out) {
#if defined(BFOSP_HAVE_AVX2)
  if (active_level() == Level::kAvx2) {
    avx2::bernstein_eval(coeffs, ts, out);
    return;
  }
#endif
  scalar::bernstein_eval(coeffs, ts, out);
}

double dot(std::span<const double> a, std::span<const double> b) {
#if defined(BFOSP_HAVE_AVX2)
  if (active_level() == Level::kAvx2) return avx2::dot(a, b);
#endif
  return scalar::dot(a, b);
}

}  // namespace bfosp::simd
