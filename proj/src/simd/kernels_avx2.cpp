/*
 * Copyright 2026 The edl-cardinality Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <immintrin.h>

#include <cstdint>
#include <limits>

#include "edl/simd/kernels.hpp"

namespace edl::simd::detail {

void strength_and_max_avx2(const double* evidence, std::size_t rows,
                           std::size_t k, double* strength,
                           double* max_alpha) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d lowest =
      _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  const auto stride = static_cast<std::int64_t>(k);
  // Lane l reads row r + l.
  const __m256i offsets =
      _mm256_set_epi64x(3 * stride, 2 * stride, stride, 0);

  std::size_t r = 0;
  for (; r + 4 <= rows; r += 4) {
    const double* block = evidence + r * k;
    __m256d sum = _mm256_setzero_pd();
    __m256d top = lowest;
    for (std::size_t j = 0; j < k; ++j) {
      const __m256d e = _mm256_i64gather_pd(block + j, offsets, 8);
      const __m256d alpha = _mm256_add_pd(e, one);
      sum = _mm256_add_pd(sum, alpha);
      top = _mm256_max_pd(top, alpha);
    }
    _mm256_storeu_pd(strength + r, sum);
    _mm256_storeu_pd(max_alpha + r, top);
  }
  if (r < rows) {
    strength_and_max_scalar(evidence + r * k, rows - r, k, strength + r,
                            max_alpha + r);
  }
}

}  // namespace edl::simd::detail
