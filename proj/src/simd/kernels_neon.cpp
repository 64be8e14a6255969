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

#include <arm_neon.h>

#include <limits>

#include "edl/simd/kernels.hpp"

namespace edl::simd::detail {

void strength_and_max_neon(const double* evidence, std::size_t rows,
                           std::size_t k, double* strength,
                           double* max_alpha) {
  const float64x2_t one = vdupq_n_f64(1.0);
  const float64x2_t lowest =
      vdupq_n_f64(-std::numeric_limits<double>::infinity());

  std::size_t r = 0;
  for (; r + 2 <= rows; r += 2) {
    const double* row0 = evidence + r * k;
    const double* row1 = row0 + k;
    float64x2_t sum = vdupq_n_f64(0.0);
    float64x2_t top = lowest;
    for (std::size_t j = 0; j < k; ++j) {
      const float64x2_t e = vcombine_f64(vld1_f64(row0 + j), vld1_f64(row1 + j));
      const float64x2_t alpha = vaddq_f64(e, one);
      sum = vaddq_f64(sum, alpha);
      top = vmaxq_f64(top, alpha);
    }
    vst1q_f64(strength + r, sum);
    vst1q_f64(max_alpha + r, top);
  }
  if (r < rows) {
    strength_and_max_scalar(evidence + r * k, rows - r, k, strength + r,
                            max_alpha + r);
  }
}

}  // namespace edl::simd::detail
