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

#include <algorithm>
#include <limits>

#include "edl/simd/kernels.hpp"

namespace edl::simd::detail {

void strength_and_max_scalar(const double* evidence, std::size_t rows,
                             std::size_t k, double* strength,
                             double* max_alpha) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = evidence + r * k;
    double sum = 0.0;
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < k; ++j) {
      const double alpha = row[j] + 1.0;
      sum += alpha;
      top = std::max(top, alpha);
    }
    strength[r] = sum;
    max_alpha[r] = top;
  }
}

}  // namespace edl::simd::detail
