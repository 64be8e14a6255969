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

#pragma once

// Batch Dirichlet kernels over a row-major evidence matrix (rows x k).
//
// Every variant maps one record to one SIMD lane and accumulates the strength
// left to right, exactly like dirichlet_strength(). The variants therefore
// produce bit-identical results, which the expansion experiments rely on.

#include <cstddef>
#include <span>

namespace edl::simd {

enum class Isa { kScalar, kAvx2, kNeon };

const char* isa_name(Isa isa);

// strength[r] = sum_j (evidence[r*k + j] + 1); max_alpha[r] = max_j (...)
using StrengthMaxKernel = void (*)(const double* evidence, std::size_t rows,
                                   std::size_t k, double* strength,
                                   double* max_alpha);

struct KernelTable {
  Isa isa;
  StrengthMaxKernel strength_and_max;
};

// True when the variant was compiled in and the CPU can run it.
bool isa_supported(Isa isa);

// Throws ValidationError for an unsupported variant.
const KernelTable& kernels(Isa isa);

// Best supported variant. Setting EDL_SIMD=scalar in the environment forces
// the scalar path.
const KernelTable& active_kernels();

void strength_and_max(std::span<const double> evidence, std::size_t k,
                      std::span<double> strength, std::span<double> max_alpha,
                      const KernelTable& table = active_kernels());

namespace detail {
void strength_and_max_scalar(const double* evidence, std::size_t rows,
                             std::size_t k, double* strength,
                             double* max_alpha);
void strength_and_max_avx2(const double* evidence, std::size_t rows,
                           std::size_t k, double* strength, double* max_alpha);
void strength_and_max_neon(const double* evidence, std::size_t rows,
                           std::size_t k, double* strength, double* max_alpha);
}  // namespace detail
}  // namespace edl::simd
