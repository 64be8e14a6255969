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

#include <cstdlib>
#include <string_view>

#include <fmt/format.h>

#include "edl/errors.hpp"
#include "edl/simd/kernels.hpp"

namespace edl::simd {
namespace {

constexpr KernelTable kScalarTable{Isa::kScalar,
                                   &detail::strength_and_max_scalar};
#if defined(EDL_HAVE_AVX2_KERNELS)
constexpr KernelTable kAvx2Table{Isa::kAvx2, &detail::strength_and_max_avx2};
#endif
#if defined(EDL_HAVE_NEON_KERNELS)
constexpr KernelTable kNeonTable{Isa::kNeon, &detail::strength_and_max_neon};
#endif

const KernelTable& select_best() {
  if (const char* forced = std::getenv("EDL_SIMD");
      forced != nullptr && std::string_view(forced) == "scalar") {
    return kScalarTable;
  }
#if defined(EDL_HAVE_AVX2_KERNELS)
  if (isa_supported(Isa::kAvx2)) return kAvx2Table;
#endif
#if defined(EDL_HAVE_NEON_KERNELS)
  return kNeonTable;
#else
  return kScalarTable;
#endif
}

}  // namespace

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(EDL_HAVE_AVX2_KERNELS)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(EDL_HAVE_NEON_KERNELS)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels(Isa isa) {
  if (!isa_supported(isa)) {
    throw ValidationError(
        fmt::format("SIMD variant '{}' is not available", isa_name(isa)));
  }
  switch (isa) {
#if defined(EDL_HAVE_AVX2_KERNELS)
    case Isa::kAvx2:
      return kAvx2Table;
#endif
#if defined(EDL_HAVE_NEON_KERNELS)
    case Isa::kNeon:
      return kNeonTable;
#endif
    default:
      return kScalarTable;
  }
}

const KernelTable& active_kernels() {
  static const KernelTable& table = select_best();
  return table;
}

void strength_and_max(std::span<const double> evidence, std::size_t k,
                      std::span<double> strength, std::span<double> max_alpha,
                      const KernelTable& table) {
  if (k == 0 || evidence.size() % k != 0) {
    throw ValidationError(fmt::format(
        "evidence matrix of {} values is not a multiple of K={}",
        evidence.size(), k));
  }
  const std::size_t rows = evidence.size() / k;
  if (strength.size() != rows || max_alpha.size() != rows) {
    throw ValidationError("output spans must have one slot per row");
  }
  table.strength_and_max(evidence.data(), rows, k, strength.data(),
                         max_alpha.data());
}

}  // namespace edl::simd
