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

// Portable seeded random numbers.
//
// Engine: std::mt19937_64, whose output sequence is fixed by the C++
// standard. Each (seed, stream) pair gets its own engine, seeded with
// splitmix64(seed + stream * 0x9E3779B97F4A7C15). Distributions are written
// out here rather than taken from <random>, whose distribution algorithms are
// implementation-defined.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>

namespace edl {

// One SplitMix64 step; advances `state`.
std::uint64_t splitmix64(std::uint64_t& state);

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return engine_(); }

  // 53-bit uniform on [0, 1).
  double uniform();

  // Uniform on (0, 1).
  double uniform_open();

  // Unbiased integer in [0, n).
  std::size_t uniform_index(std::size_t n);

  // Standard normal, Box-Muller; the second variate of each pair is cached.
  double normal();

  // Gamma(shape, scale) by Marsaglia-Tsang, boosted for shape < 1.
  double gamma(double shape, double scale = 1.0);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

}  // namespace edl
