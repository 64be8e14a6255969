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

// Seeded generators for desk-scale experiments.

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "edl/dirichlet.hpp"

namespace edl {

// Gamma-distributed evidence populations. ID records put a high-shape draw on
// their (randomly chosen, labelled) correct class and low-shape draws
// elsewhere; OOD records draw every class from the same moderate shape.
struct PopulationParams {
  std::size_t n_id = 500;
  std::size_t n_ood = 500;
  std::size_t k = 4;
  double id_correct_shape = 20.0;
  double id_wrong_shape = 0.5;
  double ood_shape = 2.0;
  double scale = 1.0;
  std::uint64_t seed = 42;

  void validate() const;
};

struct Population {
  std::vector<EvidenceRecord> id_records;
  std::vector<EvidenceRecord> ood_records;
};

// Class names "A", "B", ... for K <= 26, otherwise "C1", "C2", ...
std::vector<std::string> default_class_names(std::size_t k);

// Stream 1 feeds the ID records, stream 2 the OOD records.
Population generate_evidence_population(const PopulationParams& params);

struct LabeledPoint {
  std::array<double, 2> x{};
  std::size_t label = 0;
};

// Two unit-variance Gaussian blobs centred at (-separation/2, 0) (label 0)
// and (+separation/2, 0) (label 1), interleaved, from stream 3.
std::vector<LabeledPoint> generate_toy_classification(std::size_t n_per_class,
                                                      double separation,
                                                      std::uint64_t seed);

}  // namespace edl
