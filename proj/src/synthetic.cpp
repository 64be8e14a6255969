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

#include "edl/synthetic.hpp"

#include <cmath>

#include <fmt/format.h>

#include "edl/errors.hpp"
#include "edl/random.hpp"

namespace edl {
namespace {

constexpr std::uint64_t kIdStream = 1;
constexpr std::uint64_t kOodStream = 2;
constexpr std::uint64_t kToyStream = 3;

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

}  // namespace

void PopulationParams::validate() const {
  if (n_id == 0 || n_ood == 0) {
    throw ValidationError("population counts must be > 0");
  }
  if (k < 2) throw ValidationError("population K must be >= 2");
  if (!positive_finite(id_correct_shape) || !positive_finite(id_wrong_shape) ||
      !positive_finite(ood_shape)) {
    throw ValidationError("Gamma shapes must be finite and > 0");
  }
  if (!positive_finite(scale)) throw ValidationError("scale must be > 0");
}

std::vector<std::string> default_class_names(std::size_t k) {
  std::vector<std::string> names;
  names.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    names.push_back(k <= 26 ? std::string(1, static_cast<char>('A' + i))
                            : fmt::format("C{}", i + 1));
  }
  return names;
}

Population generate_evidence_population(const PopulationParams& params) {
  params.validate();
  const std::vector<std::string> names = default_class_names(params.k);
  Population population;

  Rng id_rng(params.seed, kIdStream);
  population.id_records.reserve(params.n_id);
  for (std::size_t r = 0; r < params.n_id; ++r) {
    EvidenceRecord record;
    record.id = fmt::format("id-{:05d}", r);
    record.group = Group::kId;
    record.class_names = names;
    const std::size_t correct = id_rng.uniform_index(params.k);
    record.gold_label = correct;
    record.evidence.resize(params.k);
    for (std::size_t i = 0; i < params.k; ++i) {
      const double shape =
          i == correct ? params.id_correct_shape : params.id_wrong_shape;
      record.evidence[i] = id_rng.gamma(shape, params.scale);
    }
    population.id_records.push_back(std::move(record));
  }

  Rng ood_rng(params.seed, kOodStream);
  population.ood_records.reserve(params.n_ood);
  for (std::size_t r = 0; r < params.n_ood; ++r) {
    EvidenceRecord record;
    record.id = fmt::format("ood-{:05d}", r);
    record.group = Group::kOod;
    record.class_names = names;
    record.evidence.resize(params.k);
    for (double& e : record.evidence) {
      e = ood_rng.gamma(params.ood_shape, params.scale);
    }
    population.ood_records.push_back(std::move(record));
  }
  return population;
}

std::vector<LabeledPoint> generate_toy_classification(std::size_t n_per_class,
                                                      double separation,
                                                      std::uint64_t seed) {
  if (n_per_class < 1) throw ValidationError("n_per_class must be >= 1");
  if (!positive_finite(separation)) {
    throw ValidationError("separation must be > 0");
  }
  Rng rng(seed, kToyStream);
  std::vector<LabeledPoint> points;
  points.reserve(2 * n_per_class);
  for (std::size_t i = 0; i < n_per_class; ++i) {
    for (std::size_t label = 0; label < 2; ++label) {
      const double centre = label == 0 ? -separation / 2.0 : separation / 2.0;
      LabeledPoint p;
      p.x = {centre + rng.normal(), rng.normal()};
      p.label = label;
      points.push_back(p);
    }
  }
  return points;
}

}  // namespace edl
