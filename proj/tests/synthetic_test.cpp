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
#include <cstring>

#include <gtest/gtest.h>

#include "edl/errors.hpp"
#include "edl/random.hpp"

namespace edl {
namespace {

struct MeanVacuity {
  double mean = 0.0;
  double std_error = 0.0;
};

MeanVacuity mean_vacuity(const std::vector<EvidenceRecord>& records) {
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const EvidenceRecord& r : records) {
    const double u = vacuity(evidence_to_alpha(r));
    sum += u;
    sum_sq += u * u;
  }
  const double n = static_cast<double>(records.size());
  const double mean = sum / n;
  return {mean, std::sqrt((sum_sq / n - mean * mean) / (n - 1.0))};
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

TEST(Rng, SplitMixReferenceValues) {
  std::uint64_t state = 0;
  EXPECT_EQ(splitmix64(state), 0xE220A8397B1DCDAFull);
  EXPECT_EQ(splitmix64(state), 0x6E789E6AA1B965F4ull);
}

TEST(Rng, EngineIsStandardMersenneTwister) {
  std::mt19937_64 engine;
  engine.discard(9999);
  EXPECT_EQ(engine(), 9981545732273789042ull);
}

TEST(Rng, StreamsDiffer) {
  Rng a(42, 1);
  Rng b(42, 2);
  Rng c(42, 1);
  const auto first = a.next_u64();
  EXPECT_NE(first, b.next_u64());
  EXPECT_EQ(first, c.next_u64());
}

TEST(Rng, DistributionMoments) {
  Rng rng(5, 0);
  const int n = 200000;
  double u_sum = 0.0;
  double z_sum = 0.0;
  double z_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    u_sum += u;
    const double z = rng.normal();
    z_sum += z;
    z_sq += z * z;
  }
  EXPECT_NEAR(u_sum / n, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(z_sum / n, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(z_sq / n, 1.0, 5.0 * std::sqrt(2.0 / n));

  for (double shape : {0.3, 0.5, 1.0, 2.0, 20.0}) {
    double g_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double g = rng.gamma(shape, 2.0);
      ASSERT_GE(g, 0.0);
      g_sum += g;
    }
    // Gamma(shape, 2) has mean 2 shape and variance 4 shape.
    EXPECT_NEAR(g_sum / n, 2.0 * shape, 5.0 * std::sqrt(4.0 * shape / n))
        << "shape " << shape;
  }
}

TEST(Rng, UniformIndexInRange) {
  Rng rng(6, 0);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[rng.uniform_index(7)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(Population, DeterministicForSeed) {
  const Population a = generate_evidence_population(PopulationParams{});
  const Population b = generate_evidence_population(PopulationParams{});
  ASSERT_EQ(a.id_records.size(), b.id_records.size());
  for (std::size_t i = 0; i < a.id_records.size(); ++i) {
    EXPECT_TRUE(same_bits(a.id_records[i].evidence, b.id_records[i].evidence));
    EXPECT_EQ(a.id_records[i].gold_label, b.id_records[i].gold_label);
  }
  for (std::size_t i = 0; i < a.ood_records.size(); ++i) {
    EXPECT_TRUE(same_bits(a.ood_records[i].evidence, b.ood_records[i].evidence));
  }
}

TEST(Population, CountsAndShape) {
  PopulationParams params;
  params.n_id = 3;
  const Population p = generate_evidence_population(params);
  EXPECT_EQ(p.id_records.size(), 3u);
  EXPECT_EQ(p.ood_records.size(), 500u);
  for (const auto& r : p.id_records) {
    EXPECT_EQ(r.group, Group::kId);
    EXPECT_TRUE(r.gold_label.has_value());
    EXPECT_EQ(r.class_names, (std::vector<std::string>{"A", "B", "C", "D"}));
  }
  for (const auto& r : p.ood_records) {
    EXPECT_EQ(r.group, Group::kOod);
    EXPECT_FALSE(r.gold_label.has_value());
  }
  EXPECT_EQ(p.id_records[0].id, "id-00000");
  EXPECT_EQ(p.ood_records[0].id, "ood-00000");
}

TEST(Population, OodIsMoreVacuousThanId) {
  const Population p = generate_evidence_population(PopulationParams{});
  EXPECT_GT(mean_vacuity(p.ood_records).mean, mean_vacuity(p.id_records).mean);
}

TEST(Population, EvidenceIsNonNegative) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    PopulationParams params;
    params.seed = seed;
    params.id_wrong_shape = 0.05;
    params.ood_shape = 0.1;
    const Population p = generate_evidence_population(params);
    for (const auto* group : {&p.id_records, &p.ood_records}) {
      for (const EvidenceRecord& r : *group) {
        for (double e : r.evidence) {
          EXPECT_GE(e, 0.0);
          EXPECT_TRUE(std::isfinite(e));
        }
      }
    }
  }
}

TEST(Population, SeedChangesSamplesNotMeans) {
  PopulationParams params;
  const Population reference = generate_evidence_population(params);
  const MeanVacuity ref_id = mean_vacuity(reference.id_records);
  const MeanVacuity ref_ood = mean_vacuity(reference.ood_records);
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    params.seed = seed;
    const Population p = generate_evidence_population(params);
    EXPECT_NE(p.ood_records[0].evidence, reference.ood_records[0].evidence);
    const MeanVacuity id = mean_vacuity(p.id_records);
    const MeanVacuity ood = mean_vacuity(p.ood_records);
    EXPECT_LE(std::abs(id.mean - ref_id.mean),
              5.0 * std::hypot(id.std_error, ref_id.std_error));
    EXPECT_LE(std::abs(ood.mean - ref_ood.mean),
              5.0 * std::hypot(ood.std_error, ref_ood.std_error));
  }
}

TEST(Population, RejectsInvalidParams) {
  PopulationParams params;
  params.ood_shape = 0.0;
  EXPECT_THROW(generate_evidence_population(params), ValidationError);
  params = PopulationParams{};
  params.n_ood = 0;
  EXPECT_THROW(generate_evidence_population(params), ValidationError);
  params = PopulationParams{};
  params.k = 1;
  EXPECT_THROW(generate_evidence_population(params), ValidationError);
  params = PopulationParams{};
  params.scale = -1.0;
  EXPECT_THROW(generate_evidence_population(params), ValidationError);
}

TEST(DefaultClassNames, LettersThenNumbers) {
  EXPECT_EQ(default_class_names(3), (std::vector<std::string>{"A", "B", "C"}));
  const auto many = default_class_names(30);
  EXPECT_EQ(many.front(), "C1");
  EXPECT_EQ(many.back(), "C30");
}

TEST(ToyClassification, CountsAndDeterminism) {
  EXPECT_EQ(generate_toy_classification(1, 4.0, 0).size(), 2u);
  const auto a = generate_toy_classification(50, 4.0, 9);
  const auto b = generate_toy_classification(50, 4.0, 9);
  ASSERT_EQ(a.size(), 100u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].x, b[i].x);
    EXPECT_EQ(a[i].label, b[i].label);
  }
}

// Rosenblatt perceptron with bias; converges iff the data are separable.
TEST(ToyClassification, WideSeparationIsLinearlySeparable) {
  const auto data = generate_toy_classification(250, 10.0, 1);
  double w0 = 0.0;
  double w1 = 0.0;
  double b = 0.0;
  bool converged = false;
  for (int epoch = 0; epoch < 1000 && !converged; ++epoch) {
    converged = true;
    for (const LabeledPoint& p : data) {
      const double y = p.label == 1 ? 1.0 : -1.0;
      if (y * (w0 * p.x[0] + w1 * p.x[1] + b) <= 0.0) {
        w0 += y * p.x[0];
        w1 += y * p.x[1];
        b += y;
        converged = false;
      }
    }
  }
  ASSERT_TRUE(converged);
  const double norm = std::hypot(w0, w1);
  double margin = std::numeric_limits<double>::infinity();
  for (const LabeledPoint& p : data) {
    const double y = p.label == 1 ? 1.0 : -1.0;
    margin = std::min(margin, y * (w0 * p.x[0] + w1 * p.x[1] + b) / norm);
  }
  EXPECT_GT(margin, 0.0);
}

}  // namespace
}  // namespace edl
