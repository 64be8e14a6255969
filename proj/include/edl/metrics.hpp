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

// Detection and calibration metrics.
//
// Detection convention: label 1 is the positive class and higher scores mean
// "more positive". With the default ID-positive orientation the positives are
// in-distribution records scored by 1/vacuity or max probability.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace edl {

struct ScoredSample {
  double score = 0.0;
  int label = 0;  // 1 = positive, 0 = negative
};

struct DetectionResult {
  double auroc = 0.0;
  double aupr = 0.0;
  double aupr_baseline = 0.0;
  // AUPR with the roles of the two groups swapped (scores negated).
  double aupr_opposite = 0.0;
  std::size_t n_positive = 0;
  std::size_t n_negative = 0;
  std::string metric_name;
  std::string orientation;
  std::size_t k_id = 0;
  std::size_t k_ood = 0;
};

// Probability that a random positive outranks a random negative, ties worth
// one half. Midrank rank-sum, O(n log n).
double auroc(std::span<const ScoredSample> samples);

// Step-wise average precision, sum_k (R_k - R_{k-1}) P_k over descending
// thresholds. Samples with equal score form a single threshold.
double aupr(std::span<const ScoredSample> samples);

// Positive prevalence: the AUPR of a random ranking in expectation.
double aupr_baseline(std::size_t n_positive, std::size_t n_negative);

DetectionResult evaluate_detection(std::span<const ScoredSample> samples,
                                   std::string metric_name,
                                   std::string orientation, std::size_t k_id,
                                   std::size_t k_ood);

constexpr int kDefaultEceBins = 15;

// Expected calibration error over equal-width, right-closed bins
// (b/B, (b+1)/B]; a confidence of exactly 0 goes to the first bin.
double ece(std::span<const double> confidences, std::span<const int> correct,
           int bins = kDefaultEceBins);

constexpr double kNllProbabilityFloor = 1e-12;

// Mean of -log p[gold] with p floored at kNllProbabilityFloor.
double nll(std::span<const std::vector<double>> probabilities,
           std::span<const std::size_t> gold_labels);

double accuracy(std::span<const std::size_t> predictions,
                std::span<const std::size_t> gold_labels);

std::size_t argmax(std::span<const double> values);

// Slow, obviously-correct implementations used to cross-check the fast paths.
namespace reference {

// O(n^2) pairwise comparison with half credit for ties.
double auroc_bruteforce(std::span<const ScoredSample> samples);

// Explicit sweep: for each distinct threshold, recount TP/FP over all samples.
double aupr_reference(std::span<const ScoredSample> samples);

}  // namespace reference
}  // namespace edl
