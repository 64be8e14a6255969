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

#include "edl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "edl/errors.hpp"

namespace edl {
namespace {

struct Counts {
  std::size_t positive = 0;
  std::size_t negative = 0;
};

Counts count_labels(std::span<const ScoredSample> samples) {
  Counts counts;
  for (const ScoredSample& s : samples) {
    if (!std::isfinite(s.score)) {
      throw ValidationError("scores must be finite");
    }
    if (s.label == 1) {
      ++counts.positive;
    } else if (s.label == 0) {
      ++counts.negative;
    } else {
      throw ValidationError(fmt::format("label must be 0 or 1, got {}", s.label));
    }
  }
  return counts;
}

std::vector<ScoredSample> sorted_descending(
    std::span<const ScoredSample> samples) {
  std::vector<ScoredSample> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const ScoredSample& a, const ScoredSample& b) {
              return a.score > b.score;
            });
  return sorted;
}

}  // namespace

double auroc(std::span<const ScoredSample> samples) {
  const Counts counts = count_labels(samples);
  if (counts.positive == 0 || counts.negative == 0) {
    throw ValidationError(
        "AUROC needs at least one positive and one negative sample");
  }
  std::vector<ScoredSample> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const ScoredSample& a, const ScoredSample& b) {
              return a.score < b.score;
            });
  // Sum of (1-based) midranks of the positives. Midranks are half-integers, so
  // everything below is exact in double precision for realistic sizes.
  double positive_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    std::size_t positives_in_group = 0;
    while (j < sorted.size() && sorted[j].score == sorted[i].score) {
      positives_in_group += static_cast<std::size_t>(sorted[j].label);
      ++j;
    }
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    positive_rank_sum += midrank * static_cast<double>(positives_in_group);
    i = j;
  }
  const double np = static_cast<double>(counts.positive);
  const double nn = static_cast<double>(counts.negative);
  const double u = positive_rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * nn);
}

double aupr(std::span<const ScoredSample> samples) {
  const Counts counts = count_labels(samples);
  if (counts.positive == 0) {
    throw ValidationError("AUPR needs at least one positive sample");
  }
  const std::vector<ScoredSample> sorted = sorted_descending(samples);
  const double np = static_cast<double>(counts.positive);
  std::size_t tp = 0;
  std::size_t fp = 0;
  double area = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t group_tp = 0;
    std::size_t j = i;
    while (j < sorted.size() && sorted[j].score == sorted[i].score) {
      if (sorted[j].label == 1) {
        ++group_tp;
      } else {
        ++fp;
      }
      ++j;
    }
    tp += group_tp;
    if (group_tp > 0) {
      const double precision =
          static_cast<double>(tp) / static_cast<double>(tp + fp);
      area += (static_cast<double>(group_tp) / np) * precision;
    }
    i = j;
  }
  return area;
}

double aupr_baseline(std::size_t n_positive, std::size_t n_negative) {
  if (n_positive + n_negative == 0) {
    throw ValidationError("AUPR baseline needs a non-empty sample");
  }
  return static_cast<double>(n_positive) /
         static_cast<double>(n_positive + n_negative);
}

DetectionResult evaluate_detection(std::span<const ScoredSample> samples,
                                   std::string metric_name,
                                   std::string orientation, std::size_t k_id,
                                   std::size_t k_ood) {
  DetectionResult result;
  const Counts counts = count_labels(samples);
  result.n_positive = counts.positive;
  result.n_negative = counts.negative;
  result.auroc = auroc(samples);
  result.aupr = aupr(samples);
  result.aupr_baseline = aupr_baseline(counts.positive, counts.negative);

  std::vector<ScoredSample> flipped(samples.begin(), samples.end());
  for (ScoredSample& s : flipped) {
    s.score = -s.score;
    s.label = 1 - s.label;
  }
  result.aupr_opposite = aupr(flipped);
  result.metric_name = std::move(metric_name);
  result.orientation = std::move(orientation);
  result.k_id = k_id;
  result.k_ood = k_ood;
  return result;
}

double ece(std::span<const double> confidences, std::span<const int> correct,
           int bins) {
  if (confidences.size() != correct.size()) {
    throw ValidationError(fmt::format(
        "ECE: {} confidences but {} correctness flags", confidences.size(),
        correct.size()));
  }
  if (bins < 1) throw ValidationError("ECE: bins must be >= 1");
  if (confidences.empty()) throw ValidationError("ECE: empty input");

  std::vector<double> conf_sum(static_cast<std::size_t>(bins), 0.0);
  std::vector<double> hit_sum(static_cast<std::size_t>(bins), 0.0);
  std::vector<std::size_t> count(static_cast<std::size_t>(bins), 0);
  for (std::size_t i = 0; i < confidences.size(); ++i) {
    const double c = confidences[i];
    if (!(c >= 0.0 && c <= 1.0)) {
      throw ValidationError(fmt::format("ECE: confidence {} outside [0, 1]", c));
    }
    long b = static_cast<long>(std::ceil(c * bins)) - 1;
    b = std::clamp(b, 0L, static_cast<long>(bins) - 1);
    const auto slot = static_cast<std::size_t>(b);
    conf_sum[slot] += c;
    hit_sum[slot] += correct[i] ? 1.0 : 0.0;
    ++count[slot];
  }
  const double n = static_cast<double>(confidences.size());
  double total = 0.0;
  for (std::size_t b = 0; b < count.size(); ++b) {
    if (count[b] == 0) continue;
    const double nb = static_cast<double>(count[b]);
    total += (nb / n) * std::abs(hit_sum[b] / nb - conf_sum[b] / nb);
  }
  return total;
}

double nll(std::span<const std::vector<double>> probabilities,
           std::span<const std::size_t> gold_labels) {
  if (probabilities.size() != gold_labels.size()) {
    throw ValidationError("NLL: probabilities and labels differ in length");
  }
  if (probabilities.empty()) throw ValidationError("NLL: empty input");
  double total = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (gold_labels[i] >= probabilities[i].size()) {
      throw ValidationError(fmt::format(
          "NLL: label {} out of range for K={}", gold_labels[i],
          probabilities[i].size()));
    }
    const double p =
        std::max(probabilities[i][gold_labels[i]], kNllProbabilityFloor);
    total -= std::log(p);
  }
  return total / static_cast<double>(probabilities.size());
}

double accuracy(std::span<const std::size_t> predictions,
                std::span<const std::size_t> gold_labels) {
  if (predictions.size() != gold_labels.size()) {
    throw ValidationError("accuracy: predictions and labels differ in length");
  }
  if (predictions.empty()) throw ValidationError("accuracy: empty input");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    hits += predictions[i] == gold_labels[i] ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

std::size_t argmax(std::span<const double> values) {
  if (values.empty()) throw ValidationError("argmax of an empty vector");
  return static_cast<std::size_t>(
      std::max_element(values.begin(), values.end()) - values.begin());
}

namespace reference {

double auroc_bruteforce(std::span<const ScoredSample> samples) {
  const Counts counts = count_labels(samples);
  if (counts.positive == 0 || counts.negative == 0) {
    throw ValidationError(
        "AUROC needs at least one positive and one negative sample");
  }
  double credit = 0.0;
  for (const ScoredSample& p : samples) {
    if (p.label != 1) continue;
    for (const ScoredSample& n : samples) {
      if (n.label != 0) continue;
      if (p.score > n.score) {
        credit += 1.0;
      } else if (p.score == n.score) {
        credit += 0.5;
      }
    }
  }
  return credit / (static_cast<double>(counts.positive) *
                   static_cast<double>(counts.negative));
}

double aupr_reference(std::span<const ScoredSample> samples) {
  const Counts counts = count_labels(samples);
  if (counts.positive == 0) {
    throw ValidationError("AUPR needs at least one positive sample");
  }
  std::vector<double> thresholds;
  for (const ScoredSample& s : samples) thresholds.push_back(s.score);
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  double area = 0.0;
  double previous_recall = 0.0;
  for (double t : thresholds) {
    std::size_t tp = 0;
    std::size_t fp = 0;
    for (const ScoredSample& s : samples) {
      if (s.score >= t) (s.label == 1 ? tp : fp) += 1;
    }
    const double recall =
        static_cast<double>(tp) / static_cast<double>(counts.positive);
    const double precision =
        static_cast<double>(tp) / static_cast<double>(tp + fp);
    area += (recall - previous_recall) * precision;
    previous_recall = recall;
  }
  return area;
}

}  // namespace reference
}  // namespace edl
