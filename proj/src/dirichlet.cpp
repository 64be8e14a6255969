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

#include "edl/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "edl/errors.hpp"

namespace edl {

const char* group_name(Group group) {
  return group == Group::kId ? "id" : "ood";
}

void EvidenceRecord::validate() const {
  if (evidence.size() < 2) {
    throw ValidationError(
        fmt::format("record '{}': need at least 2 classes, got {}", id,
                    evidence.size()));
  }
  if (class_names.size() != evidence.size()) {
    throw ValidationError(fmt::format(
        "record '{}': {} class names for {} evidence components", id,
        class_names.size(), evidence.size()));
  }
  for (std::size_t i = 0; i < evidence.size(); ++i) {
    if (!(evidence[i] >= 0.0) || !std::isfinite(evidence[i])) {
      throw ValidationError(
          fmt::format("negative evidence at index {}", i));
    }
  }
  if (gold_label && *gold_label >= evidence.size()) {
    throw ValidationError(fmt::format(
        "record '{}': gold label {} out of range for K={}", id, *gold_label,
        evidence.size()));
  }
}

DirichletState DirichletState::from_alpha(std::vector<double> alpha) {
  if (alpha.size() < 2) {
    throw ValidationError("a Dirichlet state needs at least 2 classes");
  }
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (!(alpha[i] >= 1.0) || !std::isfinite(alpha[i])) {
      throw ValidationError(
          fmt::format("concentration below 1 at index {}", i));
    }
  }
  DirichletState state;
  state.strength = dirichlet_strength(alpha);
  state.k = alpha.size();
  state.alpha = std::move(alpha);
  return state;
}

double dirichlet_strength(std::span<const double> alpha) {
  double sum = 0.0;
  for (double a : alpha) sum += a;
  return sum;
}

DirichletState evidence_to_alpha(std::span<const double> evidence) {
  if (evidence.size() < 2) {
    throw ValidationError("a Dirichlet state needs at least 2 classes");
  }
  std::vector<double> alpha(evidence.size());
  for (std::size_t i = 0; i < evidence.size(); ++i) {
    if (!(evidence[i] >= 0.0) || !std::isfinite(evidence[i])) {
      throw ValidationError(fmt::format("negative evidence at index {}", i));
    }
    alpha[i] = evidence[i] + 1.0;
  }
  DirichletState state;
  state.strength = dirichlet_strength(alpha);
  state.k = alpha.size();
  state.alpha = std::move(alpha);
  return state;
}

DirichletState evidence_to_alpha(const EvidenceRecord& record) {
  record.validate();
  return evidence_to_alpha(std::span<const double>(record.evidence));
}

std::vector<double> expected_probabilities(const DirichletState& state) {
  std::vector<double> probs(state.alpha.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    probs[i] = state.alpha[i] / state.strength;
  }
  return probs;
}

double vacuity(const DirichletState& state) {
  return static_cast<double>(state.k) / state.strength;
}

double max_probability(const DirichletState& state) {
  const double top = *std::max_element(state.alpha.begin(), state.alpha.end());
  return top / state.strength;
}

double normalized_entropy(std::span<const double> probs) {
  if (probs.size() < 2) {
    throw ValidationError("normalized entropy needs at least 2 classes");
  }
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) {
      throw ValidationError("probability vector has a negative component");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValidationError(
        fmt::format("probability vector sums to {}, not 1", total));
  }
  double bits = 0.0;
  for (double p : probs) {
    if (p > 0.0) bits -= p * std::log2(p);
  }
  const double h = bits / std::log2(static_cast<double>(probs.size()));
  return std::clamp(h, 0.0, 1.0);
}

UncertaintyScores uncertainty_scores(const DirichletState& state) {
  const std::vector<double> probs = expected_probabilities(state);
  return {vacuity(state), max_probability(state), normalized_entropy(probs)};
}

InvarianceConcentration invariance_concentration(const DirichletState& state) {
  const double mean = state.strength / static_cast<double>(state.k);
  return {mean, mean - 1.0};
}

std::string synthetic_class_name(std::size_t index) {
  return "X" + std::to_string(index);
}

EvidenceRecord append_classes(const EvidenceRecord& record, std::size_t count,
                              double appended_evidence) {
  if (!(appended_evidence >= 0.0) || !std::isfinite(appended_evidence)) {
    throw ValidationError(fmt::format(
        "appended evidence must be finite and >= 0, got {}",
        appended_evidence));
  }
  EvidenceRecord out = record;
  out.evidence.reserve(record.evidence.size() + count);
  out.class_names.reserve(record.class_names.size() + count);
  for (std::size_t i = 1; i <= count; ++i) {
    out.evidence.push_back(appended_evidence);
    out.class_names.push_back(synthetic_class_name(i));
  }
  return out;
}

std::optional<EvidenceRecord> remove_class(const EvidenceRecord& record,
                                           std::size_t class_index) {
  if (class_index >= record.evidence.size()) {
    throw ValidationError(fmt::format(
        "class index {} out of range for K={}", class_index,
        record.evidence.size()));
  }
  if (record.gold_label == class_index) return std::nullopt;

  EvidenceRecord out;
  out.id = record.id;
  out.group = record.group;
  for (std::size_t i = 0; i < record.evidence.size(); ++i) {
    if (i == class_index) continue;
    out.evidence.push_back(record.evidence[i]);
    if (i < record.class_names.size()) {
      out.class_names.push_back(record.class_names[i]);
    }
  }
  if (record.gold_label) {
    const std::size_t gold = *record.gold_label;
    out.gold_label = gold > class_index ? gold - 1 : gold;
  }
  return out;
}

}  // namespace edl
