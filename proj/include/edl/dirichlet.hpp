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

// Evidence -> Dirichlet mapping and per-record uncertainty quantities.
//
// A K-class evidential classifier emits non-negative evidence e_i per class.
// The Dirichlet concentration is alpha_i = e_i + 1 and its strength is
// S = sum_i alpha_i. Vacuity (uncertainty mass) is K / S.
//
// All functions here are pure.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace edl {

enum class Group { kId, kOod };

const char* group_name(Group group);

struct EvidenceRecord {
  std::string id;
  Group group = Group::kId;
  std::vector<std::string> class_names;
  std::vector<double> evidence;
  // Index into class_names. OOD records are usually unlabeled.
  std::optional<std::size_t> gold_label;

  std::size_t num_classes() const { return evidence.size(); }

  // Throws ValidationError naming the first violated invariant.
  void validate() const;
};

struct DirichletState {
  std::vector<double> alpha;
  double strength = 0.0;
  std::size_t k = 0;

  // Builds a state from concentrations, each of which must be >= 1.
  static DirichletState from_alpha(std::vector<double> alpha);
};

struct UncertaintyScores {
  double vacuity = 0.0;
  double max_probability = 0.0;
  double normalized_entropy = 0.0;
};

// Sequential left-to-right sum. The batch kernels reproduce this order so
// both paths agree bit for bit.
double dirichlet_strength(std::span<const double> alpha);

DirichletState evidence_to_alpha(std::span<const double> evidence);
DirichletState evidence_to_alpha(const EvidenceRecord& record);

std::vector<double> expected_probabilities(const DirichletState& state);

double vacuity(const DirichletState& state);

double max_probability(const DirichletState& state);

// Shannon entropy in bits divided by log2(K). 0 log 0 is taken as 0.
double normalized_entropy(std::span<const double> probs);

UncertaintyScores uncertainty_scores(const DirichletState& state);

struct InvarianceConcentration {
  double alpha = 0.0;
  double evidence = 0.0;
};

// The unique concentration S/K which, appended as class K+1, leaves vacuity
// unchanged.
InvarianceConcentration invariance_concentration(const DirichletState& state);

// Name given to the i-th appended class (1-based): "X1", "X2", ...
std::string synthetic_class_name(std::size_t index);

// Appends `count` synthetic classes, each carrying `appended_evidence`.
// Existing components are copied untouched.
EvidenceRecord append_classes(const EvidenceRecord& record, std::size_t count,
                              double appended_evidence);

// Drops one class. Returns nullopt when the record's gold label is the removed
// class (the record has no valid answer left and is excluded).
std::optional<EvidenceRecord> remove_class(const EvidenceRecord& record,
                                           std::size_t class_index);

}  // namespace edl
