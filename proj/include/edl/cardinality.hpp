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

// Class-cardinality audit and the fixed-prediction experiments built on it.
//
// Vacuity K/S depends on K directly, so ID and OOD scores are only comparable
// when both groups are evaluated over the same number of classes. Everything
// here reads records and never modifies them.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edl/dirichlet.hpp"
#include "edl/metrics.hpp"

namespace edl {

enum class ScoreMetric { kVacuity, kMaxProbability, kNormalizedEntropy };
enum class Orientation { kIdPositive, kOodPositive };
enum class ExpansionMode { kOodOnly, kMatched };

const char* metric_name(ScoreMetric metric);            // vacuity | mp | entropy
const char* orientation_name(Orientation orientation);  // id-pos | ood-pos
const char* expansion_mode_name(ExpansionMode mode);    // ood-only | matched
std::optional<ScoreMetric> parse_metric(std::string_view name);
std::optional<Orientation> parse_orientation(std::string_view name);
std::optional<ExpansionMode> parse_expansion_mode(std::string_view name);

struct Offender {
  std::string id;
  Group group = Group::kId;
  std::size_t k = 0;
};

struct AuditReport {
  // nullopt means the group mixes several class counts.
  std::optional<std::size_t> k_id;
  std::optional<std::size_t> k_ood;
  bool pass = false;
  // Records whose K differs from the reference K (the most common ID K,
  // smallest on ties).
  std::vector<Offender> offenders;
};

AuditReport audit_cardinality(std::span<const EvidenceRecord> id_records,
                              std::span<const EvidenceRecord> ood_records);

// Machine-readable notice that a deliberately mismatched comparison was run.
struct Warning {
  std::string kind;
  std::string experiment;
  std::optional<std::size_t> k_id;
  std::optional<std::size_t> k_ood;
  std::string message;
};

// One sample per record. ID-positive scores are 1/u, MP or 1 - H/log2 K with
// ID labelled 1; OOD-positive scores are u, 1 - MP or H/log2 K with OOD
// labelled 1.
std::vector<ScoredSample> score_group(std::span<const EvidenceRecord> records,
                                      ScoreMetric metric,
                                      Orientation orientation);

struct DetectionRun {
  DetectionResult result;
  AuditReport audit;
  std::vector<Warning> warnings;
};

// Scores both groups and evaluates detection. A failed audit throws
// AuditError unless `allow_mismatch`, in which case a warning is attached.
DetectionRun run_detection(std::span<const EvidenceRecord> id_records,
                           std::span<const EvidenceRecord> ood_records,
                           ScoreMetric metric, Orientation orientation,
                           bool allow_mismatch);

struct ExpansionSpec {
  ExpansionMode mode = ExpansionMode::kOodOnly;
  std::vector<std::size_t> k_targets;
  double appended_evidence = 0.0;
  // Append e = S/K - 1 per record (each record's own S), the value that
  // leaves vacuity unchanged. Overrides appended_evidence.
  bool per_record_invariance = false;

  void validate(std::size_t base_k) const;
};

struct DetectionRow {
  std::string condition;
  std::size_t k_id = 0;
  std::size_t k_ood = 0;
  DetectionResult result;
  double delta_auroc = 0.0;
  double delta_aupr = 0.0;
};

struct ExperimentTable {
  std::string name;
  ScoreMetric metric = ScoreMetric::kVacuity;
  Orientation orientation = Orientation::kIdPositive;
  std::vector<DetectionRow> rows;  // rows[0] is the baseline
  std::vector<Warning> warnings;
};

// Baseline row plus one row per k_target. OOD-only appends classes to OOD
// records only; matched appends to both groups. Deltas are signed differences
// from the baseline. Throws AuditError if the baseline is mismatched.
ExperimentTable run_expansion_experiment(
    std::span<const EvidenceRecord> id_records,
    std::span<const EvidenceRecord> ood_records, const ExpansionSpec& spec,
    ScoreMetric metric, Orientation orientation = Orientation::kIdPositive);

// Baseline + OOD-only rows + matched rows, the layout of a combined sweep.
ExperimentTable combine_expansion_tables(const ExperimentTable& ood_only,
                                         const ExperimentTable& matched);

struct RestrictionResult {
  ExperimentTable table;  // rows: "as-is" then "removed"
  std::vector<std::string> excluded_ids;
  std::size_t k_before = 0;
  std::size_t k_after = 0;
};

// Compares OOD records evaluated over all K classes against ID records
// (deliberately mismatched, always warned) with the same OOD records after
// dropping `removed_class_index` via remove_class(). OOD records whose gold
// label is the removed class are excluded from the second run. Requires one
// shared K among the OOD records and K - 1 among the ID records.
RestrictionResult run_restriction_experiment(
    std::span<const EvidenceRecord> five_class_records,
    std::size_t removed_class_index,
    std::span<const EvidenceRecord> id_records, ScoreMetric metric,
    Orientation orientation = Orientation::kIdPositive);

struct CalibrationSummary {
  std::size_t n = 0;
  double accuracy = 0.0;
  double nll = 0.0;
  double ece = 0.0;
};

// Accuracy, NLL and 15-bin ECE of the expected probabilities over the
// labelled records; nullopt when no record carries a gold label.
std::optional<CalibrationSummary> calibration_summary(
    std::span<const EvidenceRecord> records);

}  // namespace edl
