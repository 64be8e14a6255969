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

#include "edl/cardinality.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "edl/errors.hpp"
#include "edl/simd/kernels.hpp"

namespace edl {
namespace {

std::optional<std::size_t> uniform_k(std::span<const EvidenceRecord> records) {
  std::optional<std::size_t> k;
  for (const EvidenceRecord& r : records) {
    if (!k) {
      k = r.num_classes();
    } else if (*k != r.num_classes()) {
      return std::nullopt;
    }
  }
  return k;
}

std::size_t reference_k(std::span<const EvidenceRecord> records) {
  std::map<std::size_t, std::size_t> histogram;
  for (const EvidenceRecord& r : records) ++histogram[r.num_classes()];
  std::size_t best_k = 0;
  std::size_t best_count = 0;
  for (const auto& [k, count] : histogram) {
    if (count > best_count) {
      best_k = k;
      best_count = count;
    }
  }
  return best_k;
}

Warning mismatch_warning(std::string experiment, const AuditReport& audit,
                         std::string message) {
  return Warning{"cardinality_mismatch", std::move(experiment), audit.k_id,
                 audit.k_ood, std::move(message)};
}

std::string k_label(std::optional<std::size_t> k) {
  return k ? std::to_string(*k) : std::string("MIXED");
}

std::vector<ScoredSample> score_both(std::span<const EvidenceRecord> id_records,
                                     std::span<const EvidenceRecord> ood_records,
                                     ScoreMetric metric,
                                     Orientation orientation) {
  std::vector<ScoredSample> samples = score_group(id_records, metric, orientation);
  const std::vector<ScoredSample> ood = score_group(ood_records, metric, orientation);
  samples.insert(samples.end(), ood.begin(), ood.end());
  return samples;
}

DetectionResult detect(std::span<const EvidenceRecord> id_records,
                       std::span<const EvidenceRecord> ood_records,
                       ScoreMetric metric, Orientation orientation) {
  const std::vector<ScoredSample> samples =
      score_both(id_records, ood_records, metric, orientation);
  const std::size_t k_id = uniform_k(id_records).value_or(0);
  const std::size_t k_ood = uniform_k(ood_records).value_or(0);
  return evaluate_detection(samples, metric_name(metric),
                            orientation_name(orientation), k_id, k_ood);
}

std::vector<EvidenceRecord> expand(std::span<const EvidenceRecord> records,
                                   std::size_t count, const ExpansionSpec& spec) {
  std::vector<EvidenceRecord> out;
  out.reserve(records.size());
  for (const EvidenceRecord& r : records) {
    const double appended =
        spec.per_record_invariance
            ? invariance_concentration(evidence_to_alpha(r)).evidence
            : spec.appended_evidence;
    out.push_back(append_classes(r, count, appended));
  }
  return out;
}

void require_non_empty(std::span<const EvidenceRecord> records,
                       const char* group) {
  if (records.empty()) {
    throw ValidationError(fmt::format("{} group has no records", group));
  }
}

}  // namespace

const char* metric_name(ScoreMetric metric) {
  switch (metric) {
    case ScoreMetric::kVacuity:
      return "vacuity";
    case ScoreMetric::kMaxProbability:
      return "mp";
    case ScoreMetric::kNormalizedEntropy:
      return "entropy";
  }
  return "unknown";
}

const char* orientation_name(Orientation orientation) {
  return orientation == Orientation::kIdPositive ? "id-pos" : "ood-pos";
}

const char* expansion_mode_name(ExpansionMode mode) {
  return mode == ExpansionMode::kOodOnly ? "ood-only" : "matched";
}

std::optional<ScoreMetric> parse_metric(std::string_view name) {
  if (name == "vacuity") return ScoreMetric::kVacuity;
  if (name == "mp") return ScoreMetric::kMaxProbability;
  if (name == "entropy") return ScoreMetric::kNormalizedEntropy;
  return std::nullopt;
}

std::optional<Orientation> parse_orientation(std::string_view name) {
  if (name == "id-pos") return Orientation::kIdPositive;
  if (name == "ood-pos") return Orientation::kOodPositive;
  return std::nullopt;
}

std::optional<ExpansionMode> parse_expansion_mode(std::string_view name) {
  if (name == "ood-only") return ExpansionMode::kOodOnly;
  if (name == "matched") return ExpansionMode::kMatched;
  return std::nullopt;
}

AuditReport audit_cardinality(std::span<const EvidenceRecord> id_records,
                              std::span<const EvidenceRecord> ood_records) {
  require_non_empty(id_records, "ID");
  require_non_empty(ood_records, "OOD");
  AuditReport report;
  report.k_id = uniform_k(id_records);
  report.k_ood = uniform_k(ood_records);
  report.pass = report.k_id && report.k_ood && *report.k_id == *report.k_ood;
  if (report.pass) return report;

  const std::size_t reference = reference_k(id_records);
  for (auto group : {id_records, ood_records}) {
    for (const EvidenceRecord& r : group) {
      if (r.num_classes() != reference) {
        report.offenders.push_back({r.id, r.group, r.num_classes()});
      }
    }
  }
  return report;
}

std::vector<ScoredSample> score_group(std::span<const EvidenceRecord> records,
                                      ScoreMetric metric,
                                      Orientation orientation) {
  std::vector<ScoredSample> samples(records.size());
  const bool id_positive = orientation == Orientation::kIdPositive;
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].validate();
    const bool is_id = records[i].group == Group::kId;
    samples[i].label = (is_id == id_positive) ? 1 : 0;
  }

  if (metric == ScoreMetric::kNormalizedEntropy) {
    for (std::size_t i = 0; i < records.size(); ++i) {
      const double h = normalized_entropy(
          expected_probabilities(evidence_to_alpha(records[i])));
      samples[i].score = id_positive ? 1.0 - h : h;
    }
    return samples;
  }

  // Vacuity and MP only need S and max alpha per record; batch those through
  // the SIMD kernels, one evidence matrix per distinct K.
  std::map<std::size_t, std::vector<std::size_t>> by_k;
  for (std::size_t i = 0; i < records.size(); ++i) {
    by_k[records[i].num_classes()].push_back(i);
  }
  std::vector<double> matrix;
  std::vector<double> strength;
  std::vector<double> max_alpha;
  for (const auto& [k, indices] : by_k) {
    matrix.clear();
    matrix.reserve(indices.size() * k);
    for (std::size_t i : indices) {
      matrix.insert(matrix.end(), records[i].evidence.begin(),
                    records[i].evidence.end());
    }
    strength.assign(indices.size(), 0.0);
    max_alpha.assign(indices.size(), 0.0);
    simd::strength_and_max(matrix, k, strength, max_alpha);
    const double kd = static_cast<double>(k);
    for (std::size_t row = 0; row < indices.size(); ++row) {
      double score = 0.0;
      if (metric == ScoreMetric::kVacuity) {
        const double u = kd / strength[row];
        score = id_positive ? 1.0 / u : u;
      } else {
        const double mp = max_alpha[row] / strength[row];
        score = id_positive ? mp : 1.0 - mp;
      }
      samples[indices[row]].score = score;
    }
  }
  return samples;
}

DetectionRun run_detection(std::span<const EvidenceRecord> id_records,
                           std::span<const EvidenceRecord> ood_records,
                           ScoreMetric metric, Orientation orientation,
                           bool allow_mismatch) {
  DetectionRun run;
  run.audit = audit_cardinality(id_records, ood_records);
  if (!run.audit.pass) {
    if (!allow_mismatch) {
      throw AuditError(fmt::format(
          "class cardinality mismatch (K_ID={}, K_OOD={}); scores are not "
          "comparable",
          k_label(run.audit.k_id), k_label(run.audit.k_ood)));
    }
    run.warnings.push_back(mismatch_warning(
        "metrics", run.audit,
        "ID and OOD records were scored with different class counts"));
  }
  run.result = detect(id_records, ood_records, metric, orientation);
  return run;
}

void ExpansionSpec::validate(std::size_t base_k) const {
  if (k_targets.empty()) throw ValidationError("no target K values given");
  for (std::size_t k : k_targets) {
    if (k <= base_k) {
      throw ValidationError(fmt::format(
          "target K={} must exceed the base K={}", k, base_k));
    }
  }
  if (!per_record_invariance &&
      !(appended_evidence >= 0.0 && std::isfinite(appended_evidence))) {
    throw ValidationError("appended evidence must be finite and >= 0");
  }
}

ExperimentTable run_expansion_experiment(
    std::span<const EvidenceRecord> id_records,
    std::span<const EvidenceRecord> ood_records, const ExpansionSpec& spec,
    ScoreMetric metric, Orientation orientation) {
  const AuditReport audit = audit_cardinality(id_records, ood_records);
  if (!audit.pass) {
    throw AuditError(fmt::format(
        "baseline class counts differ (K_ID={}, K_OOD={}); run "
        "audit_cardinality and fix the inputs before expanding",
        k_label(audit.k_id), k_label(audit.k_ood)));
  }
  const std::size_t base_k = *audit.k_id;
  spec.validate(base_k);

  ExperimentTable table;
  table.name = fmt::format("expansion-{}-{}", expansion_mode_name(spec.mode),
                           metric_name(metric));
  table.metric = metric;
  table.orientation = orientation;

  DetectionRow baseline;
  baseline.condition = "Baseline";
  baseline.k_id = base_k;
  baseline.k_ood = base_k;
  baseline.result = detect(id_records, ood_records, metric, orientation);
  table.rows.push_back(baseline);

  const bool matched = spec.mode == ExpansionMode::kMatched;
  for (std::size_t target : spec.k_targets) {
    const std::size_t extra = target - base_k;
    const std::vector<EvidenceRecord> ood = expand(ood_records, extra, spec);
    DetectionRow row;
    row.condition = matched ? "Matched expansion" : "OOD-only expansion";
    row.k_ood = target;
    if (matched) {
      const std::vector<EvidenceRecord> id = expand(id_records, extra, spec);
      row.k_id = target;
      row.result = detect(id, ood, metric, orientation);
    } else {
      row.k_id = base_k;
      row.result = detect(id_records, ood, metric, orientation);
      table.warnings.push_back(Warning{
          "cardinality_mismatch", table.name, base_k, target,
          "OOD-only expansion deliberately compares records with different "
          "class counts"});
    }
    row.delta_auroc = row.result.auroc - baseline.result.auroc;
    row.delta_aupr = row.result.aupr - baseline.result.aupr;
    table.rows.push_back(std::move(row));
  }
  return table;
}

ExperimentTable combine_expansion_tables(const ExperimentTable& ood_only,
                                         const ExperimentTable& matched) {
  if (ood_only.rows.empty() || matched.rows.empty()) {
    throw ValidationError("cannot combine empty expansion tables");
  }
  ExperimentTable combined = ood_only;
  combined.name = fmt::format("expansion-{}", metric_name(ood_only.metric));
  combined.rows.insert(combined.rows.end(), matched.rows.begin() + 1,
                       matched.rows.end());
  combined.warnings.insert(combined.warnings.end(), matched.warnings.begin(),
                           matched.warnings.end());
  return combined;
}

RestrictionResult run_restriction_experiment(
    std::span<const EvidenceRecord> five_class_records,
    std::size_t removed_class_index,
    std::span<const EvidenceRecord> id_records, ScoreMetric metric,
    Orientation orientation) {
  require_non_empty(five_class_records, "OOD");
  require_non_empty(id_records, "ID");
  const std::optional<std::size_t> k_ood = uniform_k(five_class_records);
  const std::optional<std::size_t> k_id = uniform_k(id_records);
  if (!k_ood) {
    throw ValidationError("restriction needs one shared K among OOD records");
  }
  if (removed_class_index >= *k_ood) {
    throw ValidationError(fmt::format(
        "class index {} out of range for K={}", removed_class_index, *k_ood));
  }
  if (!k_id || *k_id + 1 != *k_ood) {
    throw ValidationError(fmt::format(
        "restriction needs ID records with K={} (OOD K minus one), got {}",
        *k_ood - 1, k_label(k_id)));
  }

  RestrictionResult out;
  out.k_before = *k_ood;
  out.k_after = *k_ood - 1;
  ExperimentTable& table = out.table;
  table.name = fmt::format("restriction-{}", metric_name(metric));
  table.metric = metric;
  table.orientation = orientation;

  DetectionRow as_is;
  as_is.condition = "As-is";
  as_is.k_id = *k_id;
  as_is.k_ood = *k_ood;
  as_is.result = detect(id_records, five_class_records, metric, orientation);
  table.rows.push_back(as_is);
  table.warnings.push_back(Warning{
      "cardinality_mismatch", table.name, *k_id, *k_ood,
      fmt::format("as-is run scores {}-class OOD records against {}-class ID "
                  "records; its AUROC/AUPR are inflated by construction",
                  *k_ood, *k_id)});

  std::vector<EvidenceRecord> restricted;
  restricted.reserve(five_class_records.size());
  for (const EvidenceRecord& r : five_class_records) {
    std::optional<EvidenceRecord> kept = remove_class(r, removed_class_index);
    if (kept) {
      restricted.push_back(std::move(*kept));
    } else {
      out.excluded_ids.push_back(r.id);
    }
  }
  if (restricted.empty()) {
    throw ValidationError("every OOD record was excluded by the restriction");
  }

  DetectionRow removed;
  removed.condition = "Removed class";
  removed.k_id = *k_id;
  removed.k_ood = out.k_after;
  removed.result = detect(id_records, restricted, metric, orientation);
  removed.delta_auroc = removed.result.auroc - as_is.result.auroc;
  removed.delta_aupr = removed.result.aupr - as_is.result.aupr;
  table.rows.push_back(std::move(removed));
  return out;
}

std::optional<CalibrationSummary> calibration_summary(
    std::span<const EvidenceRecord> records) {
  std::vector<std::vector<double>> probabilities;
  std::vector<std::size_t> gold;
  std::vector<std::size_t> predicted;
  std::vector<double> confidence;
  std::vector<int> correct;
  for (const EvidenceRecord& r : records) {
    if (!r.gold_label) continue;
    std::vector<double> probs = expected_probabilities(evidence_to_alpha(r));
    const std::size_t guess = argmax(probs);
    predicted.push_back(guess);
    gold.push_back(*r.gold_label);
    confidence.push_back(probs[guess]);
    correct.push_back(guess == *r.gold_label ? 1 : 0);
    probabilities.push_back(std::move(probs));
  }
  if (gold.empty()) return std::nullopt;
  CalibrationSummary summary;
  summary.n = gold.size();
  summary.accuracy = accuracy(predicted, gold);
  summary.nll = nll(probabilities, gold);
  summary.ece = ece(confidence, correct);
  return summary;
}

}  // namespace edl
