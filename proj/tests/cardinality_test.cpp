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
#include <random>

#include <gtest/gtest.h>

#include "edl/errors.hpp"
#include "edl/records_io.hpp"
#include "edl/synthetic.hpp"

namespace edl {
namespace {

std::vector<EvidenceRecord> fixture(const char* name) {
  return parse_records(std::filesystem::path(EDL_FIXTURE_DIR) / name);
}

EvidenceRecord record(std::string id, Group group, std::vector<double> e,
                      std::optional<std::size_t> gold = std::nullopt) {
  EvidenceRecord r;
  r.id = std::move(id);
  r.group = group;
  for (std::size_t i = 0; i < e.size(); ++i) {
    r.class_names.push_back(std::string(1, static_cast<char>('A' + i)));
  }
  r.evidence = std::move(e);
  r.gold_label = gold;
  return r;
}

Population small_population(std::uint64_t seed, double ood_shape = 2.0) {
  PopulationParams params;
  params.n_id = 120;
  params.n_ood = 120;
  params.ood_shape = ood_shape;
  params.seed = seed;
  return generate_evidence_population(params);
}

TEST(Audit, PassOnMatchedFixtures) {
  const AuditReport report =
      audit_cardinality(fixture("id_k4.jsonl"), fixture("ood_k4.jsonl"));
  EXPECT_TRUE(report.pass);
  EXPECT_EQ(report.k_id, 4u);
  EXPECT_EQ(report.k_ood, 4u);
  EXPECT_TRUE(report.offenders.empty());
}

TEST(Audit, FailOnFourVersusFive) {
  const auto ood = fixture("ood_k5.jsonl");
  const AuditReport report = audit_cardinality(fixture("id_k4.jsonl"), ood);
  EXPECT_FALSE(report.pass);
  EXPECT_EQ(report.k_id, 4u);
  EXPECT_EQ(report.k_ood, 5u);
  EXPECT_EQ(report.offenders.size(), ood.size());
  EXPECT_EQ(report.offenders.front().k, 5u);
  EXPECT_EQ(report.offenders.front().group, Group::kOod);
}

TEST(Audit, MixedIdGroup) {
  const AuditReport report =
      audit_cardinality(fixture("id_mixed.jsonl"), fixture("ood_k4.jsonl"));
  EXPECT_FALSE(report.pass);
  EXPECT_FALSE(report.k_id.has_value());
  EXPECT_EQ(report.offenders.size(), 2u);
}

TEST(Audit, VerdictIsSymmetric) {
  const std::vector<const char*> files{"id_k4.jsonl", "ood_k4.jsonl",
                                       "ood_k5.jsonl", "id_mixed.jsonl",
                                       "ood_k5_labeled.jsonl"};
  for (const char* a : files) {
    for (const char* b : files) {
      EXPECT_EQ(audit_cardinality(fixture(a), fixture(b)).pass,
                audit_cardinality(fixture(b), fixture(a)).pass)
          << a << " vs " << b;
    }
  }
}

TEST(Audit, EmptyGroupIsAnError) {
  EXPECT_THROW(audit_cardinality({}, fixture("ood_k4.jsonl")), ValidationError);
  EXPECT_THROW(audit_cardinality(fixture("id_k4.jsonl"), {}), ValidationError);
}

TEST(ScoreGroup, Examples) {
  const std::vector<EvidenceRecord> id{record("a", Group::kId, {0, 0, 0, 0}),
                                       record("b", Group::kId, {12, 8, 9, 7})};
  const auto s = score_group(id, ScoreMetric::kVacuity, Orientation::kIdPositive);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].score, 1.0);
  EXPECT_EQ(s[0].label, 1);
  EXPECT_DOUBLE_EQ(s[1].score, 10.0);

  const auto ood = score_group(id, ScoreMetric::kVacuity, Orientation::kOodPositive);
  EXPECT_EQ(ood[0].label, 0);
  EXPECT_DOUBLE_EQ(ood[1].score, 0.1);

  const auto mp = score_group(id, ScoreMetric::kMaxProbability, Orientation::kIdPositive);
  EXPECT_DOUBLE_EQ(mp[1].score, 0.325);
  const auto h = score_group(id, ScoreMetric::kNormalizedEntropy, Orientation::kIdPositive);
  EXPECT_NEAR(h[0].score, 0.0, 1e-15);
}

TEST(ScoreGroup, OrientationSwapIsLabelFlip) {
  const auto id = fixture("id_k4.jsonl");
  const auto ood = fixture("ood_k4.jsonl");
  for (ScoreMetric metric : {ScoreMetric::kVacuity, ScoreMetric::kMaxProbability,
                             ScoreMetric::kNormalizedEntropy}) {
    const auto a = run_detection(id, ood, metric, Orientation::kIdPositive, false);
    const auto b = run_detection(id, ood, metric, Orientation::kOodPositive, false);
    EXPECT_EQ(a.result.auroc, b.result.auroc) << metric_name(metric);
    EXPECT_EQ(a.result.n_positive, b.result.n_negative);
  }
}

TEST(RunDetection, MismatchNeedsOptIn) {
  const auto id = fixture("id_k4.jsonl");
  const auto ood = fixture("ood_k5.jsonl");
  EXPECT_THROW(
      run_detection(id, ood, ScoreMetric::kVacuity, Orientation::kIdPositive, false),
      AuditError);
  const DetectionRun run =
      run_detection(id, ood, ScoreMetric::kVacuity, Orientation::kIdPositive, true);
  ASSERT_EQ(run.warnings.size(), 1u);
  EXPECT_EQ(run.warnings[0].kind, "cardinality_mismatch");
  EXPECT_EQ(run.result.k_id, 4u);
  EXPECT_EQ(run.result.k_ood, 5u);
}

TEST(Expansion, MatchedIsBitExact) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Population pop = small_population(seed);
    ExpansionSpec spec;
    spec.mode = ExpansionMode::kMatched;
    spec.k_targets = {5, 6, 7, 8};
    const auto table = run_expansion_experiment(pop.id_records, pop.ood_records,
                                                spec, ScoreMetric::kVacuity);
    ASSERT_EQ(table.rows.size(), 5u);
    for (const DetectionRow& row : table.rows) {
      EXPECT_EQ(row.result.auroc, table.rows[0].result.auroc);
      EXPECT_EQ(row.result.aupr, table.rows[0].result.aupr);
      EXPECT_EQ(row.delta_auroc, 0.0);
      EXPECT_EQ(row.delta_aupr, 0.0);
    }
    EXPECT_TRUE(table.warnings.empty());
    EXPECT_EQ(table.name, "expansion-matched-vacuity");
  }
}

TEST(Expansion, OodOnlyIsMonotone) {
  for (std::uint64_t seed : {4u, 5u, 6u}) {
    const Population pop = small_population(seed, 5.0);
    ExpansionSpec spec;
    spec.k_targets = {5, 6, 7, 8};
    const auto table = run_expansion_experiment(pop.id_records, pop.ood_records,
                                                spec, ScoreMetric::kVacuity);
    ASSERT_LT(table.rows[0].result.auroc, 1.0);
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
      EXPECT_GT(table.rows[i].result.auroc, table.rows[i - 1].result.auroc);
      EXPECT_GE(table.rows[i].result.aupr, table.rows[i - 1].result.aupr);
      EXPECT_EQ(table.rows[i].k_id, 4u);
      EXPECT_EQ(table.rows[i].k_ood, 4u + i);
    }
    EXPECT_EQ(table.warnings.size(), 4u);
  }
}

TEST(Expansion, InvarianceEvidenceKeepsEveryVacuity) {
  const Population pop = small_population(7, 3.0);
  ExpansionSpec spec;
  spec.k_targets = {5, 6};
  spec.per_record_invariance = true;
  const auto table = run_expansion_experiment(pop.id_records, pop.ood_records,
                                              spec, ScoreMetric::kVacuity);
  for (const DetectionRow& row : table.rows) {
    EXPECT_NEAR(row.result.auroc, table.rows[0].result.auroc, 1e-12);
  }
}

TEST(Expansion, DoesNotMutateInputs) {
  const Population pop = small_population(8);
  const Population copy = pop;
  ExpansionSpec spec;
  spec.k_targets = {5, 6};
  for (ExpansionMode mode : {ExpansionMode::kOodOnly, ExpansionMode::kMatched}) {
    spec.mode = mode;
    run_expansion_experiment(pop.id_records, pop.ood_records, spec,
                             ScoreMetric::kVacuity);
  }
  for (std::size_t i = 0; i < pop.ood_records.size(); ++i) {
    EXPECT_EQ(pop.ood_records[i].evidence, copy.ood_records[i].evidence);
    EXPECT_EQ(pop.ood_records[i].class_names, copy.ood_records[i].class_names);
  }
  for (std::size_t i = 0; i < pop.id_records.size(); ++i) {
    EXPECT_EQ(pop.id_records[i].evidence, copy.id_records[i].evidence);
  }
}

TEST(Expansion, Errors) {
  ExpansionSpec spec;
  spec.k_targets = {5};
  EXPECT_THROW(run_expansion_experiment(fixture("id_k4.jsonl"),
                                        fixture("ood_k5.jsonl"), spec,
                                        ScoreMetric::kVacuity),
               AuditError);
  spec.k_targets = {4};
  EXPECT_THROW(run_expansion_experiment(fixture("id_k4.jsonl"),
                                        fixture("ood_k4.jsonl"), spec,
                                        ScoreMetric::kVacuity),
               ValidationError);
  spec.k_targets = {};
  EXPECT_THROW(spec.validate(4), ValidationError);
  spec.k_targets = {6};
  spec.appended_evidence = -1.0;
  EXPECT_THROW(spec.validate(4), ValidationError);
}

TEST(Expansion, CombinedTableLayout) {
  const Population pop = small_population(9);
  ExpansionSpec spec;
  spec.k_targets = {5, 6};
  const auto ood_only = run_expansion_experiment(pop.id_records, pop.ood_records,
                                                 spec, ScoreMetric::kVacuity);
  spec.mode = ExpansionMode::kMatched;
  const auto matched = run_expansion_experiment(pop.id_records, pop.ood_records,
                                                spec, ScoreMetric::kVacuity);
  const auto combined = combine_expansion_tables(ood_only, matched);
  ASSERT_EQ(combined.rows.size(), 5u);
  EXPECT_EQ(combined.rows[0].condition, "Baseline");
  EXPECT_EQ(combined.rows[1].condition, "OOD-only expansion");
  EXPECT_EQ(combined.rows[4].condition, "Matched expansion");
  EXPECT_EQ(combined.name, "expansion-vacuity");
}

TEST(Restriction, ExcludesGoldLabelledRecords) {
  const auto five = fixture("ood_k5_labeled.jsonl");
  const auto id = fixture("id_k4.jsonl");
  const RestrictionResult r =
      run_restriction_experiment(five, 4, id, ScoreMetric::kVacuity);

  std::vector<std::string> expected;
  for (const EvidenceRecord& rec : five) {
    if (rec.gold_label == 4u) expected.push_back(rec.id);
  }
  ASSERT_EQ(expected.size(), 6u);
  EXPECT_EQ(r.excluded_ids, expected);
  EXPECT_EQ(r.k_before, 5u);
  EXPECT_EQ(r.k_after, 4u);

  ASSERT_EQ(r.table.rows.size(), 2u);
  const DetectionResult& as_is = r.table.rows[0].result;
  const DetectionResult& removed = r.table.rows[1].result;
  EXPECT_EQ(as_is.n_negative, five.size());
  EXPECT_EQ(removed.n_negative, five.size() - expected.size());
  EXPECT_EQ(removed.n_positive, id.size());
  EXPECT_DOUBLE_EQ(removed.aupr_baseline,
                   aupr_baseline(id.size(), five.size() - expected.size()));
  EXPECT_NE(removed.aupr_baseline, as_is.aupr_baseline);
  EXPECT_EQ(r.table.warnings.size(), 1u);
}

TEST(Restriction, NoLabelledRecordsKeepsCounts) {
  const auto five = fixture("ood_k5.jsonl");
  const auto id = fixture("id_k4.jsonl");
  const RestrictionResult r =
      run_restriction_experiment(five, 4, id, ScoreMetric::kVacuity);
  EXPECT_TRUE(r.excluded_ids.empty());
  EXPECT_EQ(r.table.rows[1].result.aupr_baseline,
            r.table.rows[0].result.aupr_baseline);
  // Dropping E recovers the matched four-class comparison exactly.
  const auto matched = run_detection(id, fixture("ood_k4.jsonl"),
                                     ScoreMetric::kVacuity,
                                     Orientation::kIdPositive, false);
  EXPECT_EQ(r.table.rows[1].result.auroc, matched.result.auroc);
}

TEST(Restriction, Errors) {
  const auto five = fixture("ood_k5_labeled.jsonl");
  const auto id = fixture("id_k4.jsonl");
  EXPECT_THROW(run_restriction_experiment(five, 5, id, ScoreMetric::kVacuity),
               ValidationError);
  EXPECT_THROW(run_restriction_experiment(fixture("ood_k4.jsonl"), 3, id,
                                          ScoreMetric::kVacuity),
               ValidationError);
}

TEST(Calibration, SummaryOverLabelledRecords) {
  const auto id = fixture("id_k4.jsonl");
  const auto summary = calibration_summary(id);
  ASSERT_TRUE(summary.has_value());
  EXPECT_EQ(summary->n, id.size());
  EXPECT_GT(summary->accuracy, 0.5);
  EXPECT_GT(summary->nll, 0.0);
  EXPECT_FALSE(calibration_summary(fixture("ood_k4.jsonl")).has_value());
}

TEST(Names, RoundTrip) {
  for (ScoreMetric m : {ScoreMetric::kVacuity, ScoreMetric::kMaxProbability,
                        ScoreMetric::kNormalizedEntropy}) {
    EXPECT_EQ(parse_metric(metric_name(m)), m);
  }
  for (Orientation o : {Orientation::kIdPositive, Orientation::kOodPositive}) {
    EXPECT_EQ(parse_orientation(orientation_name(o)), o);
  }
  for (ExpansionMode m : {ExpansionMode::kOodOnly, ExpansionMode::kMatched}) {
    EXPECT_EQ(parse_expansion_mode(expansion_mode_name(m)), m);
  }
  EXPECT_FALSE(parse_metric("auroc").has_value());
}

}  // namespace
}  // namespace edl
