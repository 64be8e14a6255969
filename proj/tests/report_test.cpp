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

#include "edl/report.hpp"

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "edl/synthetic.hpp"

namespace edl {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("edl_report_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + 1)) {
    ++n;
  }
  return n;
}

ExperimentTable expansion(ExpansionMode mode, std::vector<std::size_t> targets) {
  PopulationParams params;
  params.n_id = 80;
  params.n_ood = 80;
  params.ood_shape = 4.0;
  const Population pop = generate_evidence_population(params);
  ExpansionSpec spec;
  spec.mode = mode;
  spec.k_targets = std::move(targets);
  return run_expansion_experiment(pop.id_records, pop.ood_records, spec,
                                  ScoreMetric::kVacuity);
}

TEST(FormatDelta, Examples) {
  EXPECT_EQ(format_delta(0.0), "0.000");
  EXPECT_EQ(format_delta(-0.0), "0.000");
  EXPECT_EQ(format_delta(-1e-9), "0.000");
  EXPECT_EQ(format_delta(0.272), "+0.272");
  EXPECT_EQ(format_delta(-0.2641), "-0.264");
}

TEST(RenderTable, MatchedDeltasPrintZero) {
  const auto table = expansion(ExpansionMode::kMatched, {5, 6, 7, 8});
  const std::string md = render_table(table, TableFormat::kMarkdown);
  // Two delta columns per row, baseline included.
  EXPECT_EQ(count(md, "| 0.000 |"), 10u);
  EXPECT_NE(md.find("Matched expansion"), std::string::npos);
  EXPECT_NE(md.find("## expansion-matched-vacuity"), std::string::npos);
}

TEST(RenderTable, CsvHasOneLinePerRow) {
  const auto table = expansion(ExpansionMode::kOodOnly, {5, 6});
  const std::string csv = render_table(table, TableFormat::kCsv);
  EXPECT_EQ(count(csv, "\n"), 1u + table.rows.size());
}

TEST(RenderTable, JsonMirrorsTableAtFullPrecision) {
  const auto table = expansion(ExpansionMode::kOodOnly, {5, 6, 7});
  const auto doc = nlohmann::ordered_json::parse(render_table(table, TableFormat::kJson));
  ASSERT_EQ(doc["rows"].size(), table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    EXPECT_EQ(doc["rows"][i]["auroc"].get<double>(), table.rows[i].result.auroc);
    EXPECT_EQ(doc["rows"][i]["delta_aupr"].get<double>(), table.rows[i].delta_aupr);
  }
  const ExperimentTable back = table_from_json(doc);
  EXPECT_EQ(render_table(back, TableFormat::kJson),
            render_table(table, TableFormat::kJson));
  EXPECT_EQ(back.warnings.size(), table.warnings.size());
}

TEST(RenderSweep, OneTargetGivesBaselinePlusOnePoint) {
  const auto table = expansion(ExpansionMode::kOodOnly, {5});
  const std::string svg = render_sweep_svg(table);
  // Two panels, each with the baseline point and one sweep point.
  EXPECT_EQ(count(svg, "<circle"), 4u);
  EXPECT_EQ(count(svg, "<polyline"), 2u);
  const std::string csv = render_sweep_csv(table);
  EXPECT_EQ(count(csv, "\n"), 3u);
  EXPECT_NE(svg.find("<desc>"), std::string::npos);
}

TEST(RenderSweep, CombinedSeriesShareBaseline) {
  const auto combined = combine_expansion_tables(
      expansion(ExpansionMode::kOodOnly, {5, 6}),
      expansion(ExpansionMode::kMatched, {5, 6}));
  const std::string svg = render_sweep_svg(combined);
  EXPECT_EQ(count(svg, "<polyline"), 4u);
  EXPECT_EQ(count(svg, "<circle"), 12u);
}

TEST(EmitReport, WritesExpectedFilesDeterministically) {
  const std::vector<ExperimentTable> tables{
      expansion(ExpansionMode::kMatched, {5, 6})};
  const fs::path a = scratch_dir("a");
  const fs::path b = scratch_dir("b");
  const auto written_a = emit_report(tables, a, TableFormat::kMarkdown);
  const auto written_b = emit_report(tables, b, TableFormat::kMarkdown);
  ASSERT_EQ(written_a.size(), 4u);
  for (std::size_t i = 0; i < written_a.size(); ++i) {
    EXPECT_EQ(written_a[i].filename(), written_b[i].filename());
    EXPECT_EQ(slurp(written_a[i]), slurp(written_b[i]));
  }
  EXPECT_TRUE(fs::exists(a / "expansion-matched-vacuity.md"));
  EXPECT_TRUE(fs::exists(a / "expansion-matched-vacuity.svg"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(EmitReport, UnwritableDirectoryThrows) {
  const fs::path dir = scratch_dir("blocked");
  fs::create_directories(dir);
  write_text_file(dir / "file", "x");
  const std::vector<ExperimentTable> tables{
      expansion(ExpansionMode::kMatched, {5})};
  EXPECT_THROW(emit_report(tables, dir / "file" / "sub", TableFormat::kCsv),
               std::runtime_error);
  fs::remove_all(dir);
}

TEST(AppendWarnings, OneLinePerWarning) {
  const fs::path dir = scratch_dir("warnings");
  const auto table = expansion(ExpansionMode::kOodOnly, {5, 6, 7});
  append_warnings(dir, table.warnings);
  const std::string text = slurp(dir / "warnings.jsonl");
  EXPECT_EQ(count(text, "\n"), 3u);
  EXPECT_EQ(count(text, "\"cardinality_mismatch\""), 3u);
  fs::remove_all(dir);
}

TEST(RenderAudit, Verdicts) {
  AuditReport report;
  report.k_id = 4;
  report.k_ood = std::nullopt;
  report.offenders.push_back({"ood-1", Group::kOod, 5});
  const std::string text = render_audit(report);
  EXPECT_NE(text.find("FAIL"), std::string::npos);
  EXPECT_NE(text.find("MIXED"), std::string::npos);
  EXPECT_NE(text.find("ood-1"), std::string::npos);
}

}  // namespace
}  // namespace edl
