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

#include "edl/cli.hpp"

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

namespace edl {
namespace {

namespace fs = std::filesystem;

std::string fixture(const char* name) {
  return (fs::path(EDL_FIXTURE_DIR) / name).string();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    out_dir_ = fs::temp_directory_path() /
               ("edl_cli_test_" +
                std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(out_dir_);
  }
  void TearDown() override { fs::remove_all(out_dir_); }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), {"--out", out_dir_.string()});
    out_.str("");
    err_.str("");
    return run_cli(args, out_, err_);
  }

  nlohmann::json read_json(const std::string& name) {
    std::ifstream in(out_dir_ / name);
    return nlohmann::json::parse(in);
  }

  fs::path out_dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, AuditMatchedExitsZero) {
  EXPECT_EQ(run({"audit", fixture("id_k4.jsonl"), fixture("ood_k4.jsonl")}), kExitOk);
  EXPECT_EQ(read_json("audit.json")["verdict"], "PASS");
}

TEST_F(CliTest, AuditMismatchExitsTwo) {
  EXPECT_EQ(run({"audit", fixture("id_k4.jsonl"), fixture("ood_k5.jsonl")}),
            kExitAuditFailure);
  EXPECT_NE(out_.str().find("FAIL"), std::string::npos);
  const auto doc = read_json("audit.json");
  EXPECT_EQ(doc["verdict"], "FAIL");
  EXPECT_EQ(doc["k_ood"], 5);
}

TEST_F(CliTest, MetricsMismatchNeedsFlag) {
  EXPECT_EQ(run({"metrics", fixture("id_k4.jsonl"), fixture("ood_k5.jsonl")}),
            kExitAuditFailure);
  EXPECT_EQ(run({"metrics", fixture("id_k4.jsonl"), fixture("ood_k5.jsonl"),
                 "--allow-mismatch"}),
            kExitOk);
  EXPECT_TRUE(fs::exists(out_dir_ / "warnings.jsonl"));
  EXPECT_TRUE(fs::exists(out_dir_ / "metrics-vacuity.md"));
}

TEST_F(CliTest, MetricsMatchedWritesCalibration) {
  EXPECT_EQ(run({"metrics", fixture("id_k4.jsonl"), fixture("ood_k4.jsonl"),
                 "--metric", "mp", "--orientation", "ood-pos"}),
            kExitOk);
  EXPECT_TRUE(fs::exists(out_dir_ / "calibration.json"));
  EXPECT_FALSE(fs::exists(out_dir_ / "warnings.jsonl"));
  const auto table = read_json("metrics-mp.json");
  EXPECT_EQ(table["orientation"], "ood-pos");
}

TEST_F(CliTest, ExpandMatchedDeltasAreZero) {
  EXPECT_EQ(run({"--format", "csv", "expand", fixture("id_k4.jsonl"),
                 fixture("ood_k4.jsonl"), "--mode", "matched", "--k-max", "8"}),
            kExitOk);
  const auto table = read_json("expansion-matched-vacuity.json");
  ASSERT_EQ(table["rows"].size(), 5u);
  for (const auto& row : table["rows"]) {
    EXPECT_EQ(row["delta_auroc"].get<double>(), 0.0);
    EXPECT_EQ(row["delta_aupr"].get<double>(), 0.0);
  }
  EXPECT_TRUE(fs::exists(out_dir_ / "expansion-matched-vacuity.csv"));
  EXPECT_TRUE(fs::exists(out_dir_ / "expansion-matched-vacuity.svg"));
}

TEST_F(CliTest, ExpandOodOnlyIsMonotone) {
  EXPECT_EQ(run({"expand", fixture("id_k4.jsonl"), fixture("ood_k4.jsonl"),
                 "--mode", "ood-only", "--k-max", "8", "--evidence", "0"}),
            kExitOk);
  const auto rows = read_json("expansion-ood-only-vacuity.json")["rows"];
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GE(rows[i]["auroc"].get<double>(), rows[i - 1]["auroc"].get<double>());
  }
}

TEST_F(CliTest, ExpandRejectsMismatchedBaseline) {
  EXPECT_EQ(run({"expand", fixture("id_k4.jsonl"), fixture("ood_k5.jsonl"),
                 "--mode", "matched", "--k-max", "8"}),
            kExitAuditFailure);
}

TEST_F(CliTest, RestrictReportsExclusions) {
  EXPECT_EQ(run({"restrict", fixture("id_k4.jsonl"), fixture("ood_k5_labeled.jsonl"),
                 "--remove-class", "4"}),
            kExitOk);
  EXPECT_NE(out_.str().find("Excluded 6"), std::string::npos);
  EXPECT_TRUE(fs::exists(out_dir_ / "warnings.jsonl"));
}

TEST_F(CliTest, SimulateAndReport) {
  const fs::path config = out_dir_.string() + "_sim.json";
  std::ofstream(config) << R"({"n_id": 60, "n_ood": 60, "k_max": 6, "seed": 3})";
  EXPECT_EQ(run({"simulate", "--config", config.string()}), kExitOk);
  EXPECT_TRUE(fs::exists(out_dir_ / "id.jsonl"));
  EXPECT_TRUE(fs::exists(out_dir_ / "expansion-vacuity.svg"));
  EXPECT_EQ(run({"report", out_dir_.string()}), kExitOk);
  EXPECT_TRUE(fs::exists(out_dir_ / "summary.md"));
  fs::remove(config);
}

TEST_F(CliTest, SimulateRejectsUnknownConfigKey) {
  const fs::path config = out_dir_.string() + "_bad.json";
  std::ofstream(config) << R"({"n_id": 60, "bogus": 1})";
  EXPECT_EQ(run({"simulate", "--config", config.string()}), kExitError);
  EXPECT_NE(err_.str().find("bogus"), std::string::npos);
  fs::remove(config);
}

TEST_F(CliTest, TrainToyWritesSummary) {
  const fs::path config = out_dir_.string() + "_toy.json";
  std::ofstream(config) << R"({"steps": 5, "n_per_class": 60})";
  EXPECT_EQ(run({"train-toy", "--config", config.string()}), kExitOk);
  EXPECT_EQ(read_json("train-toy.json")["steps"], 5);
  fs::remove(config);
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(run({"--bogus-flag", "audit", fixture("id_k4.jsonl"),
                 fixture("ood_k4.jsonl")}),
            kExitError);
  EXPECT_EQ(run({"frobnicate"}), kExitError);
  EXPECT_EQ(run({}), kExitError);
  EXPECT_EQ(run({"metrics", fixture("id_k4.jsonl"), fixture("ood_k4.jsonl"),
                 "--metric", "auroc"}),
            kExitError);
}

TEST_F(CliTest, WrongGroupTagIsAnError) {
  EXPECT_EQ(run({"audit", fixture("ood_k4.jsonl"), fixture("id_k4.jsonl")}),
            kExitError);
  EXPECT_NE(err_.str().find("tagged"), std::string::npos);
}

TEST_F(CliTest, MissingFileIsAnError) {
  EXPECT_EQ(run({"audit", "/nonexistent/a.jsonl", fixture("ood_k4.jsonl")}),
            kExitError);
}

TEST_F(CliTest, HelpExitsZero) {
  EXPECT_EQ(run({"--help"}), kExitOk);
}

}  // namespace
}  // namespace edl
