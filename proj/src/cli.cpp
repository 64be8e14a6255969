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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "edl/cardinality.hpp"
#include "edl/errors.hpp"
#include "edl/records_io.hpp"
#include "edl/report.hpp"
#include "edl/synthetic.hpp"
#include "edl/toy_model.hpp"

namespace edl {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::string out_dir = "results";
  std::string format = "md";
  bool out_given = false;
};

TableFormat table_format(const GlobalOptions& global) {
  return parse_table_format(global.format).value_or(TableFormat::kMarkdown);
}

std::vector<EvidenceRecord> load_group(const std::string& path, Group expected) {
  std::vector<EvidenceRecord> records = parse_records(fs::path(path));
  for (const EvidenceRecord& r : records) {
    if (r.group != expected) {
      throw ValidationError(fmt::format(
          "{}: record '{}' is tagged \"{}\" but this file is the {} input",
          path, r.id, group_name(r.group), group_name(expected)));
    }
  }
  if (records.empty()) {
    throw ValidationError(fmt::format("{}: no records", path));
  }
  return records;
}

json load_config(const std::string& path,
                 std::initializer_list<const char*> allowed) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open config '{}'", path));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(fmt::format("{}: malformed JSON ({})", path, e.what()));
  }
  if (!doc.is_object()) {
    throw ValidationError(fmt::format("{}: config must be a JSON object", path));
  }
  for (const auto& [key, value] : doc.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
          return key == a;
        }) == allowed.end()) {
      throw ValidationError(fmt::format("{}: unknown config key '{}'", path, key));
    }
  }
  return doc;
}

template <typename T>
T config_value(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(fmt::format("config key '{}' has the wrong type", key));
  }
}

void publish(const GlobalOptions& global, const ExperimentTable& table,
             std::ostream& out) {
  const std::vector<ExperimentTable> tables{table};
  emit_report(tables, global.out_dir, table_format(global));
  append_warnings(global.out_dir, table.warnings);
  out << render_table(table, TableFormat::kMarkdown);
}

int cmd_audit(const GlobalOptions& global, const std::string& id_path,
              const std::string& ood_path, std::ostream& out) {
  const auto id = load_group(id_path, Group::kId);
  const auto ood = load_group(ood_path, Group::kOod);
  const AuditReport report = audit_cardinality(id, ood);
  out << render_audit(report);

  ordered_json doc;
  doc["verdict"] = report.pass ? "PASS" : "FAIL";
  doc["k_id"] = report.k_id ? ordered_json(*report.k_id) : ordered_json("MIXED");
  doc["k_ood"] = report.k_ood ? ordered_json(*report.k_ood) : ordered_json("MIXED");
  ordered_json offenders = ordered_json::array();
  for (const Offender& o : report.offenders) {
    offenders.push_back({{"id", o.id}, {"group", group_name(o.group)}, {"k", o.k}});
  }
  doc["offenders"] = std::move(offenders);
  fs::create_directories(global.out_dir);
  write_text_file(fs::path(global.out_dir) / "audit.json", doc.dump(2) + "\n");
  return report.pass ? kExitOk : kExitAuditFailure;
}

int cmd_metrics(const GlobalOptions& global, const std::string& id_path,
                const std::string& ood_path, ScoreMetric metric,
                Orientation orientation, bool allow_mismatch, std::ostream& out) {
  const auto id = load_group(id_path, Group::kId);
  const auto ood = load_group(ood_path, Group::kOod);
  const DetectionRun run =
      run_detection(id, ood, metric, orientation, allow_mismatch);

  ExperimentTable table;
  table.name = fmt::format("metrics-{}", metric_name(metric));
  table.metric = metric;
  table.orientation = orientation;
  DetectionRow row;
  row.condition = run.audit.pass ? "Evaluated" : "Evaluated (mismatched K)";
  row.k_id = run.result.k_id;
  row.k_ood = run.result.k_ood;
  row.result = run.result;
  table.rows.push_back(row);
  table.warnings = run.warnings;
  publish(global, table, out);

  if (const auto calibration = calibration_summary(id)) {
    ordered_json doc;
    doc["n"] = calibration->n;
    doc["accuracy"] = calibration->accuracy;
    doc["nll"] = calibration->nll;
    doc["ece_15_bins"] = calibration->ece;
    write_text_file(fs::path(global.out_dir) / "calibration.json",
                    doc.dump(2) + "\n");
    out << fmt::format(
        "\nID calibration (n={}): accuracy {:.3f}, NLL {:.3f}, ECE(15) {:.3f}\n",
        calibration->n, calibration->accuracy, calibration->nll,
        calibration->ece);
  }
  return kExitOk;
}

ExpansionSpec make_expansion_spec(ExpansionMode mode, std::size_t base_k,
                                  std::size_t k_max,
                                  const std::string& evidence) {
  ExpansionSpec spec;
  spec.mode = mode;
  if (k_max <= base_k) {
    throw ValidationError(
        fmt::format("--k-max {} must exceed the base K={}", k_max, base_k));
  }
  for (std::size_t k = base_k + 1; k <= k_max; ++k) spec.k_targets.push_back(k);
  if (evidence == "invariant") {
    spec.per_record_invariance = true;
  } else {
    try {
      std::size_t used = 0;
      spec.appended_evidence = std::stod(evidence, &used);
      if (used != evidence.size()) throw std::invalid_argument(evidence);
    } catch (const std::logic_error&) {
      throw ValidationError(fmt::format(
          "--evidence must be a number or \"invariant\", got '{}'", evidence));
    }
  }
  return spec;
}

int cmd_expand(const GlobalOptions& global, const std::string& id_path,
               const std::string& ood_path, ExpansionMode mode,
               std::size_t k_max, const std::string& evidence,
               ScoreMetric metric, Orientation orientation, std::ostream& out) {
  const auto id = load_group(id_path, Group::kId);
  const auto ood = load_group(ood_path, Group::kOod);
  const AuditReport audit = audit_cardinality(id, ood);
  if (!audit.pass) {
    throw AuditError(
        "baseline class counts differ; run `audit` and fix the inputs first");
  }
  const ExpansionSpec spec = make_expansion_spec(mode, *audit.k_id, k_max, evidence);
  publish(global, run_expansion_experiment(id, ood, spec, metric, orientation),
          out);
  return kExitOk;
}

int cmd_restrict(const GlobalOptions& global, const std::string& id_path,
                 const std::string& ood_path, std::size_t removed,
                 ScoreMetric metric, Orientation orientation, std::ostream& out) {
  const auto id = load_group(id_path, Group::kId);
  const auto ood = load_group(ood_path, Group::kOod);
  const RestrictionResult result =
      run_restriction_experiment(ood, removed, id, metric, orientation);
  publish(global, result.table, out);
  out << fmt::format("\nExcluded {} OOD record(s) whose gold label was class {}.\n",
                     result.excluded_ids.size(), removed);
  return kExitOk;
}

int cmd_simulate(const GlobalOptions& global, const std::string& config_path,
                 std::ostream& out) {
  const json doc = load_config(
      config_path, {"n_id", "n_ood", "k", "id_correct_shape", "id_wrong_shape",
                    "ood_shape", "scale", "seed", "k_max", "appended_evidence",
                    "metrics"});
  PopulationParams params;
  params.n_id = config_value(doc, "n_id", params.n_id);
  params.n_ood = config_value(doc, "n_ood", params.n_ood);
  params.k = config_value(doc, "k", params.k);
  params.id_correct_shape = config_value(doc, "id_correct_shape", params.id_correct_shape);
  params.id_wrong_shape = config_value(doc, "id_wrong_shape", params.id_wrong_shape);
  params.ood_shape = config_value(doc, "ood_shape", params.ood_shape);
  params.scale = config_value(doc, "scale", params.scale);
  params.seed = global.seed.value_or(config_value(doc, "seed", params.seed));
  const std::size_t k_max = config_value(doc, "k_max", params.k + 4);
  const double appended = config_value(doc, "appended_evidence", 0.0);
  const auto metric_names = config_value(doc, "metrics",
                                         std::vector<std::string>{"vacuity"});

  const Population population = generate_evidence_population(params);
  fs::create_directories(global.out_dir);
  write_records(fs::path(global.out_dir) / "id.jsonl", population.id_records);
  write_records(fs::path(global.out_dir) / "ood.jsonl", population.ood_records);

  for (const std::string& name : metric_names) {
    const auto metric = parse_metric(name);
    if (!metric) throw ValidationError(fmt::format("unknown metric '{}'", name));
    ExpansionSpec spec =
        make_expansion_spec(ExpansionMode::kOodOnly, params.k, k_max, "0");
    spec.appended_evidence = appended;
    const ExperimentTable ood_only = run_expansion_experiment(
        population.id_records, population.ood_records, spec, *metric);
    spec.mode = ExpansionMode::kMatched;
    const ExperimentTable matched = run_expansion_experiment(
        population.id_records, population.ood_records, spec, *metric);
    publish(global, combine_expansion_tables(ood_only, matched), out);
    out << '\n';
  }
  return kExitOk;
}

int cmd_train_toy(const GlobalOptions& global, const std::string& config_path,
                  std::ostream& out) {
  const json doc = load_config(
      config_path, {"mode", "steps", "learning_rate", "lambda",
                    "lambda_ramp_steps", "beta", "seed", "sigma_mult",
                    "n_per_class", "separation", "rbf_grid"});
  TrainConfig config;
  const std::string mode = config_value<std::string>(doc, "mode", "edl");
  if (mode == "edl") {
    config.mode = LossMode::kEdl;
  } else if (mode == "ib-edl") {
    config.mode = LossMode::kIbEdl;
  } else {
    throw ValidationError(fmt::format("mode must be edl or ib-edl, got '{}'", mode));
  }
  config.steps = config_value(doc, "steps", config.steps);
  config.learning_rate = config_value(doc, "learning_rate", config.learning_rate);
  config.lambda.value = config_value(doc, "lambda", config.lambda.value);
  config.lambda.ramp_steps =
      config_value(doc, "lambda_ramp_steps", config.lambda.ramp_steps);
  config.beta = config_value(doc, "beta", config.beta);
  config.seed = global.seed.value_or(config_value(doc, "seed", config.seed));
  config.sigma_mult = config_value(doc, "sigma_mult", config.sigma_mult);
  config.rbf_grid = config_value(doc, "rbf_grid", config.rbf_grid);
  const std::size_t n_per_class = config_value<std::size_t>(doc, "n_per_class", 250);
  const double separation = config_value(doc, "separation", 6.0);

  const auto data = generate_toy_classification(n_per_class, separation, config.seed);
  const TrainedToyModel model = train_toy(config, data);
  const TrainSummary& s = model.summary;

  ordered_json summary;
  summary["mode"] = loss_mode_name(config.mode);
  summary["steps"] = s.steps;
  summary["seed"] = config.seed;
  summary["final_loss"] = s.final_loss;
  summary["train_accuracy"] = s.train_accuracy;
  summary["mean_id_vacuity"] = s.mean_id_vacuity;
  summary["mean_far_vacuity"] = s.mean_far_vacuity;
  summary["far_probe_radius"] = s.far_probe_radius;
  fs::create_directories(global.out_dir);
  write_text_file(fs::path(global.out_dir) / "train-toy.json",
                  summary.dump(2) + "\n");
  out << fmt::format(
      "train-toy ({}): {} steps, final loss {:.4f}, accuracy {:.3f}, mean ID "
      "vacuity {:.3f}, mean far-OOD vacuity {:.3f}\n",
      loss_mode_name(config.mode), s.steps, s.final_loss, s.train_accuracy,
      s.mean_id_vacuity, s.mean_far_vacuity);
  return kExitOk;
}

int cmd_report(const GlobalOptions& global, const std::string& results_dir,
               std::ostream& out) {
  if (!fs::is_directory(results_dir)) {
    throw std::runtime_error(fmt::format("'{}' is not a directory", results_dir));
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(results_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<ExperimentTable> tables;
  for (const fs::path& file : files) {
    std::ifstream in(file);
    ordered_json doc;
    try {
      doc = ordered_json::parse(in);
    } catch (const ordered_json::parse_error&) {
      continue;
    }
    if (!doc.is_object() || !doc.contains("rows")) continue;
    tables.push_back(table_from_json(doc));
  }
  if (tables.empty()) {
    throw ValidationError(
        fmt::format("no result tables found in '{}'", results_dir));
  }
  const fs::path out_dir = global.out_given ? fs::path(global.out_dir)
                                            : fs::path(results_dir);
  emit_report(tables, out_dir, table_format(global));
  std::string summary = "# Results\n\n";
  for (const ExperimentTable& t : tables) {
    summary += render_table(t, TableFormat::kMarkdown) + "\n";
  }
  write_text_file(out_dir / "summary.md", summary);
  out << summary;
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Class-cardinality audit and evidential uncertainty toolkit",
               "edl_cardinality"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "Override the RNG seed");
  auto* out_opt = app.add_option("--out", global.out_dir, "Output directory");
  app.add_option("--format", global.format, "Table format")
      ->check(CLI::IsMember({"md", "csv", "json"}));

  const std::vector<std::string> metrics{"vacuity", "mp", "entropy"};
  const std::vector<std::string> orientations{"id-pos", "ood-pos"};
  std::string id_path;
  std::string ood_path;
  std::string metric = "vacuity";
  std::string orientation = "id-pos";

  auto* audit = app.add_subcommand("audit", "Check that ID and OOD share one K");
  audit->add_option("id", id_path, "ID record file")->required();
  audit->add_option("ood", ood_path, "OOD record file")->required();

  bool allow_mismatch = false;
  auto* metrics_cmd = app.add_subcommand("metrics", "AUROC/AUPR of ID vs OOD");
  metrics_cmd->add_option("id", id_path)->required();
  metrics_cmd->add_option("ood", ood_path)->required();
  metrics_cmd->add_option("--metric", metric)->check(CLI::IsMember(metrics));
  metrics_cmd->add_option("--orientation", orientation)
      ->check(CLI::IsMember(orientations));
  metrics_cmd->add_flag("--allow-mismatch", allow_mismatch,
                        "Score even when K_ID != K_OOD (emits a warning)");

  std::string mode;
  std::size_t k_max = 0;
  std::string evidence = "0";
  auto* expand = app.add_subcommand("expand", "Class-expansion sweep");
  expand->add_option("id", id_path)->required();
  expand->add_option("ood", ood_path)->required();
  expand->add_option("--mode", mode)
      ->required()
      ->check(CLI::IsMember({"ood-only", "matched"}));
  expand->add_option("--k-max", k_max)->required();
  expand->add_option("--evidence", evidence,
                     "Appended evidence value, or \"invariant\" for S/K - 1");
  expand->add_option("--metric", metric)->check(CLI::IsMember(metrics));
  expand->add_option("--orientation", orientation)
      ->check(CLI::IsMember(orientations));

  std::size_t removed = 0;
  auto* restrict_cmd =
      app.add_subcommand("restrict", "Drop one class from the OOD records");
  restrict_cmd->add_option("id", id_path)->required();
  restrict_cmd->add_option("ood", ood_path)->required();
  restrict_cmd->add_option("--remove-class", removed)->required();
  restrict_cmd->add_option("--metric", metric)->check(CLI::IsMember(metrics));
  restrict_cmd->add_option("--orientation", orientation)
      ->check(CLI::IsMember(orientations));

  std::string config_path;
  auto* simulate = app.add_subcommand("simulate", "Synthetic population sweep");
  simulate->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
  auto* train = app.add_subcommand("train-toy", "Train the toy evidential model");
  train->add_option("--config", config_path)->required()->check(CLI::ExistingFile);

  std::string results_dir;
  auto* report = app.add_subcommand("report", "Re-render saved result tables");
  report->add_option("results-dir", results_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }
  if (seed_opt->count() > 0) global.seed = seed_value;
  global.out_given = out_opt->count() > 0;

  const ScoreMetric score_metric = *parse_metric(metric);
  const Orientation score_orientation = *parse_orientation(orientation);
  try {
    if (*audit) return cmd_audit(global, id_path, ood_path, out);
    if (*metrics_cmd) {
      return cmd_metrics(global, id_path, ood_path, score_metric,
                         score_orientation, allow_mismatch, out);
    }
    if (*expand) {
      return cmd_expand(global, id_path, ood_path, *parse_expansion_mode(mode),
                        k_max, evidence, score_metric, score_orientation, out);
    }
    if (*restrict_cmd) {
      return cmd_restrict(global, id_path, ood_path, removed, score_metric,
                          score_orientation, out);
    }
    if (*simulate) return cmd_simulate(global, config_path, out);
    if (*train) return cmd_train_toy(global, config_path, out);
    if (*report) return cmd_report(global, results_dir, out);
  } catch (const AuditError& e) {
    err << "audit failure: " << e.what() << '\n';
    return kExitAuditFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  err << app.help();
  return kExitError;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  std::vector<const char*> argv{"edl_cardinality"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace edl
