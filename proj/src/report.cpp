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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <fmt/format.h>

#include "edl/errors.hpp"

namespace edl {
namespace {

using nlohmann::ordered_json;

constexpr double kPanelWidth = 290.0;
constexpr double kPanelHeight = 240.0;
constexpr double kPanelStride = 370.0;
constexpr double kMarginLeft = 60.0;
constexpr double kMarginTop = 50.0;

std::string full(double v) { return fmt::format("{:.17g}", v); }

std::string fixed3(double v) {
  const std::string s = fmt::format("{:.3f}", v);
  return s == "-0.000" ? "0.000" : s;
}

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

bool is_expansion(const ExperimentTable& table) {
  return table.name.rfind("expansion", 0) == 0;
}

struct Series {
  std::string label;
  std::vector<const DetectionRow*> points;
};

std::vector<Series> sweep_series(const ExperimentTable& table) {
  std::vector<Series> series;
  if (table.rows.empty()) return series;
  const DetectionRow* baseline = &table.rows.front();
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    const DetectionRow& row = table.rows[i];
    auto it = std::find_if(series.begin(), series.end(), [&](const Series& s) {
      return s.label == row.condition;
    });
    if (it == series.end()) {
      series.push_back({row.condition, {baseline}});
      it = series.end() - 1;
    }
    it->points.push_back(&row);
  }
  if (series.empty()) series.push_back({baseline->condition, {baseline}});
  return series;
}

const char* series_colour(std::string_view label) {
  if (label == "OOD-only expansion") return "#d62728";
  if (label == "Matched expansion") return "#1f77b4";
  return "#2ca02c";
}

ordered_json optional_k(std::optional<std::size_t> k) {
  return k ? ordered_json(*k) : ordered_json("MIXED");
}

std::optional<std::size_t> k_from_json(const ordered_json& v) {
  if (v.is_number_integer()) return v.get<std::size_t>();
  return std::nullopt;
}

}  // namespace

const char* table_format_extension(TableFormat format) {
  switch (format) {
    case TableFormat::kMarkdown:
      return "md";
    case TableFormat::kCsv:
      return "csv";
    case TableFormat::kJson:
      return "json";
  }
  return "txt";
}

std::optional<TableFormat> parse_table_format(std::string_view name) {
  if (name == "md") return TableFormat::kMarkdown;
  if (name == "csv") return TableFormat::kCsv;
  if (name == "json") return TableFormat::kJson;
  return std::nullopt;
}

std::string format_delta(double delta) {
  const std::string magnitude = fixed3(std::abs(delta));
  if (magnitude == "0.000") return magnitude;
  return (delta > 0.0 ? "+" : "-") + magnitude;
}

ordered_json warning_to_json(const Warning& warning) {
  ordered_json doc;
  doc["kind"] = warning.kind;
  doc["experiment"] = warning.experiment;
  doc["k_id"] = optional_k(warning.k_id);
  doc["k_ood"] = optional_k(warning.k_ood);
  doc["message"] = warning.message;
  return doc;
}

ordered_json table_to_json(const ExperimentTable& table) {
  ordered_json doc;
  doc["name"] = table.name;
  doc["metric"] = metric_name(table.metric);
  doc["orientation"] = orientation_name(table.orientation);
  ordered_json rows = ordered_json::array();
  for (const DetectionRow& row : table.rows) {
    ordered_json r;
    r["condition"] = row.condition;
    r["k_id"] = row.k_id;
    r["k_ood"] = row.k_ood;
    r["auroc"] = row.result.auroc;
    r["delta_auroc"] = row.delta_auroc;
    r["aupr"] = row.result.aupr;
    r["delta_aupr"] = row.delta_aupr;
    r["aupr_baseline"] = row.result.aupr_baseline;
    r["aupr_opposite"] = row.result.aupr_opposite;
    r["n_positive"] = row.result.n_positive;
    r["n_negative"] = row.result.n_negative;
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  ordered_json warnings = ordered_json::array();
  for (const Warning& w : table.warnings) warnings.push_back(warning_to_json(w));
  doc["warnings"] = std::move(warnings);
  return doc;
}

ExperimentTable table_from_json(const ordered_json& doc) {
  try {
    ExperimentTable table;
    table.name = doc.at("name").get<std::string>();
    const auto metric = parse_metric(doc.at("metric").get<std::string>());
    const auto orientation =
        parse_orientation(doc.at("orientation").get<std::string>());
    if (!metric || !orientation) {
      throw ValidationError("unknown metric or orientation");
    }
    table.metric = *metric;
    table.orientation = *orientation;
    for (const ordered_json& r : doc.at("rows")) {
      DetectionRow row;
      row.condition = r.at("condition").get<std::string>();
      row.k_id = r.at("k_id").get<std::size_t>();
      row.k_ood = r.at("k_ood").get<std::size_t>();
      row.result.auroc = r.at("auroc").get<double>();
      row.delta_auroc = r.at("delta_auroc").get<double>();
      row.result.aupr = r.at("aupr").get<double>();
      row.delta_aupr = r.at("delta_aupr").get<double>();
      row.result.aupr_baseline = r.at("aupr_baseline").get<double>();
      row.result.aupr_opposite = r.at("aupr_opposite").get<double>();
      row.result.n_positive = r.at("n_positive").get<std::size_t>();
      row.result.n_negative = r.at("n_negative").get<std::size_t>();
      row.result.metric_name = metric_name(table.metric);
      row.result.orientation = orientation_name(table.orientation);
      row.result.k_id = row.k_id;
      row.result.k_ood = row.k_ood;
      table.rows.push_back(std::move(row));
    }
    if (doc.contains("warnings")) {
      for (const ordered_json& w : doc.at("warnings")) {
        table.warnings.push_back(Warning{
            w.at("kind").get<std::string>(),
            w.at("experiment").get<std::string>(), k_from_json(w.at("k_id")),
            k_from_json(w.at("k_ood")), w.at("message").get<std::string>()});
      }
    }
    return table;
  } catch (const ordered_json::exception& e) {
    throw ValidationError(fmt::format("malformed result table: {}", e.what()));
  }
}

std::string render_table(const ExperimentTable& table, TableFormat format) {
  if (format == TableFormat::kJson) return table_to_json(table).dump(2) + "\n";

  std::string out;
  if (format == TableFormat::kCsv) {
    out +=
        "condition,k_id,k_ood,auroc,delta_auroc,aupr,delta_aupr,"
        "aupr_baseline,aupr_opposite,n_positive,n_negative\n";
    for (const DetectionRow& row : table.rows) {
      out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", row.condition,
                         row.k_id, row.k_ood, full(row.result.auroc),
                         full(row.delta_auroc), full(row.result.aupr),
                         full(row.delta_aupr), full(row.result.aupr_baseline),
                         full(row.result.aupr_opposite), row.result.n_positive,
                         row.result.n_negative);
    }
    return out;
  }

  out += fmt::format("## {}\n\n", table.name);
  out += fmt::format("Scores: {} ({}).\n\n", metric_name(table.metric),
                     orientation_name(table.orientation));
  out += "| Condition | K_ID | K_OOD | AUROC | Δ | AUPR | Δ |\n";
  out += "| --- | ---: | ---: | ---: | ---: | ---: | ---: |\n";
  for (const DetectionRow& row : table.rows) {
    out += fmt::format("| {} | {} | {} | {} | {} | {} | {} |\n", row.condition,
                       row.k_id, row.k_ood, fixed3(row.result.auroc),
                       format_delta(row.delta_auroc), fixed3(row.result.aupr),
                       format_delta(row.delta_aupr));
  }
  const bool shared_baseline = std::all_of(
      table.rows.begin(), table.rows.end(), [&](const DetectionRow& row) {
        return row.result.n_positive == table.rows.front().result.n_positive &&
               row.result.n_negative == table.rows.front().result.n_negative;
      });
  if (shared_baseline && !table.rows.empty()) {
    const DetectionResult& r = table.rows.front().result;
    out += fmt::format("\nAUPR_base (ID ratio): {} (n+={}, n-={})\n",
                       fixed3(r.aupr_baseline), r.n_positive, r.n_negative);
  } else {
    out += "\nAUPR_base (ID ratio):\n";
    for (const DetectionRow& row : table.rows) {
      out += fmt::format("- {}: {} (n+={}, n-={})\n", row.condition,
                         fixed3(row.result.aupr_baseline),
                         row.result.n_positive, row.result.n_negative);
    }
  }
  if (!table.warnings.empty()) {
    out += fmt::format(
        "\n**Warning:** {} comparison(s) in this table use mismatched class "
        "counts; see warnings.jsonl.\n",
        table.warnings.size());
  }
  return out;
}

std::string render_sweep_csv(const ExperimentTable& table) {
  std::string out = "series,k,auroc,aupr\n";
  for (const Series& s : sweep_series(table)) {
    for (const DetectionRow* row : s.points) {
      out += fmt::format("{},{},{},{}\n", s.label, row->k_ood,
                         full(row->result.auroc), full(row->result.aupr));
    }
  }
  return out;
}

std::string render_sweep_svg(const ExperimentTable& table) {
  const std::vector<Series> series = sweep_series(table);
  std::size_t k_lo = 0;
  std::size_t k_hi = 0;
  bool first = true;
  for (const Series& s : series) {
    for (const DetectionRow* row : s.points) {
      k_lo = first ? row->k_ood : std::min(k_lo, row->k_ood);
      k_hi = first ? row->k_ood : std::max(k_hi, row->k_ood);
      first = false;
    }
  }
  double x_lo = static_cast<double>(k_lo);
  double x_hi = static_cast<double>(k_hi);
  if (x_hi <= x_lo) {
    x_lo -= 1.0;
    x_hi += 1.0;
  }
  const double width = kMarginLeft + 2.0 * kPanelStride;
  const double height = kMarginTop + kPanelHeight + 80.0;

  std::string svg;
  svg += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" "
      "height=\"{:.0f}\" viewBox=\"0 0 {:.0f} {:.0f}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n",
      width, height, width, height);
  svg += fmt::format("<title>{}</title>\n", xml_escape(table.name));
  svg += "<desc>\n" + xml_escape(render_sweep_csv(table)) + "</desc>\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (int panel = 0; panel < 2; ++panel) {
    const bool roc = panel == 0;
    const double ox = kMarginLeft + panel * kPanelStride;
    const double oy = kMarginTop;
    auto px = [&](double k) {
      return ox + (k - x_lo) / (x_hi - x_lo) * kPanelWidth;
    };
    auto py = [&](double v) { return oy + (1.0 - v) * kPanelHeight; };

    svg += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" "
        "font-size=\"14\">{} vs K</text>\n",
        ox + kPanelWidth / 2.0, oy - 20.0, roc ? "AUROC" : "AUPR");
    svg += fmt::format(
        "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" "
        "fill=\"none\" stroke=\"black\"/>\n",
        ox, oy, kPanelWidth, kPanelHeight);
    for (int t = 0; t <= 4; ++t) {
      const double v = 0.25 * t;
      svg += fmt::format(
          "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" "
          "stroke=\"#dddddd\"/>\n",
          ox, py(v), ox + kPanelWidth, py(v));
      svg += fmt::format(
          "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.2f}</text>\n",
          ox - 6.0, py(v) + 4.0, v);
    }
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
      svg += fmt::format(
          "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n",
          px(static_cast<double>(k)), oy + kPanelHeight + 18.0, k);
    }
    svg += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">K "
        "(evaluated classes)</text>\n",
        ox + kPanelWidth / 2.0, oy + kPanelHeight + 38.0);

    for (const Series& s : series) {
      const char* colour = series_colour(s.label);
      std::string points;
      for (const DetectionRow* row : s.points) {
        const double v = roc ? row->result.auroc : row->result.aupr;
        if (!points.empty()) points += ' ';
        points += fmt::format("{:.2f},{:.2f}",
                              px(static_cast<double>(row->k_ood)), py(v));
      }
      svg += fmt::format(
          "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" "
          "stroke-width=\"2\"/>\n",
          points, colour);
      for (const DetectionRow* row : s.points) {
        const double v = roc ? row->result.auroc : row->result.aupr;
        svg += fmt::format(
            "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3.5\" fill=\"{}\"/>\n",
            px(static_cast<double>(row->k_ood)), py(v), colour);
      }
    }
  }

  double legend_x = kMarginLeft;
  const double legend_y = kMarginTop + kPanelHeight + 62.0;
  for (const Series& s : series) {
    svg += fmt::format(
        "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"12\" height=\"12\" "
        "fill=\"{}\"/>\n",
        legend_x, legend_y - 10.0, series_colour(s.label));
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n",
                       legend_x + 18.0, legend_y, xml_escape(s.label));
    legend_x += 200.0;
  }
  svg += "</svg>\n";
  return svg;
}

std::string render_audit(const AuditReport& report) {
  auto k_text = [](std::optional<std::size_t> k) {
    return k ? std::to_string(*k) : std::string("MIXED");
  };
  std::string out = fmt::format("audit: {} (K_ID={}, K_OOD={})\n",
                                report.pass ? "PASS" : "FAIL",
                                k_text(report.k_id), k_text(report.k_ood));
  for (const Offender& o : report.offenders) {
    out += fmt::format("  offender {} ({}): K={}\n", o.id, group_name(o.group),
                       o.k);
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error(
        fmt::format("cannot write '{}'", path.string()));
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw std::runtime_error(
        fmt::format("error while writing '{}'", path.string()));
  }
}

std::vector<std::filesystem::path> emit_report(
    std::span<const ExperimentTable> results,
    const std::filesystem::path& out_dir, TableFormat format) {
  if (results.empty()) throw ValidationError("no results to report");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw std::runtime_error(fmt::format("cannot create '{}': {}",
                                         out_dir.string(), ec.message()));
  }
  std::vector<std::filesystem::path> written;
  auto write = [&](const std::string& file, const std::string& text) {
    const std::filesystem::path path = out_dir / file;
    write_text_file(path, text);
    written.push_back(path);
  };
  for (const ExperimentTable& table : results) {
    write(table.name + ".json", render_table(table, TableFormat::kJson));
    if (format != TableFormat::kJson) {
      write(fmt::format("{}.{}", table.name, table_format_extension(format)),
            render_table(table, format));
    }
    if (is_expansion(table)) {
      write(table.name + ".svg", render_sweep_svg(table));
      write(table.name + ".sweep.csv", render_sweep_csv(table));
    }
  }
  return written;
}

void append_warnings(const std::filesystem::path& out_dir,
                     std::span<const Warning> warnings) {
  if (warnings.empty()) return;
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path path = out_dir / "warnings.jsonl";
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) {
    throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  }
  for (const Warning& w : warnings) out << warning_to_json(w).dump() << '\n';
}

}  // namespace edl
