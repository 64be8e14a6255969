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

// Rendering and writing of experiment tables, sweep plots and warnings.
//
// Human tables round to 3 decimals; CSV and JSON keep full precision (17
// significant digits). Output bytes depend only on the inputs.

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "edl/cardinality.hpp"

namespace edl {

enum class TableFormat { kMarkdown, kCsv, kJson };

const char* table_format_extension(TableFormat format);  // md | csv | json
std::optional<TableFormat> parse_table_format(std::string_view name);

// Signed delta at 3 decimals; anything that rounds to zero prints "0.000".
std::string format_delta(double delta);

nlohmann::ordered_json table_to_json(const ExperimentTable& table);
ExperimentTable table_from_json(const nlohmann::ordered_json& doc);

std::string render_table(const ExperimentTable& table, TableFormat format);

// Rows of an expansion sweep as CSV: series, k, auroc, aupr.
std::string render_sweep_csv(const ExperimentTable& table);

// Two panels, AUROC vs K and AUPR vs K, one polyline per series. Every series
// starts at the baseline point. The sweep CSV is embedded in <desc>.
std::string render_sweep_svg(const ExperimentTable& table);

std::string render_audit(const AuditReport& report);

nlohmann::ordered_json warning_to_json(const Warning& warning);

// Writes <name>.json for every table plus <name>.<md|csv> for the requested
// human format; expansion tables additionally get <name>.svg and
// <name>.sweep.csv. Returns the written paths in order.
std::vector<std::filesystem::path> emit_report(
    std::span<const ExperimentTable> results,
    const std::filesystem::path& out_dir, TableFormat format);

// Appends one JSON line per warning to <out_dir>/warnings.jsonl.
void append_warnings(const std::filesystem::path& out_dir,
                     std::span<const Warning> warnings);

void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace edl
