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

#include "edl/records_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "edl/errors.hpp"
#include "edl/losses.hpp"

namespace edl {
namespace {

using nlohmann::json;

std::vector<double> number_array(const json& value, const char* field,
                                 std::size_t line_number) {
  if (!value.is_array()) {
    throw ParseError(fmt::format("'{}' must be an array of numbers", field),
                     line_number);
  }
  std::vector<double> out;
  out.reserve(value.size());
  for (const json& v : value) {
    if (!v.is_number()) {
      throw ParseError(fmt::format("'{}' must be an array of numbers", field),
                       line_number);
    }
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

EvidenceRecord parse_record_line(const std::string& line,
                                 std::size_t line_number) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("malformed JSON ({})", e.what()), line_number);
  }
  if (!doc.is_object()) throw ParseError("expected a JSON object", line_number);

  EvidenceRecord record;
  if (!doc.contains("id") || !doc["id"].is_string()) {
    throw ParseError("missing string field 'id'", line_number);
  }
  record.id = doc["id"].get<std::string>();

  if (!doc.contains("group") || !doc["group"].is_string()) {
    throw ParseError("missing string field 'group'", line_number);
  }
  const std::string group = doc["group"].get<std::string>();
  if (group == "id") {
    record.group = Group::kId;
  } else if (group == "ood") {
    record.group = Group::kOod;
  } else {
    throw ParseError(
        fmt::format("group must be \"id\" or \"ood\", got \"{}\"", group),
        line_number);
  }

  if (!doc.contains("classes") || !doc["classes"].is_array()) {
    throw ParseError("missing array field 'classes'", line_number);
  }
  for (const json& name : doc["classes"]) {
    if (!name.is_string()) {
      throw ParseError("'classes' must contain strings", line_number);
    }
    record.class_names.push_back(name.get<std::string>());
  }

  const bool has_evidence = doc.contains("evidence");
  const bool has_logits = doc.contains("logits");
  if (has_evidence == has_logits) {
    throw ParseError("exactly one of 'evidence' or 'logits' is required",
                     line_number);
  }
  if (has_evidence) {
    record.evidence = number_array(doc["evidence"], "evidence", line_number);
  } else {
    const std::vector<double> logits =
        number_array(doc["logits"], "logits", line_number);
    try {
      record.evidence = softplus_evidence(logits);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line_number);
    }
  }
  if (record.evidence.size() != record.class_names.size()) {
    throw ParseError(fmt::format("{} values for {} classes",
                                 record.evidence.size(),
                                 record.class_names.size()),
                     line_number);
  }

  if (doc.contains("label") && !doc["label"].is_null()) {
    const json& label = doc["label"];
    if (!label.is_number_integer() || label.get<long long>() < 0) {
      throw ParseError("'label' must be a non-negative integer", line_number);
    }
    record.gold_label = label.get<std::size_t>();
  }

  try {
    record.validate();
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), line_number);
  }
  return record;
}

std::vector<EvidenceRecord> parse_records(std::istream& in) {
  std::vector<EvidenceRecord> records;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    records.push_back(parse_record_line(line, line_number));
  }
  return records;
}

std::vector<EvidenceRecord> parse_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error(
        fmt::format("cannot open record file '{}'", path.string()));
  }
  return parse_records(in);
}

std::string serialize_record(const EvidenceRecord& record) {
  json doc;
  doc["id"] = record.id;
  doc["group"] = group_name(record.group);
  doc["classes"] = record.class_names;
  doc["evidence"] = record.evidence;
  if (record.gold_label) doc["label"] = *record.gold_label;
  return doc.dump();
}

void write_records(std::ostream& out, std::span<const EvidenceRecord> records) {
  for (const EvidenceRecord& r : records) out << serialize_record(r) << '\n';
}

void write_records(const std::filesystem::path& path,
                   std::span<const EvidenceRecord> records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error(
        fmt::format("cannot write record file '{}'", path.string()));
  }
  write_records(out, records);
  if (!out) {
    throw std::runtime_error(
        fmt::format("error while writing '{}'", path.string()));
  }
}

}  // namespace edl
