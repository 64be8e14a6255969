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

// Line-delimited prediction records, one JSON object per line:
//
//   {"id": "q1", "group": "id", "classes": ["A","B","C","D"],
//    "evidence": [12, 8, 9, 7], "label": 0}
//
// "group" is "id" or "ood". Exactly one of "evidence" (non-negative) or
// "logits" (turned into evidence by softplus) must be present, with one entry
// per class. "label" is optional. Blank lines are skipped.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "edl/dirichlet.hpp"

namespace edl {

// Throws ParseError carrying the 1-based line number.
EvidenceRecord parse_record_line(const std::string& line, std::size_t line_number);

std::vector<EvidenceRecord> parse_records(std::istream& in);

// Throws std::runtime_error when the file cannot be opened.
std::vector<EvidenceRecord> parse_records(const std::filesystem::path& path);

// Evidence form, shortest round-trip float formatting.
std::string serialize_record(const EvidenceRecord& record);

void write_records(std::ostream& out, std::span<const EvidenceRecord> records);
void write_records(const std::filesystem::path& path,
                   std::span<const EvidenceRecord> records);

}  // namespace edl
