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

// Command-line front end. Exit codes: 0 success, 1 usage or runtime error,
// 2 class-cardinality audit failure.

#include <iosfwd>
#include <string>
#include <vector>

namespace edl {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitAuditFailure = 2;

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

// argv[0] is supplied internally.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace edl
