// Copyright 2026 The qmsroot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "qmsroot/problem.hpp"

namespace qmsroot {

inline constexpr const char* kToolName = "qmsroot";
inline constexpr const char* kToolVersion = "0.1.0";

/// Exit codes of `check`: 0, 10, 11, 12 for the four verdicts.
int exit_code_for(VerdictKind kind);

struct RunOptions {
  std::string command = "check";
  std::optional<double> s;
  std::optional<double> tol;  // overrides tolerances.feasibility
  std::optional<std::uint64_t> seed;
  std::string dump_system;    // path, empty for none
  bool timestamp = true;
};

struct RunOutcome {
  json report;
  VerdictKind kind = VerdictKind::Indeterminate;
  std::optional<VerdictKind> expected;
  Verdict verdict;
};

/// Overrides are written into the echoed input so the report re-runs as is.
json apply_overrides(const json& input, const RunOptions& options);

RunOutcome run_check(const Problem& problem, const RunOptions& options = {});

struct VerifyOutcome {
  bool ok = false;
  std::string kind;
  std::string message;
};

/// Rebuilds the system from the echoed input and re-checks the embedded
/// certificate, witness or inconsistency proof. Throws Error on malformed
/// reports.
VerifyOutcome verify_report(const json& report);

/// Writes `content` next to `path` and renames it into place.
void write_atomic(const std::string& path, const std::string& content);

/// Streams the sweep as CSV, one flushed line per record.
SweepSummary write_sweep_csv(const SweepConfig& config, std::ostream& out);

json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j);

}  // namespace qmsroot
