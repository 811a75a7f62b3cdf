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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmsroot/feasibility.hpp"
#include "qmsroot/parametric_lab.hpp"

namespace qmsroot {

using json = nlohmann::json;

/// A validated problem file. `input` keeps the document exactly as given
/// (expressions unevaluated) so reports can echo and re-run it.
struct Problem {
  json input;
  std::string name;
  int n = 0;
  CMatrix density;
  std::vector<JumpInput> jumps;
  double s = 0.0;
  FeasibilityTolerances tolerances;
  double density_tol = 1e-9;
  double validation_tol = 1e-9;
  SearchOptions search;
  int size_cap = 4;
  std::uint64_t seed = 0;
  std::optional<VerdictKind> expected;

  LindbladSpec spec() const;
};

/// Parses and schema-checks a problem document. Errors name the source,
/// line and JSON field path.
Problem parse_problem(const std::string& text, const std::string& source = "<input>");
Problem load_problem(const std::string& path);
/// Same checks for an already parsed document (no line information).
Problem problem_from_json(const json& doc, const std::string& source = "<input>");

std::vector<std::string> preset_ids();
/// Problem document for a named preset; nullopt for unknown ids.
std::optional<json> preset_document(const std::string& id);

/// Sweep configuration documents share the entry grammar of problem files.
SweepConfig parse_sweep_config(const std::string& text, const std::string& source = "<input>");
SweepConfig load_sweep_config(const std::string& path);

/// 64-bit FNV-1a of the compact serialization, as "fnv1a64:<hex>".
std::string input_hash(const json& doc);

std::string read_file(const std::string& path);

}  // namespace qmsroot
