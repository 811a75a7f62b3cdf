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

#include <doctest.h>

#include <cmath>
#include <string>

#include "fixtures.hpp"
#include "qmsroot/expr.hpp"
#include "qmsroot/problem.hpp"

using namespace qmsroot;
using namespace qmsroot::testing;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_problem(text, "p.json");
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

const char* kTwoLevel = R"j({
  "n": 2,
  "density": {"diag": ["(1+1/pi)/2", "(1-1/pi)/2"]},
  "jumps": [
    {"V": [[0, 1], [0, 0]], "omega": "log((pi-1)/(pi+1))"},
    {"V": [[0, 0], [1, 0]], "omega": "-log((pi-1)/(pi+1))"}
  ]
})j";

}  // namespace

TEST_CASE("expressions") {
  CHECK(eval_expression("pi") == pi);
  CHECK(eval_expression("e") == e);
  CHECK(eval_expression("2^3^2") == 512.0);
  CHECK(eval_expression("-2^2") == -4.0);
  CHECK(eval_expression("(1+1/pi)/2") == (1 + 1 / pi) / 2);
  CHECK(eval_expression("log((pi-1)/(pi+1))") == std::log((pi - 1) / (pi + 1)));
  CHECK(eval_expression(" sqrt(4) * exp(0) ") == 2.0);
  CHECK(eval_expression("1e-3") == 1e-3);
  CHECK_THROWS_AS(eval_expression("1 +"), Error);
  CHECK_THROWS_AS(eval_expression("foo(1)"), Error);
  CHECK_THROWS_AS(eval_expression("log(0)"), Error);
  CHECK_THROWS_AS(eval_expression("(1"), Error);
  try {
    eval_expression("1 + * 2");
    FAIL("expected an error");
  } catch (const Error& err) {
    CHECK(std::string(err.what()).find("column") != std::string::npos);
  }
}

TEST_CASE("problem file matches the built-in generator") {
  const Problem p = parse_problem(kTwoLevel);
  CHECK(p.n == 2);
  CHECK(p.s == 0.0);
  CHECK_FALSE(p.expected);
  const LindbladSpec spec = p.spec();
  const LindbladSpec ref = two_level();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const CMatrix u = matrix_unit(2, i, j);
      CHECK((spec.apply(u) - ref.apply(u)).norm() <= 1e-14);
    }
}

TEST_CASE("complex entries and full density matrices") {
  const Problem p = parse_problem(R"j({
    "n": 2,
    "density": [[0.5, [0.1, 0.2]], [[0.1, -0.2], 0.5]],
    "jumps": [],
    "s": "1/2"
  })j");
  CHECK(p.density(0, 1) == cplx(0.1, 0.2));
  CHECK(p.s == 0.5);
}

TEST_CASE("errors name the line and the path") {
  const std::string trace = error_of(R"j({
  "n": 2,
  "density": {"diag": [0.5, 0.6]},
  "jumps": []
})j");
  CHECK(trace.find("p.json:3: /density") != std::string::npos);

  const std::string unknown = error_of(R"j({
  "n": 2,
  "density": {"diag": [0.5, 0.5]},
  "jumps": [],
  "colour": 1
})j");
  CHECK(unknown.find("p.json:5: /colour: unknown key 'colour'") != std::string::npos);

  const std::string row = error_of(R"j({
  "n": 2,
  "density": {"diag": [0.5, 0.5]},
  "jumps": [
    {"V": [[0, 1], [0]]}
  ]
})j");
  CHECK(row.find("/jumps/0/V/1") != std::string::npos);
  CHECK(row.find("p.json:5:") != std::string::npos);

  CHECK(error_of(R"j({"density": {"diag": [1]}, "jumps": []})j").find("missing required key 'n'") !=
        std::string::npos);
  CHECK(error_of(R"j({"n": 2, "density": {"diag": [0.5, 0.5]}, "jumps": [], "s": 2})j")
            .find("/s") != std::string::npos);
  CHECK(error_of(R"j({"n": 2, "density": {"diag": ["1/2", "pi/"]}, "jumps": []})j")
            .find("/density/diag/1") != std::string::npos);
  CHECK(error_of("{not json").find("p.json") != std::string::npos);
  CHECK(error_of(R"j({"n": 2, "density": {"diag": [0.5, 0.5]}, "jumps": [], "expected": "ok"})j")
            .find("/expected") != std::string::npos);
}

TEST_CASE("oversized problems hit the size cap") {
  const std::string text = R"j({"n": 6, "density": {"diag": [1, 1, 1, 1, 1, 1]}, "jumps": []})j";
  try {
    parse_problem(text);
    FAIL("expected SizeCapExceeded");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::SizeCapExceeded);
  }
}

TEST_CASE("presets") {
  CHECK(preset_ids().size() == 4);
  CHECK_FALSE(preset_document("4x4-gns"));
  for (const auto& id : preset_ids()) {
    const auto doc = preset_document(id);
    REQUIRE(doc);
    const Problem p = problem_from_json(*doc, id);
    CHECK(p.name == id);
    CHECK(p.expected);
    CHECK(p.s == (id.ends_with("kms") ? 0.5 : 0.0));
  }
  const Problem p3 = problem_from_json(*preset_document("3x3-gns"));
  const LindbladSpec ref = three_level();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const CMatrix u = matrix_unit(3, i, j);
      CHECK((p3.spec().apply(u) - ref.apply(u)).norm() <= 1e-13);
    }
}

TEST_CASE("input hash is stable and content sensitive") {
  const json a = json::parse(kTwoLevel);
  json b = a;
  CHECK(input_hash(a) == input_hash(b));
  CHECK(input_hash(a).rfind("fnv1a64:", 0) == 0);
  CHECK(input_hash(a).size() == 8 + 16);
  b["s"] = 0.5;
  CHECK(input_hash(a) != input_hash(b));
  // FNV-1a of the two bytes "{}"
  CHECK(input_hash(json::object()) == "fnv1a64:08f44b07b5901a25");
}

TEST_CASE("sweep configuration") {
  const SweepConfig c = parse_sweep_config(R"j({
    "samples": 20, "seed": 7, "mode": "projected",
    "pinned": {"lambda2": "pi", "lambda3": "exp(pi)"}, "threads": 2
  })j");
  CHECK(c.samples == 20);
  CHECK(c.seed == 7);
  CHECK(c.mode == SweepMode::Projected);
  REQUIRE(c.pinned);
  CHECK(c.pinned->lambda3 == std::exp(pi));
  CHECK(c.threads == 2);
  CHECK_THROWS_AS(parse_sweep_config(R"j({"mode": "grid"})j"), Error);
  CHECK_THROWS_AS(parse_sweep_config(R"j({"samples": -1})j"), Error);
  CHECK_THROWS_AS(parse_sweep_config(R"j({"bogus": 1})j"), Error);
  CHECK(parse_sweep_config("{}").samples == 200);
}

TEST_CASE("missing files are I/O errors") {
  try {
    load_problem("/nonexistent/problem.json");
    FAIL("expected Io");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::Io);
  }
}
