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

// Exercises libqmsroot through its C header only.

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "qmsroot/qmsroot.h"

namespace {

std::string tmp_path(const std::string& name) {
  std::filesystem::create_directories(QMSROOT_TEST_TMP);
  return (std::filesystem::path(QMSROOT_TEST_TMP) / name).string();
}

}  // namespace

TEST_CASE("version and names") {
  CHECK(std::strcmp(qmsroot_version(), "0.1.0") == 0);
  CHECK(std::strcmp(qmsroot_verdict_name(QMSROOT_NOT_PSD), "NOT_PSD") == 0);
  CHECK(std::strcmp(qmsroot_status_name(QMSROOT_ERR_UNKNOWN_PRESET), "unknown preset") == 0);
  CHECK(qmsroot_verdict_exit_code(QMSROOT_FEASIBLE) == 0);
  CHECK(qmsroot_verdict_exit_code(QMSROOT_NOT_CONSISTENT) == 10);
  CHECK(qmsroot_verdict_exit_code(QMSROOT_NOT_PSD) == 11);
  CHECK(qmsroot_verdict_exit_code(QMSROOT_INDETERMINATE) == 12);
  CHECK(std::string(qmsroot_preset_ids()) == "2x2-gns,2x2-kms,3x3-gns,3x3-kms");
}

TEST_CASE("null arguments and unknown presets") {
  qmsroot_problem* p = nullptr;
  CHECK(qmsroot_problem_from_preset(nullptr, &p) == QMSROOT_ERR_NULL_ARGUMENT);
  CHECK(qmsroot_problem_from_preset("2x2-gns", nullptr) == QMSROOT_ERR_NULL_ARGUMENT);
  CHECK(qmsroot_problem_from_preset("5x5", &p) == QMSROOT_ERR_UNKNOWN_PRESET);
  CHECK(p == nullptr);
  CHECK(std::string(qmsroot_last_error()).find("2x2-gns") != std::string::npos);
  CHECK(qmsroot_check(nullptr, nullptr, nullptr) == QMSROOT_ERR_NULL_ARGUMENT);
  qmsroot_problem_free(nullptr);
  qmsroot_report_free(nullptr);
  qmsroot_sweep_config_free(nullptr);
}

TEST_CASE("input errors map to status codes") {
  qmsroot_problem* p = nullptr;
  CHECK(qmsroot_problem_from_json("{", &p) == QMSROOT_ERR_INVALID_INPUT);
  CHECK(qmsroot_problem_from_json(R"({"n": 2, "density": {"diag": [0.5, 0.6]}, "jumps": []})",
                                  &p) == QMSROOT_ERR_INVALID_INPUT);
  CHECK(std::string(qmsroot_last_error()).find("/density") != std::string::npos);
  CHECK(qmsroot_problem_from_json(
            R"({"n": 9, "density": {"diag": [1, 1, 1, 1, 1, 1, 1, 1, 1]}, "jumps": []})", &p) ==
        QMSROOT_ERR_SIZE_CAP_EXCEEDED);
  CHECK(qmsroot_problem_from_file("/nonexistent.json", &p) == QMSROOT_ERR_IO);
  double v = 0.0;
  CHECK(qmsroot_eval_expression("2*pi", &v) == QMSROOT_OK);
  CHECK(v == 2 * M_PI);
  CHECK(qmsroot_eval_expression("2*", &v) == QMSROOT_ERR_INVALID_INPUT);
}

TEST_CASE("check, spectrum and verify through the C interface") {
  qmsroot_problem* p = nullptr;
  REQUIRE(qmsroot_problem_from_preset("2x2-gns", &p) == QMSROOT_OK);
  CHECK(qmsroot_problem_n(p) == 2);
  qmsroot_verdict expected = QMSROOT_INDETERMINATE;
  CHECK(qmsroot_problem_expected(p, &expected) == 1);
  CHECK(expected == QMSROOT_FEASIBLE);

  qmsroot_check_options opts{};
  opts.omit_timestamp = 1;
  qmsroot_report* r = nullptr;
  REQUIRE(qmsroot_check(p, &opts, &r) == QMSROOT_OK);
  CHECK(qmsroot_report_verdict(r) == QMSROOT_FEASIBLE);
  CHECK(qmsroot_report_nullspace_dim(r) == 0);
  CHECK(qmsroot_report_residual(r) < 1e-10);
  CHECK(std::isnan(qmsroot_report_witness_value(r)));
  std::vector<double> spec(16);
  CHECK(qmsroot_report_spectrum(r, spec.data(), spec.size()) == 16);
  CHECK(spec[15] == doctest::Approx(1.96).epsilon(0.01));
  CHECK(qmsroot_report_spectrum(r, nullptr, 0) == 16);
  CHECK(std::string(qmsroot_report_json(r)).find("\"timestamp\"") == std::string::npos);

  const std::string path = tmp_path("c_api_report.json");
  CHECK(qmsroot_report_write(r, path.c_str()) == QMSROOT_OK);
  int ok = 0;
  const char* message = nullptr;
  CHECK(qmsroot_verify_report_file(path.c_str(), &ok, &message) == QMSROOT_OK);
  CHECK(ok == 1);
  CHECK(std::string(message).find("certificate") != std::string::npos);
  qmsroot_report_free(r);

  opts.has_s = 1;
  opts.s = 2.0;
  CHECK(qmsroot_check(p, &opts, &r) == QMSROOT_ERR_INVALID_INPUT);
  qmsroot_problem_free(p);

  std::ofstream(tmp_path("garbage.json")) << "[1, 2]";
  CHECK(qmsroot_verify_report_file(tmp_path("garbage.json").c_str(), &ok, &message) ==
        QMSROOT_ERR_INVALID_INPUT);
}

TEST_CASE("sweep through the C interface") {
  qmsroot_sweep_config* cfg = nullptr;
  REQUIRE(qmsroot_sweep_config_from_json(R"({"samples": 4, "seed": 3})", &cfg) == QMSROOT_OK);
  CHECK(qmsroot_sweep_config_set_threads(cfg, 0) == QMSROOT_ERR_INVALID_INPUT);
  CHECK(qmsroot_sweep_config_set_threads(cfg, 2) == QMSROOT_OK);
  CHECK(qmsroot_sweep_config_set_s(cfg, -1.0) == QMSROOT_ERR_INVALID_INPUT);
  const std::string csv = tmp_path("sweep.csv");
  qmsroot_sweep_summary s{};
  REQUIRE(qmsroot_sweep_run(cfg, csv.c_str(), &s) == QMSROOT_OK);
  CHECK(s.samples == 4);
  CHECK(s.agreed == 4);
  CHECK(s.agreement == 1.0);
  CHECK(s.threshold == doctest::Approx(0.99));
  std::ifstream in(csv);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 5);
  qmsroot_sweep_config_free(cfg);
  CHECK(qmsroot_sweep_config_from_json(R"({"mode": "grid"})", &cfg) == QMSROOT_ERR_INVALID_INPUT);
}
