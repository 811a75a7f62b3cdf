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

#include <filesystem>
#include <sstream>
#include <string>

#include "qmsroot/report.hpp"

using namespace qmsroot;

namespace {

Problem preset(const std::string& id) { return problem_from_json(*preset_document(id), id); }

json strip_volatile(json r) {
  r.erase("timings");
  r.erase("timestamp");
  return r;
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(exit_code_for(VerdictKind::Feasible) == 0);
  CHECK(exit_code_for(VerdictKind::NotConsistent) == 10);
  CHECK(exit_code_for(VerdictKind::NotPsd) == 11);
  CHECK(exit_code_for(VerdictKind::Indeterminate) == 12);
}

TEST_CASE("two-level report states uniqueness and verifies") {
  const RunOutcome out = run_check(preset("2x2-gns"));
  CHECK(out.kind == VerdictKind::Feasible);
  const json& r = out.report;
  CHECK(r["tool"]["name"] == "qmsroot");
  CHECK(r["verdict"]["nullspace_dim"] == 0);
  CHECK(r["verdict"]["unique"] == true);
  CHECK(r["system"]["nullspace_dim"] == 0);
  CHECK(r["matches_expected"] == true);
  CHECK(r["verdict"]["spectrum"].size() == 16);
  CHECK(r["validation"]["ok"] == true);
  CHECK(r["input_hash"] == input_hash(r["input"]));
  CHECK(r.contains("timestamp"));

  const VerifyOutcome v = verify_report(r);
  CHECK(v.ok);
  CHECK(v.kind == "FEASIBLE");
}

TEST_CASE("tampered reports fail verification") {
  const json r = run_check(preset("2x2-gns")).report;
  json bent = r;
  json& corner = bent["verdict"]["certificate"][0][0][0];
  corner = corner.get<double>() + 0.01;
  CHECK_FALSE(verify_report(bent).ok);

  json moved = r;
  moved["input"]["s"] = 0.5;  // hash no longer matches
  const VerifyOutcome h = verify_report(moved);
  CHECK_FALSE(h.ok);
  CHECK(h.message.find("hash") != std::string::npos);

  json missing = r;
  missing["verdict"].erase("certificate");
  CHECK_FALSE(verify_report(missing).ok);

  CHECK_THROWS_AS(verify_report(json::object()), Error);
}

TEST_CASE("three-level reports carry independent proofs") {
  const RunOutcome gns = run_check(preset("3x3-gns"));
  CHECK(gns.kind == VerdictKind::NotConsistent);
  CHECK(gns.report["verdict"].contains("inconsistency"));
  CHECK(verify_report(gns.report).ok);

  const RunOutcome kms = run_check(preset("3x3-kms"));
  CHECK(kms.kind == VerdictKind::NotPsd);
  const json& w = kms.report["verdict"]["witness"];
  CHECK(w["value"].get<double>() < 0.0);
  CHECK(verify_report(kms.report).ok);

  json lie = kms.report;
  lie["verdict"]["witness"]["value"] = -5.0;
  CHECK_FALSE(verify_report(lie).ok);
}

TEST_CASE("overrides are folded into the echoed input") {
  RunOptions opts;
  opts.s = 0.5;
  opts.seed = 9;
  opts.tol = 1e-7;
  const json in = apply_overrides(*preset_document("2x2-gns"), opts);
  CHECK(in["s"] == 0.5);
  CHECK(in["seed"] == 9);
  CHECK(in["tolerances"]["feasibility"] == 1e-7);

  const RunOutcome out = run_check(preset("2x2-gns"), opts);
  CHECK(out.report["resolved"]["s"] == 0.5);
  CHECK(out.report["input"]["s"] == 0.5);
  CHECK(verify_report(out.report).ok);
}

TEST_CASE("reruns are identical apart from timings and timestamp") {
  RunOptions opts;
  opts.timestamp = false;
  const json a = run_check(preset("2x2-kms"), opts).report;
  const json b = run_check(preset("2x2-kms"), opts).report;
  CHECK_FALSE(a.contains("timestamp"));
  CHECK(strip_volatile(a).dump() == strip_volatile(b).dump());
}

TEST_CASE("invalid generators are rejected before solving") {
  json doc = *preset_document("2x2-gns");
  doc["jumps"][0]["omega"] = 0.0;
  doc["jumps"][1]["omega"] = 0.0;
  const Problem p = problem_from_json(doc);
  CHECK_THROWS_AS(run_check(p), Error);
}

TEST_CASE("atomic writes and system dumps") {
  namespace fs = std::filesystem;
  const fs::path dir = QMSROOT_TEST_TMP;
  fs::create_directories(dir);
  const std::string path = (dir / "report.json").string();
  write_atomic(path, "first");
  write_atomic(path, "second\n");
  CHECK(read_file(path) == "second\n");
  for (const auto& entry : fs::directory_iterator(dir)) {
    CHECK(entry.path().filename().string().find(".tmp.") == std::string::npos);
  }
  CHECK_THROWS_AS(write_atomic((dir / "no" / "such" / "dir.json").string(), "x"), Error);

  RunOptions opts;
  opts.dump_system = (dir / "system.txt").string();
  run_check(preset("2x2-gns"), opts);
  CHECK(read_file(opts.dump_system).rfind("# qmsroot constraint system n=2", 0) == 0);
}

TEST_CASE("sweep CSV streams a header and one line per sample") {
  SweepConfig cfg;
  cfg.samples = 4;
  std::ostringstream out;
  const SweepSummary s = write_sweep_csv(cfg, out);
  CHECK(s.samples == 4);
  std::istringstream in(out.str());
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 5);

  cfg.samples = 0;
  std::ostringstream empty;
  write_sweep_csv(cfg, empty);
  CHECK(empty.str() == sweep_csv_header() + "\n");
}

TEST_CASE("matrix JSON round trip") {
  CMatrix m(2, 2);
  m << cplx(1, 2), cplx(0, -1), cplx(3, 0), cplx(-0.5, 0.25);
  CHECK((matrix_from_json(matrix_to_json(m)) - m).norm() == 0.0);
  CHECK_THROWS_AS(matrix_from_json(json::array({1, 2})), Error);
}
