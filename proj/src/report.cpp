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

#include "qmsroot/report.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace qmsroot {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json sparse_real_to_json(const std::vector<std::pair<int, double>>& v) {
  json out = json::array();
  for (const auto& [i, x] : v) out.push_back(json::array({i, x}));
  return out;
}

std::vector<std::pair<int, double>> sparse_real_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidInput, std::string(what) + ": expected array");
  std::vector<std::pair<int, double>> out;
  for (const json& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number()) {
      throw Error(ErrorCode::InvalidInput, std::string(what) + ": entries are [index, value]");
    }
    out.emplace_back(e[0].get<int>(), e[1].get<double>());
  }
  return out;
}

json sparse_complex_to_json(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] != cplx(0.0)) out.push_back(json::array({i, v[i].real(), v[i].imag()}));
  }
  return out;
}

CVector sparse_complex_from_json(const json& j, int dim) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidInput, "witness vector: expected array");
  CVector v = CVector::Zero(dim);
  for (const json& e : j) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer()) {
      throw Error(ErrorCode::InvalidInput, "witness vector: entries are [index, re, im]");
    }
    const int i = e[0].get<int>();
    if (i < 0 || i >= dim) throw Error(ErrorCode::InvalidInput, "witness vector: index range");
    v[i] = cplx(e[1].get<double>(), e[2].get<double>());
  }
  return v;
}

json vector_to_json(const RVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json tolerances_json(const Problem& p) {
  return {{"rank", p.tolerances.rank},
          {"feasibility", p.tolerances.feasibility},
          {"psd", p.tolerances.psd},
          {"density", p.density_tol},
          {"validation", p.validation_tol}};
}

json resolved_json(const Problem& p, const LindbladSpec& spec) {
  json jumps = json::array();
  for (const Jump& j : spec.jumps()) {
    jumps.push_back({{"V", matrix_to_json(j.v)},
                     {"omega", j.omega},
                     {"omega_derived", j.omega_derived},
                     {"weight", j.weight}});
  }
  return {{"n", p.n}, {"s", p.s}, {"density", matrix_to_json(p.density)}, {"jumps", jumps}};
}

json validation_json(const ValidationReport& v, double gns, double s_sym) {
  json jumps = json::array();
  for (const JumpCheck& c : v.jumps) {
    jumps.push_back({{"omega", c.omega}, {"eigen_residual", c.eigen_residual}, {"ok", c.ok}});
  }
  return {{"ok", v.ok()},
          {"adjoint_closed", v.adjoint_closed},
          {"jumps", jumps},
          {"failures", v.failures},
          {"gns_symmetry_defect", gns},
          {"s_symmetry_defect", s_sym}};
}

json system_json(const ConstraintSystem& sys, const AffineSolution& sol) {
  const ConstraintStructure& st = *sys.structure;
  auto family = [&](Family f) {
    const FamilyStats& s = st.stats(f);
    return json{{"complex_equations", s.raw_equations},
                {"nonzero_real_rows", s.real_rows},
                {"kept_rows", s.kept_rows}};
  };
  return {{"n", st.n()},
          {"m", st.m()},
          {"matrix_side", st.dim()},
          {"unknowns", st.layout().size()},
          {"complex_equations", st.raw_complex_equations()},
          {"real_rows_before_pruning", st.realified_rows_raw()},
          {"rows", sys.matrix().rows()},
          {"nonzeros", sys.matrix().nnz()},
          {"families", {{"left", family(Family::Left)},
                        {"right", family(Family::Right)},
                        {"target", family(Family::Target)}}},
          {"rank", sol.factor->rank()},
          {"nullspace_dim", sol.nullspace_dim()},
          {"components", sol.factor->component_count()},
          {"largest_component_columns", sol.factor->largest_component_cols()},
          {"smallest_retained_sv", sol.factor->smallest_retained_sv()},
          {"largest_dropped_sv", sol.factor->largest_dropped_sv()},
          {"norm", sol.factor->norm()},
          {"scale", sol.scale}};
}

json verdict_json(const Verdict& v, const Problem& p) {
  const Diagnostics& d = v.diagnostics;
  json out = {{"kind", to_string(v.kind)},
              {"residual", d.residual},
              {"nullspace_dim", d.nullspace_dim},
              {"unique", d.nullspace_dim == 0},
              {"seed", p.seed},
              {"tolerances", tolerances_json(p)}};
  if (v.certificate) {
    out["certificate"] = matrix_to_json(*v.certificate);
    out["spectrum"] = vector_to_json(v.spectrum);
    out["certificate_residual"] = v.certificate_residual;
  }
  if (v.witness) {
    const InfeasibilityWitness& w = *v.witness;
    out["witness"] = {{"vector", sparse_complex_to_json(w.v)},
                      {"value", w.value},
                      {"coupling", w.coupling},
                      {"origin", w.origin},
                      {"multiplier", sparse_real_to_json(w.multiplier)},
                      {"multiplier_residual", w.multiplier_residual}};
  }
  if (v.inconsistency) {
    out["inconsistency"] = {{"y", sparse_real_to_json(v.inconsistency->y)},
                            {"bty", v.inconsistency->bty},
                            {"aty_norm", v.inconsistency->aty_norm}};
  }
  out["diagnostics"] = {{"x0_min_eig", d.x0_min_eig},
                        {"iterations", d.iterations},
                        {"restarts_used", d.restarts_used},
                        {"min_eig_trajectory", d.min_eig_trajectory},
                        {"cone_gap", d.cone_gap},
                        {"rank", d.rank}};
  return out;
}

}  // namespace

int exit_code_for(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::Feasible:
      return 0;
    case VerdictKind::NotConsistent:
      return 10;
    case VerdictKind::NotPsd:
      return 11;
    case VerdictKind::Indeterminate:
      return 12;
  }
  return 12;
}

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw Error(ErrorCode::InvalidInput, "matrix: expected rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  CMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw Error(ErrorCode::InvalidInput, "matrix: rows must be square");
    }
    for (Eigen::Index c = 0; c < n; ++c) {
      const json& e = row[c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw Error(ErrorCode::InvalidInput, "matrix: entries are [re, im]");
      }
      m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

json apply_overrides(const json& input, const RunOptions& options) {
  json out = input;
  if (options.s) out["s"] = *options.s;
  if (options.tol) out["tolerances"]["feasibility"] = *options.tol;
  if (options.seed) out["seed"] = *options.seed;
  return out;
}

RunOutcome run_check(const Problem& original, const RunOptions& options) {
  const auto t_total = Clock::now();
  json timings;

  auto t0 = Clock::now();
  const Problem p = problem_from_json(apply_overrides(original.input, options), "input");
  const LindbladSpec spec = p.spec();
  const ValidationReport validation = validate_spec(spec, p.validation_tol);
  if (!validation.ok()) {
    std::string msg = "generator validation failed:";
    for (const auto& f : validation.failures) msg += "\n  " + f;
    throw Error(ErrorCode::InvalidInput, msg);
  }
  const double gns = gns_symmetry_check(spec, 8, p.seed);
  const double s_sym = s_symmetry_check(spec, p.s, 8, p.seed);
  timings["validate_ms"] = ms_since(t0);

  t0 = Clock::now();
  AssemblyOptions aopt;
  aopt.size_cap = p.size_cap;
  const ConstraintSystem sys = assemble(spec, p.s, aopt);
  timings["assemble_ms"] = ms_since(t0);
  if (!options.dump_system.empty()) {
    std::ostringstream os;
    dump_system(sys, os);
    write_atomic(options.dump_system, os.str());
  }

  t0 = Clock::now();
  const AffineSolution sol = solve_affine(sys, p.tolerances);
  timings["solve_ms"] = ms_since(t0);

  t0 = Clock::now();
  SearchOptions search = p.search;
  search.seed = p.seed;
  Verdict verdict = psd_search(sol, p.tolerances, search);
  timings["search_ms"] = ms_since(t0);

  RunOutcome out;
  out.kind = verdict.kind;
  out.expected = p.expected;

  json& r = out.report;
  r["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  r["command"] = options.command;
  r["input"] = p.input;
  r["input_hash"] = input_hash(p.input);
  r["resolved"] = resolved_json(p, spec);
  r["validation"] = validation_json(validation, gns, s_sym);
  r["system"] = system_json(sys, sol);
  r["verdict"] = verdict_json(verdict, p);
  if (p.expected) {
    r["expected"] = to_string(*p.expected);
    r["matches_expected"] = *p.expected == verdict.kind;
  }
  timings["total_ms"] = ms_since(t_total);
  r["timings"] = timings;
  if (options.timestamp) r["timestamp"] = utc_timestamp();
  out.verdict = std::move(verdict);
  return out;
}

VerifyOutcome verify_report(const json& report) {
  if (!report.is_object() || !report.contains("input") || !report.contains("verdict")) {
    throw Error(ErrorCode::InvalidInput, "report: missing 'input' or 'verdict'");
  }
  VerifyOutcome out;
  const json& verdict = report["verdict"];
  if (!verdict.contains("kind") || !verdict["kind"].is_string() ||
      !verdict_from_string(verdict["kind"].get<std::string>())) {
    throw Error(ErrorCode::InvalidInput, "report: verdict kind missing or unknown");
  }
  out.kind = verdict["kind"].get<std::string>();
  const VerdictKind kind = *verdict_from_string(out.kind);

  if (report.contains("input_hash")) {
    const std::string h = input_hash(report["input"]);
    if (report["input_hash"] != h) {
      out.message = "input hash mismatch (report says " + report["input_hash"].dump() +
                    ", recomputed " + h + ")";
      return out;
    }
  }

  const Problem p = problem_from_json(report["input"], "report input");
  AssemblyOptions aopt;
  aopt.size_cap = p.size_cap;
  const ConstraintSystem sys = assemble(p.spec(), p.s, aopt);

  switch (kind) {
    case VerdictKind::Feasible: {
      if (!verdict.contains("certificate")) {
        out.message = "FEASIBLE report without a certificate";
        return out;
      }
      const CheckResult c =
          verify_certificate(sys, matrix_from_json(verdict["certificate"]), p.tolerances);
      out.ok = c.ok;
      out.message = "certificate: " + c.message;
      return out;
    }
    case VerdictKind::NotPsd: {
      if (!verdict.contains("witness")) {
        out.message = "NOT_PSD report without a witness";
        return out;
      }
      const json& w = verdict["witness"];
      const CVector v = sparse_complex_from_json(w.at("vector"), sys.structure->dim());
      const auto z = sparse_real_from_json(w.at("multiplier"), "witness multiplier");
      const CheckResult c = verify_witness(sys, v, z, p.tolerances);
      out.ok = c.ok;
      out.message = "witness: " + c.message;
      if (c.ok && w.contains("value")) {
        const double claimed = w["value"].get<double>();
        if (std::abs(claimed - c.value) > 1e-8 * std::max(1.0, std::abs(c.value))) {
          out.ok = false;
          out.message += "; claimed value " + std::to_string(claimed) + " disagrees";
        }
      }
      return out;
    }
    case VerdictKind::NotConsistent: {
      if (!verdict.contains("inconsistency")) {
        out.message = "NOT_CONSISTENT report without an inconsistency proof";
        return out;
      }
      const auto y = sparse_real_from_json(verdict["inconsistency"].at("y"), "inconsistency");
      const CheckResult c = verify_inconsistency(sys, y, p.tolerances);
      out.ok = c.ok;
      out.message = "inconsistency: " + c.message;
      return out;
    }
    case VerdictKind::Indeterminate:
      out.ok = true;
      out.message = "INDETERMINATE carries no certificate; nothing to verify";
      return out;
  }
  return out;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::Io, "cannot move report into '" + path + "'");
  }
}

SweepSummary write_sweep_csv(const SweepConfig& config, std::ostream& out) {
  out << sweep_csv_header() << '\n' << std::flush;
  return sweep(config,
               [&out](const SweepRecord& r) { out << sweep_csv_row(r) << '\n' << std::flush; });
}

}  // namespace qmsroot
