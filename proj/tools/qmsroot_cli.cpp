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

// qmsroot command line: check, repro, sweep, verify.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>

#include "qmsroot/qmsroot.h"

namespace {

constexpr int kInputError = 2;

struct RunFlags {
  std::string out;
  std::optional<double> s;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::string dump_system;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--out", f.out, "Report path (default: stdout)");
  cmd->add_option("--s", f.s, "Inner-product parameter s in [0, 1]");
  cmd->add_option("--tol", f.tol, "Consistency tolerance (relative to scale)");
  cmd->add_option("--seed", f.seed, "Seed for the PSD search");
  cmd->add_option("--dump-system", f.dump_system, "Write the constraint triplets to this path");
}

int fail(const char* what) {
  std::fprintf(stderr, "qmsroot: %s: %s\n", what, qmsroot_last_error());
  return kInputError;
}

// Runs the check and emits the report. Returns the verdict through `verdict`
// and an input-error code (or 0) as the result.
int run(const qmsroot_problem* problem, const RunFlags& f, qmsroot_verdict* verdict) {
  qmsroot_check_options opts{};
  if (f.s) {
    opts.has_s = 1;
    opts.s = *f.s;
  }
  if (f.tol) {
    opts.has_tol = 1;
    opts.tol = *f.tol;
  }
  if (f.seed) {
    opts.has_seed = 1;
    opts.seed = *f.seed;
  }
  if (!f.dump_system.empty()) opts.dump_system_path = f.dump_system.c_str();

  qmsroot_report* report = nullptr;
  if (qmsroot_check(problem, &opts, &report) != QMSROOT_OK) return fail("check");
  *verdict = qmsroot_report_verdict(report);
  int rc = 0;
  if (f.out.empty()) {
    std::fputs(qmsroot_report_json(report), stdout);
  } else if (qmsroot_report_write(report, f.out.c_str()) != QMSROOT_OK) {
    rc = fail("writing report");
  }
  std::fprintf(stderr, "qmsroot: %s (nullspace dim %d, residual %.3g",
               qmsroot_verdict_name(*verdict),
               qmsroot_report_nullspace_dim(report), qmsroot_report_residual(report));
  const double w = qmsroot_report_witness_value(report);
  if (!std::isnan(w)) std::fprintf(stderr, ", witness value %.9g", w);
  std::fprintf(stderr, ")\n");
  qmsroot_report_free(report);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Searches for a Hilbert-bimodule derivation behind a quantum Markov generator."};
  app.set_version_flag("--version", std::string("qmsroot ") + qmsroot_version());
  app.require_subcommand(1);

  RunFlags check_flags;
  std::string problem_path;
  auto* check = app.add_subcommand("check", "Decide feasibility for a problem file");
  check->add_option("problem", problem_path, "Problem JSON")->required();
  add_run_flags(check, check_flags);

  RunFlags repro_flags;
  std::string preset;
  auto* repro = app.add_subcommand("repro", "Run a built-in example and compare with its verdict");
  repro->add_option("id", preset, std::string("One of: ") + qmsroot_preset_ids())->required();
  add_run_flags(repro, repro_flags);

  std::string sweep_config;
  std::string sweep_out;
  std::optional<int> threads;
  std::optional<std::uint64_t> sweep_seed;
  std::optional<double> sweep_s;
  auto* sweep = app.add_subcommand("sweep", "Predicate-versus-consistency sweep on M_3");
  sweep->add_option("config", sweep_config, "Sweep config JSON (default settings if omitted)");
  sweep->add_option("--out", sweep_out, "CSV path (default: stdout)");
  sweep->add_option("--threads", threads, "Worker threads");
  sweep->add_option("--seed", sweep_seed, "Override the sampling seed");
  sweep->add_option("--s", sweep_s, "Inner-product parameter for the consistency test");

  std::string report_path;
  auto* verify = app.add_subcommand("verify", "Re-verify the proof embedded in a report");
  verify->add_option("report", report_path, "Report JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  if (*check) {
    qmsroot_problem* problem = nullptr;
    if (qmsroot_problem_from_file(problem_path.c_str(), &problem) != QMSROOT_OK) {
      return fail("problem");
    }
    qmsroot_verdict verdict = QMSROOT_INDETERMINATE;
    const int rc = run(problem, check_flags, &verdict);
    qmsroot_problem_free(problem);
    return rc ? rc : qmsroot_verdict_exit_code(verdict);
  }

  if (*repro) {
    qmsroot_problem* problem = nullptr;
    const qmsroot_status st = qmsroot_problem_from_preset(preset.c_str(), &problem);
    if (st != QMSROOT_OK) return fail("repro");
    qmsroot_verdict expected = QMSROOT_INDETERMINATE;
    qmsroot_problem_expected(problem, &expected);
    qmsroot_verdict verdict = QMSROOT_INDETERMINATE;
    const int rc = run(problem, repro_flags, &verdict);
    qmsroot_problem_free(problem);
    if (rc) return rc;
    const bool match = verdict == expected;
    std::fprintf(stderr, "qmsroot: %s expected %s: %s\n", preset.c_str(),
                 qmsroot_verdict_name(expected), match ? "match" : "MISMATCH");
    return match ? 0 : 1;
  }

  if (*sweep) {
    qmsroot_sweep_config* cfg = nullptr;
    const qmsroot_status st = sweep_config.empty()
                                  ? qmsroot_sweep_config_default(&cfg)
                                  : qmsroot_sweep_config_from_file(sweep_config.c_str(), &cfg);
    if (st != QMSROOT_OK) return fail("sweep config");
    if ((threads && qmsroot_sweep_config_set_threads(cfg, *threads) != QMSROOT_OK) ||
        (sweep_seed && qmsroot_sweep_config_set_seed(cfg, *sweep_seed) != QMSROOT_OK) ||
        (sweep_s && qmsroot_sweep_config_set_s(cfg, *sweep_s) != QMSROOT_OK)) {
      qmsroot_sweep_config_free(cfg);
      return fail("sweep");
    }
    qmsroot_sweep_summary summary{};
    const qmsroot_status rs =
        qmsroot_sweep_run(cfg, sweep_out.empty() ? nullptr : sweep_out.c_str(), &summary);
    qmsroot_sweep_config_free(cfg);
    if (rs != QMSROOT_OK) return fail("sweep");
    std::fprintf(stderr,
                 "qmsroot: agreement %d/%d = %.4f (threshold %.4f); projected consistent %d/%d; "
                 "random agreed %d/%d; failures %d\n",
                 summary.agreed, summary.samples, summary.agreement, summary.threshold,
                 summary.projected_consistent, summary.projected, summary.random_agreed,
                 summary.random_samples, summary.failed);
    return summary.agreement >= summary.threshold ? 0 : 1;
  }

  if (*verify) {
    int ok = 0;
    const char* message = nullptr;
    if (qmsroot_verify_report_file(report_path.c_str(), &ok, &message) != QMSROOT_OK) {
      return fail("verify");
    }
    std::fprintf(stderr, "qmsroot: %s: %s\n", ok ? "verified" : "NOT verified", message);
    return ok ? 0 : 1;
  }
  return kInputError;
}
