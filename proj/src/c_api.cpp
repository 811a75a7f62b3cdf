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

#include "qmsroot/qmsroot.h"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <new>
#include <string>

#include "qmsroot/expr.hpp"
#include "qmsroot/report.hpp"

struct qmsroot_problem {
  qmsroot::Problem problem;
};

struct qmsroot_report {
  qmsroot::RunOutcome outcome;
  std::string text;
};

struct qmsroot_sweep_config {
  qmsroot::SweepConfig config;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_message;

qmsroot_status status_for(qmsroot::ErrorCode code) {
  using qmsroot::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidInput:
      return QMSROOT_ERR_INVALID_INPUT;
    case ErrorCode::NotHermitian:
      return QMSROOT_ERR_NOT_HERMITIAN;
    case ErrorCode::DimensionMismatch:
      return QMSROOT_ERR_DIMENSION_MISMATCH;
    case ErrorCode::IndexOutOfRange:
      return QMSROOT_ERR_INDEX_OUT_OF_RANGE;
    case ErrorCode::SizeCapExceeded:
      return QMSROOT_ERR_SIZE_CAP_EXCEEDED;
    case ErrorCode::NoConvergence:
      return QMSROOT_ERR_NO_CONVERGENCE;
    case ErrorCode::Io:
      return QMSROOT_ERR_IO;
  }
  return QMSROOT_ERR_INTERNAL;
}

template <typename F>
qmsroot_status guarded(F&& body) {
  g_last_error.clear();
  try {
    return body();
  } catch (const qmsroot::Error& e) {
    g_last_error = e.what();
    return status_for(e.code());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return QMSROOT_ERR_INVALID_INPUT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return QMSROOT_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QMSROOT_ERR_INTERNAL;
  }
}

qmsroot_status null_arg(const char* what) {
  g_last_error = std::string(what) + " is NULL";
  return QMSROOT_ERR_NULL_ARGUMENT;
}

qmsroot_verdict to_c(qmsroot::VerdictKind k) {
  switch (k) {
    case qmsroot::VerdictKind::Feasible:
      return QMSROOT_FEASIBLE;
    case qmsroot::VerdictKind::NotConsistent:
      return QMSROOT_NOT_CONSISTENT;
    case qmsroot::VerdictKind::NotPsd:
      return QMSROOT_NOT_PSD;
    case qmsroot::VerdictKind::Indeterminate:
      return QMSROOT_INDETERMINATE;
  }
  return QMSROOT_INDETERMINATE;
}

qmsroot::VerdictKind from_c(qmsroot_verdict v) {
  switch (v) {
    case QMSROOT_FEASIBLE:
      return qmsroot::VerdictKind::Feasible;
    case QMSROOT_NOT_CONSISTENT:
      return qmsroot::VerdictKind::NotConsistent;
    case QMSROOT_NOT_PSD:
      return qmsroot::VerdictKind::NotPsd;
    case QMSROOT_INDETERMINATE:
      break;
  }
  return qmsroot::VerdictKind::Indeterminate;
}

}  // namespace

extern "C" {

const char* qmsroot_version(void) { return qmsroot::kToolVersion; }

const char* qmsroot_last_error(void) { return g_last_error.c_str(); }

const char* qmsroot_status_name(qmsroot_status status) {
  switch (status) {
    case QMSROOT_OK:
      return "ok";
    case QMSROOT_ERR_INVALID_INPUT:
      return "invalid input";
    case QMSROOT_ERR_NOT_HERMITIAN:
      return "not Hermitian";
    case QMSROOT_ERR_DIMENSION_MISMATCH:
      return "dimension mismatch";
    case QMSROOT_ERR_INDEX_OUT_OF_RANGE:
      return "index out of range";
    case QMSROOT_ERR_SIZE_CAP_EXCEEDED:
      return "size cap exceeded";
    case QMSROOT_ERR_NO_CONVERGENCE:
      return "no convergence";
    case QMSROOT_ERR_IO:
      return "i/o error";
    case QMSROOT_ERR_UNKNOWN_PRESET:
      return "unknown preset";
    case QMSROOT_ERR_NULL_ARGUMENT:
      return "null argument";
    case QMSROOT_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* qmsroot_verdict_name(qmsroot_verdict verdict) {
  switch (verdict) {
    case QMSROOT_FEASIBLE:
      return "FEASIBLE";
    case QMSROOT_NOT_CONSISTENT:
      return "NOT_CONSISTENT";
    case QMSROOT_NOT_PSD:
      return "NOT_PSD";
    case QMSROOT_INDETERMINATE:
      return "INDETERMINATE";
  }
  return "INDETERMINATE";
}

int qmsroot_verdict_exit_code(qmsroot_verdict verdict) {
  return qmsroot::exit_code_for(from_c(verdict));
}

const char* qmsroot_preset_ids(void) {
  static const std::string ids = [] {
    std::string s;
    for (const auto& id : qmsroot::preset_ids()) s += (s.empty() ? "" : ",") + id;
    return s;
  }();
  return ids.c_str();
}

qmsroot_status qmsroot_problem_from_file(const char* path, qmsroot_problem** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new qmsroot_problem{qmsroot::load_problem(path)};
    return QMSROOT_OK;
  });
}

qmsroot_status qmsroot_problem_from_json(const char* text, qmsroot_problem** out) {
  if (!text) return null_arg("text");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new qmsroot_problem{qmsroot::parse_problem(text)};
    return QMSROOT_OK;
  });
}

qmsroot_status qmsroot_problem_from_preset(const char* id, qmsroot_problem** out) {
  if (!id) return null_arg("id");
  if (!out) return null_arg("out");
  return guarded([&] {
    const auto doc = qmsroot::preset_document(id);
    if (!doc) {
      g_last_error = std::string("unknown example id '") + id + "'; valid ids: " +
                     qmsroot_preset_ids();
      return QMSROOT_ERR_UNKNOWN_PRESET;
    }
    *out = new qmsroot_problem{qmsroot::problem_from_json(*doc, std::string("preset ") + id)};
    return QMSROOT_OK;
  });
}

int qmsroot_problem_n(const qmsroot_problem* problem) { return problem ? problem->problem.n : 0; }

int qmsroot_problem_expected(const qmsroot_problem* problem, qmsroot_verdict* expected) {
  if (!problem || !problem->problem.expected) return 0;
  if (expected) *expected = to_c(*problem->problem.expected);
  return 1;
}

void qmsroot_problem_free(qmsroot_problem* problem) { delete problem; }

qmsroot_status qmsroot_check(const qmsroot_problem* problem,
                             const qmsroot_check_options* options, qmsroot_report** out) {
  if (!problem) return null_arg("problem");
  if (!out) return null_arg("out");
  return guarded([&] {
    qmsroot::RunOptions opts;
    if (options) {
      if (options->has_s) opts.s = options->s;
      if (options->has_tol) opts.tol = options->tol;
      if (options->has_seed) opts.seed = options->seed;
      if (options->dump_system_path) opts.dump_system = options->dump_system_path;
      opts.timestamp = !options->omit_timestamp;
    }
    auto* r = new qmsroot_report{qmsroot::run_check(problem->problem, opts), {}};
    r->text = r->outcome.report.dump(2) + "\n";
    *out = r;
    return QMSROOT_OK;
  });
}

qmsroot_verdict qmsroot_report_verdict(const qmsroot_report* report) {
  return report ? to_c(report->outcome.kind) : QMSROOT_INDETERMINATE;
}

const char* qmsroot_report_json(const qmsroot_report* report) {
  return report ? report->text.c_str() : "";
}

int qmsroot_report_nullspace_dim(const qmsroot_report* report) {
  return report ? report->outcome.verdict.diagnostics.nullspace_dim : -1;
}

double qmsroot_report_residual(const qmsroot_report* report) {
  return report ? report->outcome.verdict.diagnostics.residual
                : std::numeric_limits<double>::quiet_NaN();
}

double qmsroot_report_witness_value(const qmsroot_report* report) {
  if (!report || !report->outcome.verdict.witness) return std::numeric_limits<double>::quiet_NaN();
  return report->outcome.verdict.witness->value;
}

size_t qmsroot_report_spectrum(const qmsroot_report* report, double* values, size_t capacity) {
  if (!report) return 0;
  const qmsroot::RVector& s = report->outcome.verdict.spectrum;
  const auto len = static_cast<size_t>(s.size());
  for (size_t i = 0; values && i < len && i < capacity; ++i) values[i] = s[static_cast<int>(i)];
  return len;
}

qmsroot_status qmsroot_report_write(const qmsroot_report* report, const char* path) {
  if (!report) return null_arg("report");
  if (!path) return null_arg("path");
  return guarded([&] {
    qmsroot::write_atomic(path, report->text);
    return QMSROOT_OK;
  });
}

void qmsroot_report_free(qmsroot_report* report) { delete report; }

qmsroot_status qmsroot_verify_report_file(const char* path, int* verified, const char** message) {
  if (!path) return null_arg("path");
  if (!verified) return null_arg("verified");
  return guarded([&] {
    const std::string text = qmsroot::read_file(path);
    qmsroot::json doc;
    try {
      doc = qmsroot::json::parse(text);
    } catch (const qmsroot::json::parse_error& e) {
      throw qmsroot::Error(qmsroot::ErrorCode::InvalidInput,
                           std::string(path) + ": invalid JSON (" + e.what() + ")");
    }
    const qmsroot::VerifyOutcome v = qmsroot::verify_report(doc);
    *verified = v.ok ? 1 : 0;
    g_message = v.kind + ": " + v.message;
    if (message) *message = g_message.c_str();
    return QMSROOT_OK;
  });
}

qmsroot_status qmsroot_sweep_config_default(qmsroot_sweep_config** out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new qmsroot_sweep_config{};
    return QMSROOT_OK;
  });
}

qmsroot_status qmsroot_sweep_config_from_file(const char* path, qmsroot_sweep_config** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new qmsroot_sweep_config{qmsroot::load_sweep_config(path)};
    return QMSROOT_OK;
  });
}

qmsroot_status qmsroot_sweep_config_from_json(const char* text, qmsroot_sweep_config** out) {
  if (!text) return null_arg("text");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new qmsroot_sweep_config{qmsroot::parse_sweep_config(text)};
    return QMSROOT_OK;
  });
}

qmsroot_status qmsroot_sweep_config_set_threads(qmsroot_sweep_config* config, int threads) {
  if (!config) return null_arg("config");
  if (threads < 1) {
    g_last_error = "threads must be >= 1";
    return QMSROOT_ERR_INVALID_INPUT;
  }
  config->config.threads = threads;
  return QMSROOT_OK;
}

qmsroot_status qmsroot_sweep_config_set_seed(qmsroot_sweep_config* config, uint64_t seed) {
  if (!config) return null_arg("config");
  config->config.seed = seed;
  return QMSROOT_OK;
}

qmsroot_status qmsroot_sweep_config_set_s(qmsroot_sweep_config* config, double s) {
  if (!config) return null_arg("config");
  if (!(s >= 0.0 && s <= 1.0)) {
    g_last_error = "s must lie in [0, 1]";
    return QMSROOT_ERR_INVALID_INPUT;
  }
  config->config.s = s;
  return QMSROOT_OK;
}

qmsroot_status qmsroot_sweep_run(const qmsroot_sweep_config* config, const char* csv_path,
                                 qmsroot_sweep_summary* summary) {
  if (!config) return null_arg("config");
  return guarded([&] {
    qmsroot::SweepSummary s;
    if (csv_path) {
      std::ofstream out(csv_path, std::ios::trunc);
      if (!out) throw qmsroot::Error(qmsroot::ErrorCode::Io,
                                     std::string("cannot write '") + csv_path + "'");
      s = qmsroot::write_sweep_csv(config->config, out);
    } else {
      s = qmsroot::write_sweep_csv(config->config, std::cout);
    }
    if (summary) {
      summary->samples = s.samples;
      summary->agreed = s.agreed;
      summary->failed = s.failed;
      summary->projected = s.projected;
      summary->projected_consistent = s.projected_consistent;
      summary->random_samples = s.random_samples;
      summary->random_agreed = s.random_agreed;
      summary->agreement = s.agreement();
      summary->threshold = config->config.threshold;
    }
    return QMSROOT_OK;
  });
}

void qmsroot_sweep_config_free(qmsroot_sweep_config* config) { delete config; }

qmsroot_status qmsroot_eval_expression(const char* text, double* value) {
  if (!text) return null_arg("text");
  if (!value) return null_arg("value");
  return guarded([&] {
    *value = qmsroot::eval_expression(text);
    return QMSROOT_OK;
  });
}

}  // extern "C"
