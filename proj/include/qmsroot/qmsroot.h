/*
 * Copyright 2026 The qmsroot Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of libqmsroot. All handles are opaque; every call that can
 * fail returns a qmsroot_status and leaves a message for
 * qmsroot_last_error() on the calling thread. Returned strings stay valid
 * until the owning handle is freed (or, for thread-local strings, until the
 * next call on the same thread). */

#ifndef QMSROOT_QMSROOT_H_
#define QMSROOT_QMSROOT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(QMSROOT_BUILDING_LIBRARY)
#define QMSROOT_API __attribute__((visibility("default")))
#else
#define QMSROOT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qmsroot_status {
  QMSROOT_OK = 0,
  QMSROOT_ERR_INVALID_INPUT = 1,
  QMSROOT_ERR_NOT_HERMITIAN = 2,
  QMSROOT_ERR_DIMENSION_MISMATCH = 3,
  QMSROOT_ERR_INDEX_OUT_OF_RANGE = 4,
  QMSROOT_ERR_SIZE_CAP_EXCEEDED = 5,
  QMSROOT_ERR_NO_CONVERGENCE = 6,
  QMSROOT_ERR_IO = 7,
  QMSROOT_ERR_UNKNOWN_PRESET = 8,
  QMSROOT_ERR_NULL_ARGUMENT = 9,
  QMSROOT_ERR_INTERNAL = 10
} qmsroot_status;

typedef enum qmsroot_verdict {
  QMSROOT_FEASIBLE = 0,
  QMSROOT_NOT_CONSISTENT = 1,
  QMSROOT_NOT_PSD = 2,
  QMSROOT_INDETERMINATE = 3
} qmsroot_verdict;

typedef struct qmsroot_problem qmsroot_problem;
typedef struct qmsroot_report qmsroot_report;
typedef struct qmsroot_sweep_config qmsroot_sweep_config;

/* Optional overrides for qmsroot_check; zero-initialize and set has_* flags. */
typedef struct qmsroot_check_options {
  int has_s;
  double s;
  int has_tol;
  double tol;
  int has_seed;
  uint64_t seed;
  const char* dump_system_path; /* NULL for none */
  int omit_timestamp;
} qmsroot_check_options;

typedef struct qmsroot_sweep_summary {
  int samples;
  int agreed;
  int failed;
  int projected;
  int projected_consistent;
  int random_samples;
  int random_agreed;
  double agreement;
  double threshold;
} qmsroot_sweep_summary;

QMSROOT_API const char* qmsroot_version(void);
QMSROOT_API const char* qmsroot_last_error(void);
QMSROOT_API const char* qmsroot_status_name(qmsroot_status status);
QMSROOT_API const char* qmsroot_verdict_name(qmsroot_verdict verdict);
/* Process exit code for a verdict: 0, 10, 11 or 12. */
QMSROOT_API int qmsroot_verdict_exit_code(qmsroot_verdict verdict);

/* Comma separated list of preset ids. */
QMSROOT_API const char* qmsroot_preset_ids(void);

QMSROOT_API qmsroot_status qmsroot_problem_from_file(const char* path, qmsroot_problem** out);
QMSROOT_API qmsroot_status qmsroot_problem_from_json(const char* text, qmsroot_problem** out);
QMSROOT_API qmsroot_status qmsroot_problem_from_preset(const char* id, qmsroot_problem** out);
QMSROOT_API int qmsroot_problem_n(const qmsroot_problem* problem);
/* 1 and the expected kind when the problem declares one, else 0. */
QMSROOT_API int qmsroot_problem_expected(const qmsroot_problem* problem,
                                         qmsroot_verdict* expected);
QMSROOT_API void qmsroot_problem_free(qmsroot_problem* problem);

QMSROOT_API qmsroot_status qmsroot_check(const qmsroot_problem* problem,
                                         const qmsroot_check_options* options,
                                         qmsroot_report** out);
QMSROOT_API qmsroot_verdict qmsroot_report_verdict(const qmsroot_report* report);
/* Pretty printed report JSON, owned by the report. */
QMSROOT_API const char* qmsroot_report_json(const qmsroot_report* report);
QMSROOT_API int qmsroot_report_nullspace_dim(const qmsroot_report* report);
QMSROOT_API double qmsroot_report_residual(const qmsroot_report* report);
/* Witness value, or NaN when the verdict has no witness. */
QMSROOT_API double qmsroot_report_witness_value(const qmsroot_report* report);
/* Copies up to `capacity` ascending eigenvalues of the certificate; returns
 * the spectrum length (0 without a certificate). */
QMSROOT_API size_t qmsroot_report_spectrum(const qmsroot_report* report, double* values,
                                           size_t capacity);
/* Atomic write (temporary file, then rename). */
QMSROOT_API qmsroot_status qmsroot_report_write(const qmsroot_report* report, const char* path);
QMSROOT_API void qmsroot_report_free(qmsroot_report* report);

/* Re-verifies a persisted report. *verified is 1 when the embedded proof
 * holds; *message (thread-local) explains the outcome. */
QMSROOT_API qmsroot_status qmsroot_verify_report_file(const char* path, int* verified,
                                                      const char** message);

QMSROOT_API qmsroot_status qmsroot_sweep_config_default(qmsroot_sweep_config** out);
QMSROOT_API qmsroot_status qmsroot_sweep_config_from_file(const char* path,
                                                          qmsroot_sweep_config** out);
QMSROOT_API qmsroot_status qmsroot_sweep_config_from_json(const char* text,
                                                          qmsroot_sweep_config** out);
QMSROOT_API qmsroot_status qmsroot_sweep_config_set_threads(qmsroot_sweep_config* config,
                                                            int threads);
QMSROOT_API qmsroot_status qmsroot_sweep_config_set_seed(qmsroot_sweep_config* config,
                                                         uint64_t seed);
QMSROOT_API qmsroot_status qmsroot_sweep_config_set_s(qmsroot_sweep_config* config, double s);
/* Streams CSV to `csv_path` (NULL: stdout). */
QMSROOT_API qmsroot_status qmsroot_sweep_run(const qmsroot_sweep_config* config,
                                             const char* csv_path,
                                             qmsroot_sweep_summary* summary);
QMSROOT_API void qmsroot_sweep_config_free(qmsroot_sweep_config* config);

/* Evaluates an arithmetic expression such as "log((pi-1)/(pi+1))". */
QMSROOT_API qmsroot_status qmsroot_eval_expression(const char* text, double* value);

#ifdef __cplusplus
}
#endif

#endif /* QMSROOT_QMSROOT_H_ */
