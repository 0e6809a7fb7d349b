/* Copyright (c) 2026 The latspec authors
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

/* C interface to the lattice spectral engine.
 *
 * Every entry point returns a latspec_status; 0 means success. On failure
 * latspec_last_error() returns a human-readable message describing the
 * failing call (thread-local, valid until the next failing call on the
 * same thread). Strings returned through char** out-parameters are
 * NUL-terminated, owned by the caller, and must be released with
 * latspec_string_free().
 */

#ifndef LATSPEC_H
#define LATSPEC_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum latspec_status {
  LATSPEC_OK = 0,
  /* Malformed config, unknown command/claim/field, or bad call order;
   * the message names the offending field path. */
  LATSPEC_ERR_INVALID_ARGUMENT = 1,
  /* A grid was too coarse for the requested accuracy; the message
   * reports the minimum admissible size. */
  LATSPEC_ERR_RESOLUTION = 2,
  /* A configured work or memory budget was exceeded. */
  LATSPEC_ERR_BUDGET = 3,
  /* An iterative refinement failed to converge within its ladder. */
  LATSPEC_ERR_CONVERGENCE = 4,
  /* Parameters outside the mathematical domain of the construction. */
  LATSPEC_ERR_DOMAIN = 5,
  /* Filesystem failure while writing artifacts. */
  LATSPEC_ERR_IO = 6,
  /* Unexpected internal failure (bad_alloc, logic error). */
  LATSPEC_ERR_INTERNAL = 7
} latspec_status;

/* Opaque experiment handle. */
typedef struct latspec_experiment latspec_experiment;

/* Parses and validates a JSON config string ({"command": "...", ...})
 * and returns a ready-to-run experiment. The handle must be released
 * with latspec_experiment_destroy(). */
latspec_status latspec_experiment_create(const char* config_json,
                                         latspec_experiment** out_handle);

/* Executes the experiment. Idempotent inputs give identical results. */
latspec_status latspec_experiment_run(latspec_experiment* handle);

/* Machine-readable result of a completed run, as a JSON string. */
latspec_status latspec_experiment_summary_json(const latspec_experiment* handle,
                                               char** out_json);

/* Writes one CSV per result table plus summary.json and manifest.json
 * into dir (created if missing). */
latspec_status latspec_experiment_write_artifacts(const latspec_experiment* handle,
                                                  const char* dir);

/* Evaluates a named claim against a completed run. *out_pass becomes 1
 * or 0; when out_detail is non-NULL it receives an explanation of the
 * measured-vs-expected comparison. Unknown claims fail with
 * LATSPEC_ERR_INVALID_ARGUMENT and a message listing the claims the
 * command supports. */
latspec_status latspec_experiment_check(const latspec_experiment* handle,
                                        const char* claim, int* out_pass,
                                        char** out_detail);

/* JSON array of the claim names this experiment's command supports. */
latspec_status latspec_experiment_claims_json(const latspec_experiment* handle,
                                              char** out_json);

void latspec_experiment_destroy(latspec_experiment* handle);

/* JSON array of {command, claim, description} rows covering every
 * command the engine provides. */
latspec_status latspec_catalog_json(char** out_json);

/* Message for the most recent failing call on this thread ("" if none). */
const char* latspec_last_error(void);

/* Releases a string returned via a char** out-parameter. NULL is ok. */
void latspec_string_free(char* s);

/* Library version as "major.minor.patch". */
const char* latspec_version(void);

#ifdef __cplusplus
}
#endif

#endif /* LATSPEC_H */
