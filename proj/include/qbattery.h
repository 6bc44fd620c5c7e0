/* Copyright 2026 the qbattery authors
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

/* C interface to the qbattery simulation library.
 *
 * Usage: create a run handle, point it at a config (file or inline JSON),
 * optionally override individual knobs, then execute one of the commands
 * "spectrum", "charge", "sweep", "fit" or "verify". All outputs are written
 * into the configured output directory as structured text.
 */

#ifndef QBATTERY_H
#define QBATTERY_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct qb_run qb_run;

/* Status codes returned by qb_exec and the setters. The first four match
 * the CLI exit-code contract. */
enum {
    QB_OK = 0,
    QB_ERR_VERIFY = 1,
    QB_ERR_CONFIG = 2,
    QB_ERR_SWEEP = 3,
    QB_ERR_INVALID_ARGUMENT = 4
};

const char* qb_version(void);

qb_run* qb_run_create(void);
void qb_run_destroy(qb_run* run);

/* Message of the last failed call on this handle; empty string if none.
 * Owned by the handle, valid until the next call on it. */
const char* qb_last_error(const qb_run* run);

/* Human-readable log of the last qb_exec on this handle. */
const char* qb_last_output(const qb_run* run);

/* Exactly one config source is used per exec; the latest setter wins. */
int qb_set_config_file(qb_run* run, const char* path);
int qb_set_config_json(qb_run* run, const char* json_text);

/* Optional overrides applied on top of the config. */
int qb_set_out_dir(qb_run* run, const char* dir);
int qb_set_seed(qb_run* run, uint64_t seed);
int qb_set_workers(qb_run* run, int workers);
int qb_set_format(qb_run* run, const char* format); /* "csv" or "jsonl" */
int qb_set_dense_cap(qb_run* run, int cap);

/* Runs one command; returns a status code from the enum above. */
int qb_exec(qb_run* run, const char* command);

#ifdef __cplusplus
}
#endif

#endif /* QBATTERY_H */
