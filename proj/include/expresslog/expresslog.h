/*
 * Copyright 2026 The expresslog Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef EXPRESSLOG_EXPRESSLOG_H
#define EXPRESSLOG_EXPRESSLOG_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define EXL_API __declspec(dllexport)
#else
#define EXL_API __attribute__((visibility("default")))
#endif

typedef enum exl_status {
  EXL_OK = 0,
  EXL_ERR_INVALID_ARGUMENT = 1,
  EXL_ERR_NOT_FOUND = 2,
  EXL_ERR_DUPLICATE = 3,
  EXL_ERR_STATE = 4,
  EXL_ERR_UNDEFINED = 5,
  EXL_ERR_IO = 6,
  EXL_ERR_PARSE = 7,
  EXL_ERR_UNAVAILABLE = 8,
  EXL_ERR_CHECK_FAILED = 9,
  EXL_ERR_INTERNAL = 10
} exl_status;

typedef struct exl_store exl_store;
typedef struct exl_capture exl_capture;

/* Strings returned through char** out-parameters are owned by the caller and
 * released with exl_string_free. */
EXL_API void exl_string_free(char* s);
EXL_API const char* exl_status_name(exl_status status);
/* Message of the last failed call on this thread; "" when none. */
EXL_API const char* exl_last_error(void);
EXL_API const char* exl_version(void);
/* Data directory compiled into the library (fixtures, scenarios, weather). */
EXL_API const char* exl_default_data_dir(void);

/* ---- statistics ---- */

/* 2x2 table: a = first correct, b = first missing/incorrect, c = second
 * correct, d = second missing/incorrect. */
EXL_API exl_status exl_chi_square_2x2(uint64_t a, uint64_t b, uint64_t c, uint64_t d, int yates,
                                      double* chi2, double* p_value);
EXL_API exl_status exl_odds_ratio(uint64_t a, uint64_t b, uint64_t c, uint64_t d,
                                  double* or_correct, double* or_missing_incorrect,
                                  int* haldane_corrected);
/* Scores are 0 or 1. EXL_ERR_UNDEFINED when expected agreement is 1. p_value
 * may be NULL. */
EXL_API exl_status exl_cohen_kappa(const uint8_t* first, const uint8_t* second, size_t n,
                                   double* kappa, double* p_value);
/* *name points to static storage. */
EXL_API exl_status exl_kappa_bucket(double kappa, const char** name);

/* ---- behavior registry ---- */

EXL_API exl_status exl_registry_default(char** registry_json);
/* Applies one definition to a registry document; returns the new document. */
EXL_API exl_status exl_registry_upsert(const char* registry_json, const char* definition_json,
                                       char** out_json);

/* ---- record store ---- */

/* log_path may be NULL for a memory-only store. */
EXL_API exl_status exl_store_open(const char* log_path, exl_store** out);
EXL_API void exl_store_close(exl_store* store);
EXL_API exl_status exl_store_put(exl_store* store, const char* record_json, char** ack_json);
/* filter_json: {session_id?, behavior_name?, from_ms?, to_ms?} or NULL.
 * Result is NDJSON of stored records in sequence order. */
EXL_API exl_status exl_store_query(exl_store* store, const char* filter_json, char** ndjson);
EXL_API exl_status exl_store_size(exl_store* store, size_t* count);
/* Serves HTTP on a background thread; port 0 picks a free port. */
EXL_API exl_status exl_store_serve(exl_store* store, const char* host, int port, int* bound_port);
EXL_API exl_status exl_store_stop(exl_store* store);

/* ---- capture ---- */

/* config_json, all optional:
 *   device_id, store_url (absent: in-process store), store_log,
 *   freshness_ms, weather_mode (live|fixture|off|simulated),
 *   weather_fixture_dir, scenario (sensor layout for the simulated feed),
 *   log_path, sync_period_ms, feed_period_ms */
EXL_API exl_status exl_capture_open(const char* config_json, exl_capture** out);
EXL_API void exl_capture_close(exl_capture* capture);
EXL_API exl_status exl_capture_start_session(exl_capture* capture, const char* location_label,
                                             char** session_json);
EXL_API exl_status exl_capture_end_session(exl_capture* capture, char** session_json);
/* category_name may be NULL. Returns the flattened record. */
EXL_API exl_status exl_capture_click(exl_capture* capture, const char* behavior_name,
                                     const char* category_name, char** record_json);
EXL_API exl_status exl_capture_drain(exl_capture* capture, size_t* acked);
EXL_API exl_status exl_capture_export_log(exl_capture* capture, const char* session_id,
                                          char** ndjson);
EXL_API exl_status exl_capture_status(exl_capture* capture, char** status_json);
EXL_API exl_status exl_capture_serve(exl_capture* capture, const char* host, int port,
                                     int* bound_port);
EXL_API exl_status exl_capture_stop(exl_capture* capture);

/* ---- commands ---- */

/* options_json: {seed?, freshness_ms?, weather_mode?, store_url?, out_dir?}.
 * Returns the loss summary document. */
EXL_API exl_status exl_simulate(const char* scenario_path, const char* options_json,
                                char** summary_json);
/* which: alignment | completeness | kappa | frequency.
 * inputs_json by kind (paths; all default to the bundled fixtures):
 *   alignment    {reference, first, second, first_name?, second_name?, tolerance_ms?}
 *   completeness {records}
 *   kappa        {rater1, rater2}
 *   frequency    {consensus} or {rater1, rater2, resolutions}
 * out_dir may be NULL; otherwise <which>.json and <which>.txt are written. */
EXL_API exl_status exl_report(const char* which, const char* inputs_json, const char* out_dir,
                              char** report_json, char** report_text);
/* Runs every reproduction check against data_dir (NULL: default). Returns
 * EXL_ERR_CHECK_FAILED when any check fails; outputs are filled either way. */
EXL_API exl_status exl_reproduce(const char* data_dir, char** summary_json, char** summary_text);
EXL_API exl_status exl_generate_fixtures(const char* data_dir, uint64_t seed);

#ifdef __cplusplus
}
#endif

#endif
