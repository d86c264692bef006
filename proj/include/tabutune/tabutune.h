/*
 * Copyright 2026 The TabuTune Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


/* C interface to the TabuTune library. Every call returns a tt_status;
 * on failure tt_last_error() describes the problem for the calling thread.
 * Strings returned through char** are owned by the caller and released with
 * tt_free_string. */

#ifndef TABUTUNE_TABUTUNE_H_
#define TABUTUNE_TABUTUNE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TT_EXPORT_SYMBOL __declspec(dllexport)
#define TT_IMPORT_SYMBOL __declspec(dllimport)
#else
#define TT_EXPORT_SYMBOL __attribute__((visibility("default")))
#define TT_IMPORT_SYMBOL
#endif

#ifdef TABUTUNE_BUILDING_LIBRARY
#define TT_API TT_EXPORT_SYMBOL
#else
#define TT_API TT_IMPORT_SYMBOL
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tt_status {
  TT_OK = 0,
  TT_ERR_INVALID_ARGUMENT = 1,
  TT_ERR_PARSE = 2,
  TT_ERR_LABEL = 3,
  TT_ERR_IO = 4,
  TT_ERR_SIZE = 5,
  TT_ERR_DOMAIN = 6,
  TT_ERR_SHAPE = 7,
  TT_ERR_SCHEMA = 8,
  TT_ERR_IMPUTE = 9,
  TT_ERR_STRATIFICATION = 10,
  TT_ERR_RESAMPLE = 11,
  TT_ERR_FIT = 12,
  TT_ERR_BUDGET = 13,
  TT_ERR_EVALUATION = 14,
  TT_ERR_SELECTION = 15,
  TT_ERR_INTERNAL = 100
} tt_status;

typedef struct tt_dataset tt_dataset;
typedef struct tt_model tt_model;

TT_API const char* tt_version(void);
TT_API const char* tt_status_name(tt_status status);
/* Message of the last failed call on this thread; "" after a success. */
TT_API const char* tt_last_error(void);
TT_API void tt_free_string(char* s);

/* Datasets */
TT_API tt_status tt_dataset_synth(size_t rows, double admit_fraction, uint64_t seed,
                                  tt_dataset** out);
TT_API tt_status tt_dataset_load_csv(const char* path, const char* schema_path,
                                     tt_dataset** out);
TT_API tt_status tt_dataset_write_csv(const tt_dataset* d, const char* path);
/* Schema declaration JSON, loadable by tt_dataset_load_csv. */
TT_API tt_status tt_dataset_schema_json(const tt_dataset* d, char** out_json);
TT_API tt_status tt_dataset_shape(const tt_dataset* d, size_t* rows, size_t* cols);
TT_API tt_status tt_dataset_missing_cells(const tt_dataset* d, size_t* count);
TT_API tt_status tt_dataset_label_count(const tt_dataset* d, int label, size_t* count);
/* Encode categoricals, KNN-impute (before sampling), sample without
 * replacement. sample_size 0 keeps every row. */
TT_API tt_status tt_dataset_preprocess(const tt_dataset* in, size_t impute_k,
                                       size_t sample_size, uint64_t seed, tt_dataset** out);
TT_API void tt_dataset_free(tt_dataset* d);

/* Experiments. config_json is an experiment configuration document; keys
 * left out keep their defaults. */
TT_API tt_status tt_config_default(int smoke, char** out_json);
/* Runs the nine selection groups on the training split; writes
 * selection.json under output_dir and returns it. */
TT_API tt_status tt_select_groups(const char* config_json, char** out_json);
/* Runs every configured cell, writes traces and reports to output_dir and
 * returns the summary document. */
TT_API tt_status tt_run_matrix(const char* config_json, char** out_json);
/* Refits the best cell recorded under records_dir at each sample size. */
TT_API tt_status tt_sensitivity(const char* config_json, const char* records_dir,
                                const size_t* sizes, size_t n_sizes, char** out_json);
/* Re-renders the report tables from records.json in dir. */
TT_API tt_status tt_emit_report(const char* dir);

/* Models. algo is "gbt", "adab" or "mlp"; params_json maps every tunable
 * parameter name to its value. */
TT_API tt_status tt_model_fit(const tt_dataset* train, const char* algo, const char* params_json,
                              uint64_t seed, tt_model** out);
/* scores must hold one slot per row of d. */
TT_API tt_status tt_model_score(const tt_model* m, const tt_dataset* d, double* scores,
                                size_t n_scores);
TT_API tt_status tt_model_to_json(const tt_model* m, char** out_json);
TT_API tt_status tt_model_from_json(const char* json, tt_model** out);
TT_API void tt_model_free(tt_model* m);

/* Metrics */
TT_API tt_status tt_roc_auc(const int* labels, const double* scores, size_t n, double* auc);
/* Confusion counts at 0.5 and the derived measures as JSON. */
TT_API tt_status tt_evaluate(const int* labels, const double* scores, size_t n,
                             char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* TABUTUNE_TABUTUNE_H_ */
