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


#ifndef TABUTUNE_CORE_EXPERIMENT_H_
#define TABUTUNE_CORE_EXPERIMENT_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "core/dataset.h"
#include "core/feature_selection.h"
#include "core/metrics.h"
#include "core/model.h"
#include "core/resampling.h"
#include "core/tuning.h"
#include "json.hpp"

namespace tabutune {

// A matrix column: a learner plus the optimizer that tunes it.
struct Variant {
  Algorithm algorithm = Algorithm::kGbt;
  bool tabu = true;  // false: grid search
};

// "t_gbt", "t_adab", "t_mlp", "gbt", "adab", "mlp".
std::string VariantName(const Variant& v);
Variant ParseVariant(const std::string& name);
// Tabu variants first, then the grid baselines.
std::vector<Variant> AllVariants();

struct ExperimentConfig {
  uint64_t seed = 42;
  std::string profile = "default";

  // Data source: a CSV file when data_path is set, otherwise the generator.
  std::string data_path;
  std::string schema_path;  // required with data_path
  size_t synth_rows = 5000;
  double admit_fraction = 0.2;

  size_t impute_k = 4;
  // Impute after sampling instead of on the full table.
  bool impute_after_sample = false;
  size_t sample_size = 5000;  // 0: every row
  double test_fraction = 0.3;
  // Share of the training split held out to score candidates during tuning.
  double tuning_fraction = 0.3;
  // Score candidates on the reporting test split instead.
  bool single_split = false;

  SmoteConfig smote;
  SelectionConfig selection;
  // Precomputed selection groups (selection.json); recomputed when empty.
  std::string selection_path;

  TsConfig ts;
  size_t grid_budget = 0;  // 0: ts.max_iterations * ts.neighborhood_size
  LearnerOptions learner;

  std::vector<std::string> groups;    // empty: all nine
  std::vector<std::string> variants;  // empty: all six
  size_t workers = 0;  // 0: one per hardware thread
  std::string output_dir = "out";
};

ExperimentConfig SmokeConfig();
nlohmann::json ConfigToJson(const ExperimentConfig& cfg);
// Keys absent from `j` keep the values of `base`.
ExperimentConfig ConfigFromJson(const nlohmann::json& j, const ExperimentConfig& base = {});
// TABUTUNE_SEED, when set, replaces cfg.seed.
void ApplySeedOverride(ExperimentConfig& cfg);

struct PreparedData {
  Dataset sample;  // encoded, imputed, sampled
  Dataset train;
  Dataset test;
  std::vector<std::string> feature_names;
};

// Load or generate, encode, impute, sample, stratified split.
PreparedData Prepare(const ExperimentConfig& cfg);
// Encode, impute and sample only.
Dataset PrepareDataset(const Dataset& raw, size_t impute_k, size_t sample_size, uint64_t seed,
                       bool impute_after_sample = false);

struct RunRecord {
  std::string group;
  std::string algo;
  bool failed = false;
  std::string error;
  MetricsReport metrics;
  nlohmann::json best_params;  // name -> value
  std::vector<std::string> features;
  double tuning_auc = 0.0;  // best objective seen by the optimizer
  size_t evaluations = 0;
  size_t fit_failures = 0;
  int iterations = 0;
  std::string trace_path;  // relative to the output directory
  double wall_seconds = 0.0;
  std::vector<double> best_by_iteration;
  std::map<std::string, double> split_counts;  // gbt variants only
};

nlohmann::json RecordToJson(const RunRecord& r);
RunRecord RecordFromJson(const nlohmann::json& j);

struct MatrixResult {
  std::vector<std::string> feature_names;
  std::vector<SelectionResult> selection;
  std::vector<RunRecord> records;
};

std::vector<SelectionResult> SelectGroups(const Dataset& train, const ExperimentConfig& cfg);
std::vector<SelectionResult> LoadSelection(const std::string& path,
                                           const std::vector<std::string>& feature_names);

// Tunes one cell and evaluates the refitted best model on the test split.
// Writes the trace under cfg.output_dir. Throws on any stage failure.
RunRecord RunCell(const PreparedData& data, const SelectionResult& group, const Variant& variant,
                  const ExperimentConfig& cfg);

// Every (group, variant) cell of the configuration. Failed cells are kept
// with failed = true. Writes traces and the report bundle to cfg.output_dir.
MatrixResult RunMatrix(const ExperimentConfig& cfg);

// Index of the record with the highest test AUC among successful ones; -1
// when there is none.
int BestRecord(const std::vector<RunRecord>& records);

struct SensitivityPoint {
  size_t sample_size = 0;
  MetricsReport metrics;
};

// Refits one cell with fixed parameters and features at each sample size.
std::vector<SensitivityPoint> SensitivityAnalysis(const ExperimentConfig& cfg,
                                                  const RunRecord& cell,
                                                  const std::vector<size_t>& sizes);

// Writes records.json, selection.json, metrics.csv, selection.csv,
// params_<algo>.csv, convergence.csv, feature_importance.csv, summary.json.
void EmitReport(const MatrixResult& result, const std::string& dir);
MatrixResult LoadMatrixResult(const std::string& dir);

}  // namespace tabutune

#endif  // TABUTUNE_CORE_EXPERIMENT_H_
