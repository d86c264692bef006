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


#ifndef TABUTUNE_CORE_FEATURE_SELECTION_H_
#define TABUTUNE_CORE_FEATURE_SELECTION_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/common.h"
#include "core/dataset.h"
#include "json.hpp"

namespace tabutune {

enum class SelectionMethod {
  kLassoSfm,
  kDtSfm,
  kRfSfm,
  kChiSkb,
  kDtRfe,
  kRfRfe,
  kLassoRfe,
  kVoting,
  kAll,
};

// The seven voting members followed by voting and all.
inline constexpr std::array<SelectionMethod, 9> kSelectionMethods = {
    SelectionMethod::kLassoSfm, SelectionMethod::kDtSfm,  SelectionMethod::kRfSfm,
    SelectionMethod::kChiSkb,   SelectionMethod::kDtRfe,  SelectionMethod::kRfRfe,
    SelectionMethod::kLassoRfe, SelectionMethod::kVoting, SelectionMethod::kAll,
};

const char* SelectionMethodName(SelectionMethod m);
SelectionMethod ParseSelectionMethod(const std::string& name);

struct SelectionResult {
  SelectionMethod method = SelectionMethod::kAll;
  std::vector<size_t> selected;  // ascending column indices
  std::vector<double> scores;    // one per column of the input
};

nlohmann::json SelectionToJson(const SelectionResult& r,
                               const std::vector<std::string>& feature_names);
SelectionResult SelectionFromJson(const nlohmann::json& j,
                                  const std::vector<std::string>& feature_names);

// Pearson statistic of an interval x class contingency table. Cells whose
// expected count is zero contribute nothing.
double ChiSquareFromTable(const std::vector<std::vector<double>>& table);
// Numeric features are cut into `bins` equal-frequency intervals; categorical
// features use their codes as intervals.
std::vector<double> ChiSquareScores(const Dataset& d, size_t bins = 5);

// Top k by score, ties to the lower index. Result is ascending.
std::vector<size_t> SelectKBest(std::span<const double> scores, size_t k);
// Indices with importance >= mean(importances); negative entries count as 0.
std::vector<size_t> SelectFromModel(std::span<const double> importances);

struct LassoConfig {
  double tolerance = 1e-6;
  int max_iterations = 10000;
};

struct LassoFit {
  std::vector<double> coef;
  double intercept = 0.0;
  int iterations = 0;
  bool converged = false;
};

// L1-penalised logistic regression: maximises mean log-likelihood minus
// lambda * |coef|_1, intercept unpenalised. Accelerated proximal gradient.
LassoFit FitLassoLogistic(const Dataset& d, double lambda, const LassoConfig& cfg = {});

// Gini importance of one unrestricted CART fit, normalised to sum 1.
std::vector<double> DtImportance(const Dataset& d);

struct RfConfig {
  size_t n_trees = 100;
  size_t max_features = 0;  // 0: floor(sqrt(p))
  uint64_t seed = 0;
};

struct RfImportanceResult {
  std::vector<double> z;          // mean drop over its standard error
  std::vector<double> mean_drop;  // mean OOB accuracy drop per feature
  bool single_tree = false;       // z holds the raw mean drop
};

// Out-of-bag permutation importance of a bootstrap forest.
RfImportanceResult RfImportance(const Dataset& d, const RfConfig& cfg);

enum class Ranker { kDt, kRf, kLasso };

struct SelectionConfig {
  size_t skb_k = 10;
  size_t chi_bins = 5;
  size_t dt_rfe_keep = 10;
  size_t rf_rfe_keep = 11;
  size_t lasso_rfe_keep = 10;
  size_t rfe_step = 1;
  double lasso_lambda = 0.01;
  size_t rf_trees = 100;
  size_t vote_threshold = 4;
  uint64_t seed = 0;
};

// Importances of `ranker` fitted on every column of `d`: |coef| for lasso
// (inputs min-max scaled first), Gini decrease for dt, OOB z-score for rf
// (may be negative).
std::vector<double> RankerImportance(const Dataset& d, Ranker ranker,
                                     const SelectionConfig& cfg);

// Drops the `step` least important remaining features per round until
// `n_keep` remain. Scores hold the last fit's importance, 0 for dropped ones.
SelectionResult Rfe(const Dataset& d, Ranker ranker, size_t n_keep, size_t step,
                    const SelectionConfig& cfg);

// Features picked by at least `threshold` of the seven member results.
SelectionResult VotingGroup(std::span<const SelectionResult> members, size_t threshold = 4);

// All nine groups, in kSelectionMethods order. Lasso paths see every column
// min-max scaled; the others see `d` as given.
std::vector<SelectionResult> RunSelection(const Dataset& d, const SelectionConfig& cfg);

}  // namespace tabutune

#endif  // TABUTUNE_CORE_FEATURE_SELECTION_H_
