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

#ifndef TABUTUNE_CORE_GBT_H_
#define TABUTUNE_CORE_GBT_H_

#include <cstdint>
#include <memory>
#include <vector>

#include "core/model.h"
#include "core/tree.h"

namespace tabutune {

struct GbtParams {
  int n_estimators = 10;
  int max_depth = 6;  // 0: every tree is a single leaf
  double learning_rate = 0.3;
  double gamma = 0.0;
  int max_delta_step = 0;  // 0: no clipping
  int n_parallel_trees = 1;
};

// Fixed regularization, not tuned.
constexpr double kGbtLambda = 1.0;
constexpr double kGbtMinChildWeight = 1.0;
// Row fraction drawn (without replacement) for each of several parallel trees.
constexpr double kGbtParallelSubsample = 0.8;

// Gradient-boosted trees on the logistic loss. Leaf values are stored already
// scaled by learning_rate / n_parallel_trees, so the raw margin is the plain
// sum over all trees.
class GbtModel : public Model {
 public:
  GbtModel(size_t arity, GbtParams params, std::vector<Tree> trees,
           std::vector<size_t> split_counts, std::vector<double> training_loss)
      : arity_(arity), params_(params), trees_(std::move(trees)),
        split_counts_(std::move(split_counts)), training_loss_(std::move(training_loss)) {}

  Algorithm algorithm() const override { return Algorithm::kGbt; }
  size_t arity() const override { return arity_; }
  double ScoreRow(std::span<const double> row) const override;
  double Margin(std::span<const double> row) const;
  nlohmann::json ToJson() const override;
  static std::unique_ptr<GbtModel> FromJson(const nlohmann::json& j);

  const GbtParams& params() const { return params_; }
  const std::vector<Tree>& trees() const { return trees_; }
  // Number of splits on each feature across all trees (the F-score).
  const std::vector<size_t>& split_counts() const { return split_counts_; }
  // Mean training log-loss after each boosting round.
  const std::vector<double>& training_loss() const { return training_loss_; }

 private:
  size_t arity_;
  GbtParams params_;
  std::vector<Tree> trees_;
  std::vector<size_t> split_counts_;
  std::vector<double> training_loss_;
};

std::unique_ptr<GbtModel> FitGbt(const TrainingData& train, const GbtParams& p,
                                 uint64_t seed);

double LogLoss(std::span<const int> labels, std::span<const double> margins);

}  // namespace tabutune

#endif  // TABUTUNE_CORE_GBT_H_
