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

#ifndef TABUTUNE_CORE_ADABOOST_H_
#define TABUTUNE_CORE_ADABOOST_H_

#include <cstdint>
#include <memory>
#include <vector>

#include "core/model.h"
#include "core/tree.h"

namespace tabutune {

struct AdabParams {
  int n_estimators = 10;
  double learning_rate = 1.0;
  int base_max_depth = 1;
  int base_min_samples_split = 2;
  int base_min_samples_leaf = 1;
};

// Learner weight for a round with weighted error `error`:
// learning_rate * 0.5 * ln((1 - error) / error).
double AdaboostAlpha(double error, double learning_rate);

struct AdaboostRound {
  Tree tree;
  double alpha = 0.0;
  double error = 0.0;  // weighted training error on the round's weights
};

// Discrete two-class AdaBoost over CART trees. Each tree votes +1 when its
// leaf probability is >= 0.5 and -1 otherwise; the score is the logistic of
// the alpha-weighted vote.
class AdaboostModel : public Model {
 public:
  AdaboostModel(size_t arity, AdabParams params, std::vector<AdaboostRound> rounds)
      : arity_(arity), params_(params), rounds_(std::move(rounds)) {}

  Algorithm algorithm() const override { return Algorithm::kAdaboost; }
  size_t arity() const override { return arity_; }
  double ScoreRow(std::span<const double> row) const override;
  double Margin(std::span<const double> row) const;
  nlohmann::json ToJson() const override;
  static std::unique_ptr<AdaboostModel> FromJson(const nlohmann::json& j);

  const std::vector<AdaboostRound>& rounds() const { return rounds_; }
  const AdabParams& params() const { return params_; }

 private:
  size_t arity_;
  AdabParams params_;
  std::vector<AdaboostRound> rounds_;
};

std::unique_ptr<AdaboostModel> FitAdaboost(const TrainingData& train, const AdabParams& p,
                                           uint64_t seed);

}  // namespace tabutune

#endif  // TABUTUNE_CORE_ADABOOST_H_
