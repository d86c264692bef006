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

#include "core/adaboost.h"

#include <algorithm>
#include <cmath>

#include "core/common.h"

namespace tabutune {

double AdaboostAlpha(double error, double learning_rate) {
  if (!(error > 0.0 && error < 1.0)) {
    throw Error(ErrorCode::kDomain, "AdaBoost error must lie in (0,1)");
  }
  return learning_rate * 0.5 * std::log((1.0 - error) / error);
}

double AdaboostModel::Margin(std::span<const double> row) const {
  double m = 0.0;
  for (const auto& r : rounds_) m += r.alpha * (r.tree.Predict(row) >= 0.5 ? 1.0 : -1.0);
  return m;
}

double AdaboostModel::ScoreRow(std::span<const double> row) const {
  return Sigmoid(Margin(row));
}

nlohmann::json AdaboostModel::ToJson() const {
  nlohmann::json rounds = nlohmann::json::array();
  for (const auto& r : rounds_) {
    rounds.push_back({{"alpha", r.alpha}, {"error", r.error}, {"tree", r.tree.ToJson()}});
  }
  return {
      {"learner", "adab"},
      {"arity", arity_},
      {"params",
       {{"n_estimators", params_.n_estimators},
        {"learning_rate", params_.learning_rate},
        {"base_max_depth", params_.base_max_depth},
        {"base_min_samples_split", params_.base_min_samples_split},
        {"base_min_samples_leaf", params_.base_min_samples_leaf}}},
      {"rounds", rounds},
  };
}

std::unique_ptr<AdaboostModel> AdaboostModel::FromJson(const nlohmann::json& j) {
  AdabParams p;
  const auto& jp = j.at("params");
  p.n_estimators = jp.at("n_estimators").get<int>();
  p.learning_rate = jp.at("learning_rate").get<double>();
  p.base_max_depth = jp.at("base_max_depth").get<int>();
  p.base_min_samples_split = jp.at("base_min_samples_split").get<int>();
  p.base_min_samples_leaf = jp.at("base_min_samples_leaf").get<int>();
  std::vector<AdaboostRound> rounds;
  for (const auto& jr : j.at("rounds")) {
    rounds.push_back({Tree::FromJson(jr.at("tree")), jr.at("alpha").get<double>(),
                      jr.at("error").get<double>()});
  }
  return std::make_unique<AdaboostModel>(j.at("arity").get<size_t>(), p, std::move(rounds));
}

std::unique_ptr<AdaboostModel> FitAdaboost(const TrainingData& train, const AdabParams& p,
                                           uint64_t /*seed*/) {
  RequireBothClasses(train.labels(), "adaboost");
  if (p.n_estimators < 0 || p.learning_rate < 0.0 || p.base_max_depth < 0 ||
      p.base_min_samples_split < 0 || p.base_min_samples_leaf < 0) {
    throw Error(ErrorCode::kFit, "negative AdaBoost parameter");
  }
  const FeatureMatrix& x = train.matrix();
  const auto& y = train.labels();
  const size_t n = train.rows();

  TreeLimits limits;
  limits.max_depth = p.base_max_depth;
  limits.min_samples_split = static_cast<size_t>(std::max(2, p.base_min_samples_split));
  limits.min_samples_leaf = static_cast<size_t>(std::max(1, p.base_min_samples_leaf));

  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  std::vector<uint8_t> wrong(n);
  std::vector<AdaboostRound> rounds;
  for (int t = 0; t < p.n_estimators; ++t) {
    ClassificationTreeResult fit = FitClassificationTree(x, y, w, limits);
    double err = 0.0, total = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const int h = fit.tree.PredictRow(x, i) >= 0.5 ? 1 : 0;
      wrong[i] = h != y[i];
      err += wrong[i] ? w[i] : 0.0;
      total += w[i];
    }
    err /= total;
    if (err >= 0.5) break;
    if (err <= 0.0) {
      // A perfect learner ends boosting; it keeps unit weight.
      rounds.push_back({std::move(fit.tree), p.learning_rate, 0.0});
      break;
    }
    const double alpha = AdaboostAlpha(err, p.learning_rate);
    rounds.push_back({std::move(fit.tree), alpha, err});
    if (alpha == 0.0) break;  // weights would never change again
    const double boost = std::exp(alpha);
    double sum = 0.0;
    for (size_t i = 0; i < n; ++i) {
      if (wrong[i]) w[i] *= boost;
      sum += w[i];
    }
    for (double& wi : w) wi /= sum;
  }
  return std::make_unique<AdaboostModel>(x.cols(), p, std::move(rounds));
}

}  // namespace tabutune
