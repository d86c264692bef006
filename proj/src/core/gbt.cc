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

#include "core/gbt.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/common.h"

namespace tabutune {

double LogLoss(std::span<const int> labels, std::span<const double> margins) {
  double total = 0.0;
  for (size_t i = 0; i < labels.size(); ++i) {
    // log(1 + e^m) - y*m, evaluated stably.
    const double m = margins[i];
    const double softplus = m > 0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m));
    total += softplus - labels[i] * m;
  }
  return labels.empty() ? 0.0 : total / static_cast<double>(labels.size());
}

double GbtModel::Margin(std::span<const double> row) const {
  double m = 0.0;
  for (const Tree& t : trees_) m += t.Predict(row);
  return m;
}

double GbtModel::ScoreRow(std::span<const double> row) const {
  return Sigmoid(Margin(row));
}

nlohmann::json GbtModel::ToJson() const {
  nlohmann::json trees = nlohmann::json::array();
  for (const Tree& t : trees_) trees.push_back(t.ToJson());
  return {
      {"learner", "gbt"},
      {"arity", arity_},
      {"params",
       {{"n_estimators", params_.n_estimators},
        {"max_depth", params_.max_depth},
        {"learning_rate", params_.learning_rate},
        {"gamma", params_.gamma},
        {"max_delta_step", params_.max_delta_step},
        {"n_parallel_trees", params_.n_parallel_trees}}},
      {"split_counts", split_counts_},
      {"training_loss", training_loss_},
      {"trees", trees},
  };
}

std::unique_ptr<GbtModel> GbtModel::FromJson(const nlohmann::json& j) {
  GbtParams p;
  const auto& jp = j.at("params");
  p.n_estimators = jp.at("n_estimators").get<int>();
  p.max_depth = jp.at("max_depth").get<int>();
  p.learning_rate = jp.at("learning_rate").get<double>();
  p.gamma = jp.at("gamma").get<double>();
  p.max_delta_step = jp.at("max_delta_step").get<int>();
  p.n_parallel_trees = jp.at("n_parallel_trees").get<int>();
  std::vector<Tree> trees;
  for (const auto& jt : j.at("trees")) trees.push_back(Tree::FromJson(jt));
  return std::make_unique<GbtModel>(
      j.at("arity").get<size_t>(), p, std::move(trees),
      j.value("split_counts", std::vector<size_t>{}),
      j.value("training_loss", std::vector<double>{}));
}

std::unique_ptr<GbtModel> FitGbt(const TrainingData& train, const GbtParams& p,
                                 uint64_t seed) {
  RequireBothClasses(train.labels(), "gbt");
  if (p.n_estimators < 0 || p.max_depth < 0 || p.learning_rate < 0.0 || p.gamma < 0.0 ||
      p.max_delta_step < 0 || p.n_parallel_trees < 0) {
    throw Error(ErrorCode::kFit, "negative GBT parameter");
  }
  const FeatureMatrix& x = train.matrix();
  const auto& y = train.labels();
  const size_t n = train.rows();

  GradientTreeParams tp;
  tp.max_depth = p.max_depth;
  tp.lambda = kGbtLambda;
  tp.gamma = p.gamma;
  tp.min_child_weight = kGbtMinChildWeight;
  tp.max_delta_step = static_cast<double>(p.max_delta_step);

  const int parallel = std::max(1, p.n_parallel_trees);
  const size_t subsample =
      parallel > 1 ? std::max<size_t>(1, static_cast<size_t>(std::floor(
                                             kGbtParallelSubsample * static_cast<double>(n))))
                   : n;
  const double scale = p.learning_rate / parallel;

  std::vector<double> margin(n, 0.0), grad(n), hess(n);
  std::vector<Tree> trees;
  std::vector<size_t> split_counts(x.cols(), 0);
  std::vector<double> loss_trace;
  std::vector<uint32_t> perm(n), rows;
  std::iota(perm.begin(), perm.end(), 0u);
  Rng rng(seed);

  // A zero learning rate leaves every margin at the base score.
  const int rounds = p.learning_rate > 0.0 ? p.n_estimators : 0;
  for (int round = 0; round < rounds; ++round) {
    for (size_t i = 0; i < n; ++i) {
      const double prob = Sigmoid(margin[i]);
      grad[i] = prob - y[i];
      hess[i] = prob * (1.0 - prob);
    }
    const size_t first_tree = trees.size();
    for (int k = 0; k < parallel; ++k) {
      rows.clear();
      if (parallel > 1) {
        for (size_t i = 0; i < subsample; ++i) {
          std::uniform_int_distribution<size_t> pick(i, n - 1);
          std::swap(perm[i], perm[pick(rng)]);
        }
        rows.assign(perm.begin(), perm.begin() + subsample);
        std::sort(rows.begin(), rows.end());
      }
      Tree t = FitGradientTree(x, grad, hess, rows, tp, &split_counts);
      for (TreeNode& node : t.mutable_nodes()) {
        if (node.feature < 0) node.value *= scale;
      }
      trees.push_back(std::move(t));
    }
    for (size_t i = 0; i < n; ++i) {
      for (size_t t = first_tree; t < trees.size(); ++t) {
        margin[i] += trees[t].PredictRow(x, i);
      }
    }
    loss_trace.push_back(LogLoss(y, margin));
  }
  return std::make_unique<GbtModel>(x.cols(), p, std::move(trees), std::move(split_counts),
                                    std::move(loss_trace));
}

}  // namespace tabutune
