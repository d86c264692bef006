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

#include "core/learner.h"

#include <cmath>

#include "core/common.h"

namespace tabutune {
namespace {

int AsInt(double v) { return static_cast<int>(std::llround(v)); }

void RequireSize(const ParamVector& v, size_t n, const char* learner) {
  if (v.size() != n) {
    throw Error(ErrorCode::kInvalidArgument, std::string(learner) + " expects " +
                                                 std::to_string(n) + " parameters, got " +
                                                 std::to_string(v.size()));
  }
}

}  // namespace

std::string AlgorithmName(Algorithm a) {
  switch (a) {
    case Algorithm::kGbt:
      return "gbt";
    case Algorithm::kAdaboost:
      return "adab";
    case Algorithm::kMlp:
      return "mlp";
  }
  return "unknown";
}

Algorithm ParseAlgorithm(const std::string& name) {
  if (name == "gbt" || name == "xgb") return Algorithm::kGbt;
  if (name == "adab" || name == "adaboost") return Algorithm::kAdaboost;
  if (name == "mlp") return Algorithm::kMlp;
  throw Error(ErrorCode::kInvalidArgument, "unknown algorithm '" + name + "'");
}

void RequireBothClasses(std::span<const int> labels, const char* learner) {
  bool has0 = false, has1 = false;
  for (int y : labels) (y == 1 ? has1 : has0) = true;
  if (!has0 || !has1) {
    throw Error(ErrorCode::kFit, std::string(learner) + " needs both classes in training data");
  }
}

std::vector<double> Model::Score(const Dataset& rows) const {
  if (rows.cols() != arity()) {
    throw Error(ErrorCode::kSchema, "model expects " + std::to_string(arity()) +
                                        " features, got " + std::to_string(rows.cols()));
  }
  std::vector<double> out(rows.rows());
  for (size_t r = 0; r < rows.rows(); ++r) out[r] = ScoreRow(rows.row(r));
  return out;
}

std::unique_ptr<Model> ModelFromJson(const nlohmann::json& j) {
  const std::string kind = j.at("learner").get<std::string>();
  switch (ParseAlgorithm(kind)) {
    case Algorithm::kGbt:
      return GbtModel::FromJson(j);
    case Algorithm::kAdaboost:
      return AdaboostModel::FromJson(j);
    case Algorithm::kMlp:
      return MlpModel::FromJson(j);
  }
  return nullptr;
}

ParamSpace DefaultSpace(Algorithm a) {
  constexpr auto kInt = ParamKind::kInteger;
  constexpr auto kFloat = ParamKind::kFloat;
  // Open lower bounds (0, 1] are represented by a small positive floor.
  constexpr double kOpen = 1e-6;
  switch (a) {
    case Algorithm::kGbt:
      return {
          {"n_estimators", kInt, 1, 50, 1, 5},
          {"max_depth", kInt, 0, 50, 0, 5},
          {"learning_rate", kFloat, 0, 1, 0.001, 0.1},
          {"gamma", kFloat, 0, 50, 0, 5},
          {"max_delta_step", kInt, 0, 50, 0, 5},
          {"n_parallel_trees", kInt, 0, 50, 0, 5},
      };
    case Algorithm::kAdaboost:
      return {
          {"n_estimators", kInt, 1, 50, 1, 5},
          {"learning_rate", kFloat, 0, 1, 0.01, 0.1},
          {"base_max_depth", kInt, 1, 50, 1, 5},
          {"base_min_samples_split", kInt, 1, 50, 1, 5},
          {"base_min_samples_leaf", kInt, 1, 50, 1, 5},
      };
    case Algorithm::kMlp:
      return {
          {"hidden_1", kInt, 1, 30, 1, 5},
          {"hidden_2", kInt, 1, 30, 1, 5},
          {"hidden_3", kInt, 1, 30, 1, 5},
          {"learning_rate", kFloat, kOpen, 1, 0.01, 0.1},
          {"momentum", kFloat, kOpen, 1, 0.001, 0.1},
          {"alpha", kFloat, kOpen, 1, 0.001, 0.1},
      };
  }
  return {};
}

GbtParams DecodeGbt(const ParamVector& v) {
  RequireSize(v, 6, "gbt");
  GbtParams p;
  p.n_estimators = AsInt(v[0]);
  p.max_depth = AsInt(v[1]);
  p.learning_rate = v[2];
  p.gamma = v[3];
  p.max_delta_step = AsInt(v[4]);
  p.n_parallel_trees = AsInt(v[5]);
  return p;
}

AdabParams DecodeAdab(const ParamVector& v) {
  RequireSize(v, 5, "adab");
  AdabParams p;
  p.n_estimators = AsInt(v[0]);
  p.learning_rate = v[1];
  p.base_max_depth = AsInt(v[2]);
  p.base_min_samples_split = AsInt(v[3]);
  p.base_min_samples_leaf = AsInt(v[4]);
  return p;
}

MlpParams DecodeMlp(const ParamVector& v, int epochs) {
  RequireSize(v, 6, "mlp");
  MlpParams p;
  p.hidden = {AsInt(v[0]), AsInt(v[1]), AsInt(v[2])};
  p.learning_rate = v[3];
  p.momentum = v[4];
  p.alpha = v[5];
  p.epochs = epochs;
  return p;
}

bool UsesNormalizedInputs(Algorithm a) { return a == Algorithm::kMlp; }

std::unique_ptr<Model> FitModel(Algorithm a, const TrainingData& train,
                                const ParamVector& params, uint64_t seed,
                                const LearnerOptions& options) {
  switch (a) {
    case Algorithm::kGbt:
      return FitGbt(train, DecodeGbt(params), seed);
    case Algorithm::kAdaboost:
      return FitAdaboost(train, DecodeAdab(params), seed);
    case Algorithm::kMlp:
      return FitMlp(train, DecodeMlp(params, options.mlp_epochs), seed);
  }
  return nullptr;
}

}  // namespace tabutune
