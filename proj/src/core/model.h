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

#ifndef TABUTUNE_CORE_MODEL_H_
#define TABUTUNE_CORE_MODEL_H_

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "core/dataset.h"
#include "core/tree.h"
#include "json.hpp"

namespace tabutune {

enum class Algorithm { kGbt, kAdaboost, kMlp };

std::string AlgorithmName(Algorithm a);  // "gbt", "adab", "mlp"
Algorithm ParseAlgorithm(const std::string& name);

// A training set prepared once and shared by every fit on it.
class TrainingData {
 public:
  explicit TrainingData(Dataset d) : data_(std::move(d)), matrix_(data_) {}

  const Dataset& dataset() const { return data_; }
  const FeatureMatrix& matrix() const { return matrix_; }
  const std::vector<int>& labels() const { return data_.labels(); }
  size_t rows() const { return data_.rows(); }
  size_t cols() const { return data_.cols(); }

 private:
  Dataset data_;
  FeatureMatrix matrix_;
};

// A fitted classifier scoring the probability of class 1.
class Model {
 public:
  virtual ~Model() = default;

  virtual Algorithm algorithm() const = 0;
  virtual size_t arity() const = 0;
  virtual double ScoreRow(std::span<const double> row) const = 0;
  // Throws kSchema when the row arity differs from the training arity.
  virtual std::vector<double> Score(const Dataset& rows) const;
  virtual nlohmann::json ToJson() const = 0;
};

std::unique_ptr<Model> ModelFromJson(const nlohmann::json& j);

void RequireBothClasses(std::span<const int> labels, const char* learner);

}  // namespace tabutune

#endif  // TABUTUNE_CORE_MODEL_H_
