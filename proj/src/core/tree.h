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

#ifndef TABUTUNE_CORE_TREE_H_
#define TABUTUNE_CORE_TREE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "core/common.h"
#include "core/dataset.h"
#include "json.hpp"

namespace tabutune {

// Column-major copy of a complete (no missing cells) dataset, with the row
// order of every feature presorted once. Trees are grown by partitioning
// these sorted lists, so one matrix serves every tree fit on the same data.
class FeatureMatrix {
 public:
  explicit FeatureMatrix(const Dataset& d);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  double value(size_t row, size_t col) const { return data_[col * rows_ + row]; }
  std::span<const double> column(size_t col) const {
    return {data_.data() + col * rows_, rows_};
  }
  std::span<const uint32_t> sorted(size_t col) const {
    return {order_.data() + col * rows_, rows_};
  }

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> data_;
  std::vector<uint32_t> order_;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
};

// Binary decision tree; rows with x[feature] <= threshold go left.
class Tree {
 public:
  Tree() = default;
  explicit Tree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  double Predict(std::span<const double> row) const;
  double PredictRow(const FeatureMatrix& x, size_t row) const;
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::vector<TreeNode>& mutable_nodes() { return nodes_; }
  size_t LeafCount() const;
  int Depth() const;

  nlohmann::json ToJson() const;
  static Tree FromJson(const nlohmann::json& j);

 private:
  std::vector<TreeNode> nodes_;
};

// 1 - sum p_j^2 over the given class counts.
double Gini(std::span<const double> class_counts);

struct TreeLimits {
  int max_depth = -1;  // -1: unlimited; 0: a single leaf
  size_t min_samples_split = 2;
  size_t min_samples_leaf = 1;
  size_t max_features = 0;  // features tried per node; 0: all
};

struct ClassificationTreeResult {
  Tree tree;
  // Total weighted Gini decrease contributed by each feature.
  std::vector<double> importance;
};

// Weighted CART with the Gini criterion. Rows with zero weight take no part.
// Leaves hold the weighted class-1 fraction. `rng` is only consulted when
// limits.max_features restricts the candidate features.
ClassificationTreeResult FitClassificationTree(const FeatureMatrix& x,
                                               std::span<const int> labels,
                                               std::span<const double> weights,
                                               const TreeLimits& limits,
                                               Rng* rng = nullptr);

struct GradientTreeParams {
  int max_depth = 6;  // -1: unlimited
  double lambda = 1.0;
  double gamma = 0.0;
  double min_child_weight = 1.0;
  double max_delta_step = 0.0;  // 0: leaf weights unclipped
};

// Leaf weight -G/(H+lambda), clipped to +-max_delta_step when positive.
double LeafWeight(double grad_sum, double hess_sum, const GradientTreeParams& p);
// 0.5*[GL^2/(HL+l) + GR^2/(HR+l) - G^2/(H+l)] - gamma.
double SplitGain(double gl, double hl, double gr, double hr,
                 const GradientTreeParams& p);

// Second-order regression tree over the rows in `subset` (all rows when
// empty). `split_counts`, when given, is incremented per split feature.
Tree FitGradientTree(const FeatureMatrix& x, std::span<const double> grad,
                     std::span<const double> hess, std::span<const uint32_t> subset,
                     const GradientTreeParams& params,
                     std::vector<size_t>* split_counts = nullptr);

}  // namespace tabutune

#endif  // TABUTUNE_CORE_TREE_H_
