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

#include "core/tree.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace tabutune {
namespace {

struct PendingNode {
  std::vector<uint32_t> block;  // cols() segments of `size` sorted row ids
  size_t size = 0;
  int depth = 0;
  int id = 0;
};

// Exact greedy grower shared by the classification and gradient trees. The
// policy supplies the node statistics, the split score and the leaf value.
template <class Policy>
class Grower {
 public:
  using Stats = typename Policy::Stats;

  Grower(const FeatureMatrix& x, Policy& policy, int max_depth, size_t max_features,
         Rng* rng)
      : x_(x), policy_(policy), max_depth_(max_depth), max_features_(max_features),
        rng_(rng), go_left_(x.rows(), 0) {
    features_.resize(x.cols());
    std::iota(features_.begin(), features_.end(), 0);
  }

  Tree Grow(std::span<const uint8_t> active) {
    const size_t p = x_.cols();
    PendingNode root;
    for (size_t c = 0; c < p; ++c) {
      for (uint32_t r : x_.sorted(c)) {
        if (active[r]) root.block.push_back(r);
      }
    }
    root.size = p == 0 ? 0 : root.block.size() / p;
    if (p == 0) {
      for (size_t r = 0; r < x_.rows(); ++r) {
        if (active[r]) ++root.size;
      }
    }
    nodes_.clear();
    nodes_.emplace_back();
    std::vector<PendingNode> stack;
    stack.push_back(std::move(root));
    while (!stack.empty()) {
      PendingNode node = std::move(stack.back());
      stack.pop_back();
      Process(std::move(node), &stack);
    }
    return Tree(std::move(nodes_));
  }

 private:
  Stats Accumulate(std::span<const uint32_t> rows) const {
    Stats s{};
    for (uint32_t r : rows) policy_.Add(s, r);
    return s;
  }

  void Process(PendingNode node, std::vector<PendingNode>* stack) {
    const size_t p = x_.cols();
    const size_t m = node.size;
    Stats total{};
    if (p > 0) {
      total = Accumulate({node.block.data(), m});
    }
    nodes_[node.id].value = policy_.LeafValue(total);
    if (p == 0 || (max_depth_ >= 0 && node.depth >= max_depth_) ||
        !policy_.CanSplit(total)) {
      return;
    }

    std::span<const size_t> candidates = features_;
    std::vector<size_t> subset;
    if (max_features_ > 0 && max_features_ < p && rng_ != nullptr) {
      subset = features_;
      for (size_t i = 0; i < max_features_; ++i) {
        std::uniform_int_distribution<size_t> pick(i, p - 1);
        std::swap(subset[i], subset[pick(*rng_)]);
      }
      subset.resize(max_features_);
      std::sort(subset.begin(), subset.end());
      candidates = subset;
    }

    double best_gain = 0.0;
    int best_feature = -1;
    size_t best_left = 0;
    double best_threshold = 0.0;
    for (size_t c : candidates) {
      const uint32_t* seg = node.block.data() + c * m;
      const auto col = x_.column(c);
      Stats left{};
      for (size_t i = 0; i + 1 < m; ++i) {
        policy_.Add(left, seg[i]);
        const double v = col[seg[i]];
        const double next = col[seg[i + 1]];
        if (v == next) continue;
        const Stats right = policy_.Diff(total, left);
        if (!policy_.ChildOk(left) || !policy_.ChildOk(right)) continue;
        const double gain = policy_.Gain(total, left, right);
        if (gain > best_gain && policy_.Accept(gain)) {
          best_gain = gain;
          best_feature = static_cast<int>(c);
          best_left = i + 1;
          double mid = v + (next - v) / 2.0;
          if (!(mid < next)) mid = v;
          best_threshold = mid;
        }
      }
    }
    if (best_feature < 0) return;
    policy_.OnSplit(static_cast<size_t>(best_feature), best_gain);

    const uint32_t* best_seg = node.block.data() + static_cast<size_t>(best_feature) * m;
    for (size_t i = 0; i < m; ++i) go_left_[best_seg[i]] = i < best_left ? 1 : 0;
    const size_t ml = best_left;
    const size_t mr = m - best_left;
    PendingNode left_node, right_node;
    left_node.block.resize(ml * p);
    right_node.block.resize(mr * p);
    for (size_t c = 0; c < p; ++c) {
      const uint32_t* seg = node.block.data() + c * m;
      uint32_t* lo = left_node.block.data() + c * ml;
      uint32_t* ro = right_node.block.data() + c * mr;
      for (size_t i = 0; i < m; ++i) {
        const uint32_t r = seg[i];
        if (go_left_[r]) {
          *lo++ = r;
        } else {
          *ro++ = r;
        }
      }
    }
    node.block.clear();
    node.block.shrink_to_fit();

    left_node.size = ml;
    right_node.size = mr;
    left_node.depth = right_node.depth = node.depth + 1;
    left_node.id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    right_node.id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    TreeNode& parent = nodes_[node.id];
    parent.feature = best_feature;
    parent.threshold = best_threshold;
    parent.left = left_node.id;
    parent.right = right_node.id;
    stack->push_back(std::move(right_node));
    stack->push_back(std::move(left_node));
  }

  const FeatureMatrix& x_;
  Policy& policy_;
  int max_depth_;
  size_t max_features_;
  Rng* rng_;
  std::vector<size_t> features_;
  std::vector<uint8_t> go_left_;
  std::vector<TreeNode> nodes_;
};

class GiniPolicy {
 public:
  struct Stats {
    double w0 = 0.0;
    double w1 = 0.0;
    size_t count = 0;
  };

  GiniPolicy(std::span<const int> labels, std::span<const double> weights,
             const TreeLimits& limits, size_t features)
      : labels_(labels), weights_(weights), limits_(limits), importance_(features, 0.0) {}

  void Add(Stats& s, uint32_t r) const {
    (labels_[r] == 1 ? s.w1 : s.w0) += weights_[r];
    ++s.count;
  }
  Stats Diff(const Stats& a, const Stats& b) const {
    return {a.w0 - b.w0, a.w1 - b.w1, a.count - b.count};
  }
  bool CanSplit(const Stats& s) const {
    return s.count >= std::max<size_t>(limits_.min_samples_split, 2) && s.w0 > 0.0 &&
           s.w1 > 0.0;
  }
  bool ChildOk(const Stats& s) const {
    return s.count >= std::max<size_t>(limits_.min_samples_leaf, 1);
  }
  static double Impurity(const Stats& s) {
    const double w = s.w0 + s.w1;
    if (w <= 0.0) return 0.0;
    return w - (s.w0 * s.w0 + s.w1 * s.w1) / w;
  }
  double Gain(const Stats& parent, const Stats& left, const Stats& right) const {
    return Impurity(parent) - Impurity(left) - Impurity(right);
  }
  bool Accept(double gain) const { return gain > 1e-12; }
  double LeafValue(const Stats& s) const {
    const double w = s.w0 + s.w1;
    return w > 0.0 ? s.w1 / w : 0.5;
  }
  void OnSplit(size_t feature, double gain) { importance_[feature] += gain; }

  std::vector<double> TakeImportance() { return std::move(importance_); }

 private:
  std::span<const int> labels_;
  std::span<const double> weights_;
  TreeLimits limits_;
  std::vector<double> importance_;
};

class GradientPolicy {
 public:
  struct Stats {
    double g = 0.0;
    double h = 0.0;
    size_t count = 0;
  };

  GradientPolicy(std::span<const double> grad, std::span<const double> hess,
                 const GradientTreeParams& params, std::vector<size_t>* split_counts)
      : grad_(grad), hess_(hess), params_(params), split_counts_(split_counts) {}

  void Add(Stats& s, uint32_t r) const {
    s.g += grad_[r];
    s.h += hess_[r];
    ++s.count;
  }
  Stats Diff(const Stats& a, const Stats& b) const {
    return {a.g - b.g, a.h - b.h, a.count - b.count};
  }
  bool CanSplit(const Stats& s) const {
    return s.count >= 2 && s.h >= 2.0 * params_.min_child_weight;
  }
  bool ChildOk(const Stats& s) const { return s.h >= params_.min_child_weight; }
  double Gain(const Stats&, const Stats& left, const Stats& right) const {
    return SplitGain(left.g, left.h, right.g, right.h, params_);
  }
  bool Accept(double gain) const { return gain > 0.0; }
  double LeafValue(const Stats& s) const { return LeafWeight(s.g, s.h, params_); }
  void OnSplit(size_t feature, double) {
    if (split_counts_ != nullptr) ++(*split_counts_)[feature];
  }

 private:
  std::span<const double> grad_;
  std::span<const double> hess_;
  GradientTreeParams params_;
  std::vector<size_t>* split_counts_;
};

}  // namespace

FeatureMatrix::FeatureMatrix(const Dataset& d)
    : rows_(d.rows()), cols_(d.cols()), data_(d.rows() * d.cols()),
      order_(d.rows() * d.cols()) {
  if (rows_ > std::numeric_limits<uint32_t>::max()) {
    throw Error(ErrorCode::kSize, "too many rows for a feature matrix");
  }
  for (size_t r = 0; r < rows_; ++r) {
    for (size_t c = 0; c < cols_; ++c) {
      const double v = d.at(r, c);
      if (IsMissing(v)) {
        throw Error(ErrorCode::kFit, "feature matrix requires imputed data (missing cell in '" +
                                         d.schema()[c].name + "')");
      }
      data_[c * rows_ + r] = v;
    }
  }
  for (size_t c = 0; c < cols_; ++c) {
    uint32_t* ord = order_.data() + c * rows_;
    std::iota(ord, ord + rows_, 0u);
    const double* col = data_.data() + c * rows_;
    std::stable_sort(ord, ord + rows_,
                     [col](uint32_t a, uint32_t b) { return col[a] < col[b]; });
  }
}

double Tree::Predict(std::span<const double> row) const {
  int i = 0;
  while (nodes_[i].feature >= 0) {
    const TreeNode& n = nodes_[i];
    i = row[n.feature] <= n.threshold ? n.left : n.right;
  }
  return nodes_[i].value;
}

double Tree::PredictRow(const FeatureMatrix& x, size_t row) const {
  int i = 0;
  while (nodes_[i].feature >= 0) {
    const TreeNode& n = nodes_[i];
    i = x.value(row, n.feature) <= n.threshold ? n.left : n.right;
  }
  return nodes_[i].value;
}

size_t Tree::LeafCount() const {
  return std::count_if(nodes_.begin(), nodes_.end(),
                       [](const TreeNode& n) { return n.feature < 0; });
}

int Tree::Depth() const {
  if (nodes_.empty()) return 0;
  std::vector<int> depth(nodes_.size(), 0);
  int best = 0;
  for (size_t i = 0; i < nodes_.size(); ++i) {
    const TreeNode& n = nodes_[i];
    if (n.feature >= 0) {
      depth[n.left] = depth[n.right] = depth[i] + 1;
    }
    best = std::max(best, depth[i]);
  }
  return best;
}

nlohmann::json Tree::ToJson() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : nodes_) {
    if (n.feature < 0) {
      nodes.push_back({{"leaf", n.value}});
    } else {
      nodes.push_back({{"feature", n.feature},
                       {"threshold", n.threshold},
                       {"left", n.left},
                       {"right", n.right}});
    }
  }
  return nodes;
}

Tree Tree::FromJson(const nlohmann::json& j) {
  std::vector<TreeNode> nodes;
  for (const auto& jn : j) {
    TreeNode n;
    if (jn.contains("leaf")) {
      n.value = jn["leaf"].get<double>();
    } else {
      n.feature = jn.at("feature").get<int>();
      n.threshold = jn.at("threshold").get<double>();
      n.left = jn.at("left").get<int>();
      n.right = jn.at("right").get<int>();
    }
    nodes.push_back(n);
  }
  return Tree(std::move(nodes));
}

double Gini(std::span<const double> class_counts) {
  double total = 0.0;
  for (double c : class_counts) {
    if (c < 0.0) throw Error(ErrorCode::kDomain, "negative class count");
    total += c;
  }
  if (total <= 0.0) throw Error(ErrorCode::kDomain, "Gini of an empty node");
  double sum_sq = 0.0;
  for (double c : class_counts) sum_sq += (c / total) * (c / total);
  return 1.0 - sum_sq;
}

ClassificationTreeResult FitClassificationTree(const FeatureMatrix& x,
                                               std::span<const int> labels,
                                               std::span<const double> weights,
                                               const TreeLimits& limits, Rng* rng) {
  if (labels.size() != x.rows() || weights.size() != x.rows()) {
    throw Error(ErrorCode::kShape, "tree inputs disagree in row count");
  }
  double total = 0.0;
  std::vector<uint8_t> active(x.rows());
  for (size_t r = 0; r < x.rows(); ++r) {
    if (weights[r] < 0.0) throw Error(ErrorCode::kFit, "negative sample weight");
    active[r] = weights[r] > 0.0;
    total += weights[r];
  }
  if (!(total > 0.0)) throw Error(ErrorCode::kFit, "sample weights sum to zero");
  GiniPolicy policy(labels, weights, limits, x.cols());
  Grower<GiniPolicy> grower(x, policy, limits.max_depth, limits.max_features, rng);
  ClassificationTreeResult out;
  out.tree = grower.Grow(active);
  out.importance = policy.TakeImportance();
  return out;
}

double LeafWeight(double grad_sum, double hess_sum, const GradientTreeParams& p) {
  double w = -grad_sum / (hess_sum + p.lambda);
  if (p.max_delta_step > 0.0) w = std::clamp(w, -p.max_delta_step, p.max_delta_step);
  return w;
}

double SplitGain(double gl, double hl, double gr, double hr,
                 const GradientTreeParams& p) {
  const double g = gl + gr;
  const double h = hl + hr;
  return 0.5 * (gl * gl / (hl + p.lambda) + gr * gr / (hr + p.lambda) -
                g * g / (h + p.lambda)) -
         p.gamma;
}

Tree FitGradientTree(const FeatureMatrix& x, std::span<const double> grad,
                     std::span<const double> hess, std::span<const uint32_t> subset,
                     const GradientTreeParams& params,
                     std::vector<size_t>* split_counts) {
  if (grad.size() != x.rows() || hess.size() != x.rows()) {
    throw Error(ErrorCode::kShape, "gradient inputs disagree in row count");
  }
  std::vector<uint8_t> active(x.rows(), subset.empty() ? 1 : 0);
  for (uint32_t r : subset) active[r] = 1;
  GradientPolicy policy(grad, hess, params, split_counts);
  Grower<GradientPolicy> grower(x, policy, params.max_depth, 0, nullptr);
  return grower.Grow(active);
}

}  // namespace tabutune
