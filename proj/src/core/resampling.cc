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

#include "core/resampling.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "core/common.h"

namespace tabutune {

Dataset Smote(const Dataset& train, const SmoteConfig& cfg) {
  if (cfg.k_neighbors < 1) {
    throw Error(ErrorCode::kInvalidArgument, "SMOTE needs k_neighbors >= 1");
  }
  if (!(cfg.target_ratio > 0.0 && cfg.target_ratio <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "SMOTE target ratio must lie in (0,1]");
  }
  if (train.CountMissing() != 0) {
    throw Error(ErrorCode::kResample, "SMOTE requires data without missing cells");
  }
  const size_t n0 = train.CountLabel(0);
  const size_t n1 = train.CountLabel(1);
  const int minority_label = n0 <= n1 ? 0 : 1;
  const size_t minority = std::min(n0, n1);
  const size_t majority = std::max(n0, n1);
  const auto wanted = static_cast<size_t>(
      std::llround(cfg.target_ratio * static_cast<double>(majority)));
  if (wanted <= minority) return train;
  const size_t deficit = wanted - minority;
  if (minority < cfg.k_neighbors + 1) {
    throw Error(ErrorCode::kResample,
                "minority class has " + std::to_string(minority) +
                    " rows; SMOTE needs at least k_neighbors + 1");
  }

  const size_t p = train.cols();
  std::vector<size_t> members;
  for (size_t r = 0; r < train.rows(); ++r) {
    if (train.labels()[r] == minority_label) members.push_back(r);
  }
  std::vector<size_t> metric_cols;
  for (size_t c = 0; c < p; ++c) {
    if (train.schema()[c].kind == FeatureKind::kNumeric) metric_cols.push_back(c);
  }
  if (metric_cols.empty()) {
    metric_cols.resize(p);
    std::iota(metric_cols.begin(), metric_cols.end(), 0);
  }

  // k nearest minority neighbours of each minority row, ties by index.
  const size_t m = members.size();
  const size_t k = cfg.k_neighbors;
  std::vector<size_t> neighbours(m * k);
  std::vector<std::pair<double, size_t>> dist;
  dist.reserve(m);
  for (size_t i = 0; i < m; ++i) {
    dist.clear();
    auto xi = train.row(members[i]);
    for (size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      auto xj = train.row(members[j]);
      double s = 0.0;
      for (size_t c : metric_cols) {
        const double diff = xi[c] - xj[c];
        s += diff * diff;
      }
      dist.emplace_back(s, j);
    }
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    for (size_t t = 0; t < k; ++t) neighbours[i * k + t] = dist[t].second;
  }

  std::vector<bool> numeric(p);
  for (size_t c = 0; c < p; ++c) {
    numeric[c] = train.schema()[c].kind == FeatureKind::kNumeric;
  }
  Rng rng(cfg.seed);
  std::uniform_int_distribution<size_t> pick_seed(0, m - 1);
  std::uniform_int_distribution<size_t> pick_nn(0, k - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> values;
  values.reserve(deficit * p);
  for (size_t s = 0; s < deficit; ++s) {
    const size_t i = pick_seed(rng);
    const size_t nn = neighbours[i * k + pick_nn(rng)];
    const double u = unit(rng);
    auto x = train.row(members[i]);
    auto y = train.row(members[nn]);
    for (size_t c = 0; c < p; ++c) {
      values.push_back(numeric[c] ? x[c] + u * (y[c] - x[c]) : x[c]);
    }
  }
  Dataset synthetic(train.schema(), std::move(values),
                    std::vector<int>(deficit, minority_label));
  return train.Concat(synthetic);
}

}  // namespace tabutune
