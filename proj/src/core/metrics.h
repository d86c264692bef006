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

#ifndef TABUTUNE_CORE_METRICS_H_
#define TABUTUNE_CORE_METRICS_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace tabutune {

// Class 1 (discharged) is the positive class.
struct Confusion {
  size_t tp = 0;
  size_t fp = 0;
  size_t tn = 0;
  size_t fn = 0;

  size_t total() const { return tp + fp + tn + fn; }
};

constexpr double kDefaultThreshold = 0.5;

// Predicts 1 iff score >= threshold.
Confusion ConfusionAt(std::span<const int> labels, std::span<const double> scores,
                      double threshold = kDefaultThreshold);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct Roc {
  double auc = 0.0;
  std::vector<RocPoint> points;
};

// Trapezoidal area under the ROC curve with tied scores grouped into one
// step. The area is accumulated in integer units, so it equals the
// Mann-Whitney pair count exactly.
Roc RocAuc(std::span<const int> labels, std::span<const double> scores);
double Auc(std::span<const int> labels, std::span<const double> scores);

struct MetricsReport {
  Confusion confusion;
  double accuracy = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  double auc = 0.0;
  std::vector<RocPoint> roc;
  // Names of measures whose ratio was 0/0 and was reported as 0.
  std::vector<std::string> undefined;
};

MetricsReport DeriveMetrics(const Confusion& c);
MetricsReport Evaluate(std::span<const int> labels, std::span<const double> scores,
                       double threshold = kDefaultThreshold);

nlohmann::json MetricsToJson(const MetricsReport& m, bool with_roc = true);
MetricsReport MetricsFromJson(const nlohmann::json& j);

}  // namespace tabutune

#endif  // TABUTUNE_CORE_METRICS_H_
