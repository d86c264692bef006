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

#include "core/metrics.h"

#include <algorithm>
#include <cstdint>
#include <numeric>

#include "core/common.h"

namespace tabutune {
namespace {

void CheckShapes(std::span<const int> labels, std::span<const double> scores) {
  if (labels.size() != scores.size()) {
    throw Error(ErrorCode::kShape, "labels and scores differ in length (" +
                                       std::to_string(labels.size()) + " vs " +
                                       std::to_string(scores.size()) + ")");
  }
}

double Ratio(size_t num, size_t den, const char* name,
             std::vector<std::string>* undefined) {
  if (den == 0) {
    undefined->push_back(name);
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

Confusion ConfusionAt(std::span<const int> labels, std::span<const double> scores,
                      double threshold) {
  CheckShapes(labels, scores);
  Confusion c;
  for (size_t i = 0; i < labels.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    if (labels[i] == 1) {
      predicted ? ++c.tp : ++c.fn;
    } else {
      predicted ? ++c.fp : ++c.tn;
    }
  }
  return c;
}

Roc RocAuc(std::span<const int> labels, std::span<const double> scores) {
  CheckShapes(labels, scores);
  const size_t n = labels.size();
  const auto pos = static_cast<uint64_t>(std::count(labels.begin(), labels.end(), 1));
  const uint64_t neg = n - pos;
  if (pos == 0 || neg == 0) {
    throw Error(ErrorCode::kDomain, "ROC AUC needs both classes present");
  }
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] > scores[b]; });

  Roc roc;
  roc.points.push_back({0.0, 0.0});
  // Twice the area, in units of (1 negative) x (1 positive).
  uint64_t area2 = 0;
  uint64_t tp = 0, fp = 0;
  for (size_t i = 0; i < n;) {
    const double s = scores[order[i]];
    uint64_t dtp = 0, dfp = 0;
    for (; i < n && scores[order[i]] == s; ++i) {
      labels[order[i]] == 1 ? ++dtp : ++dfp;
    }
    area2 += dfp * (2 * tp + dtp);
    tp += dtp;
    fp += dfp;
    roc.points.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                          static_cast<double>(tp) / static_cast<double>(pos)});
  }
  roc.auc = static_cast<double>(area2) / (2.0 * static_cast<double>(pos * neg));
  return roc;
}

double Auc(std::span<const int> labels, std::span<const double> scores) {
  return RocAuc(labels, scores).auc;
}

MetricsReport DeriveMetrics(const Confusion& c) {
  if (c.total() == 0) throw Error(ErrorCode::kDomain, "empty confusion matrix");
  MetricsReport m;
  m.confusion = c;
  // Denominator is TP+TN+FP+FN.
  m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  m.sensitivity = Ratio(c.tp, c.tp + c.fn, "sensitivity", &m.undefined);
  m.specificity = Ratio(c.tn, c.tn + c.fp, "specificity", &m.undefined);
  m.precision = Ratio(c.tp, c.tp + c.fp, "precision", &m.undefined);
  if (m.precision + m.sensitivity == 0.0) {
    m.undefined.push_back("f1");
    m.f1 = 0.0;
  } else {
    m.f1 = 2.0 * m.precision * m.sensitivity / (m.precision + m.sensitivity);
  }
  return m;
}

MetricsReport Evaluate(std::span<const int> labels, std::span<const double> scores,
                       double threshold) {
  MetricsReport m = DeriveMetrics(ConfusionAt(labels, scores, threshold));
  Roc roc = RocAuc(labels, scores);
  m.auc = roc.auc;
  m.roc = std::move(roc.points);
  return m;
}

nlohmann::json MetricsToJson(const MetricsReport& m, bool with_roc) {
  nlohmann::json j = {
      {"tp", m.confusion.tp},
      {"fp", m.confusion.fp},
      {"tn", m.confusion.tn},
      {"fn", m.confusion.fn},
      {"accuracy", m.accuracy},
      {"sensitivity", m.sensitivity},
      {"specificity", m.specificity},
      {"precision", m.precision},
      {"f1", m.f1},
      {"auc", m.auc},
      {"undefined", m.undefined},
  };
  if (with_roc) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : m.roc) pts.push_back({p.fpr, p.tpr});
    j["roc"] = std::move(pts);
  }
  return j;
}

MetricsReport MetricsFromJson(const nlohmann::json& j) {
  MetricsReport m;
  m.confusion.tp = j.at("tp").get<size_t>();
  m.confusion.fp = j.at("fp").get<size_t>();
  m.confusion.tn = j.at("tn").get<size_t>();
  m.confusion.fn = j.at("fn").get<size_t>();
  m.accuracy = j.at("accuracy").get<double>();
  m.sensitivity = j.at("sensitivity").get<double>();
  m.specificity = j.at("specificity").get<double>();
  m.precision = j.at("precision").get<double>();
  m.f1 = j.at("f1").get<double>();
  m.auc = j.at("auc").get<double>();
  if (j.contains("undefined")) m.undefined = j["undefined"].get<std::vector<std::string>>();
  if (j.contains("roc")) {
    for (const auto& p : j["roc"]) m.roc.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return m;
}

}  // namespace tabutune
