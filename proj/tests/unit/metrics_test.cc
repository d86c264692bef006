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


#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "core/common.h"
#include "core/metrics.h"
#include "doctest.h"
#include "oracles/oracles.h"

using namespace tabutune;

TEST_SUITE("metrics") {
TEST_CASE("confusion counts at the default threshold") {
  std::vector<int> labels = {1, 1, 0, 0};
  std::vector<double> scores = {0.9, 0.4, 0.6, 0.1};
  const Confusion c = ConfusionAt(labels, scores);
  CHECK(c.tp == 1);
  CHECK(c.fn == 1);
  CHECK(c.fp == 1);
  CHECK(c.tn == 1);
}

TEST_CASE("scores equal to labels give no errors") {
  std::vector<int> labels = {1, 0, 1, 1, 0};
  std::vector<double> scores(labels.begin(), labels.end());
  const Confusion c = ConfusionAt(labels, scores);
  CHECK(c.fp == 0);
  CHECK(c.fn == 0);
}

TEST_CASE("all-zero scores predict the negative class") {
  std::vector<int> labels = {1, 0, 1, 0, 1, 0};
  std::vector<double> scores(6, 0.0);
  const Confusion c = ConfusionAt(labels, scores);
  CHECK(c.tp == 0);
  CHECK(c.fn == 3);
  CHECK(c.tn == 3);
  CHECK(c.fp == 0);
}

TEST_CASE("a score exactly at the threshold is positive") {
  std::vector<int> labels = {1, 0};
  std::vector<double> scores = {0.5, 0.5};
  const Confusion c = ConfusionAt(labels, scores);
  CHECK(c.tp == 1);
  CHECK(c.fp == 1);
}

TEST_CASE("length mismatch is a shape error") {
  std::vector<int> labels = {1, 0};
  std::vector<double> scores = {0.5};
  try {
    ConfusionAt(labels, scores);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kShape);
  }
}

TEST_CASE("derived measures match the textbook formulas") {
  Confusion c{50, 10, 40, 0};
  const MetricsReport m = DeriveMetrics(c);
  CHECK(m.sensitivity == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.specificity == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(m.accuracy == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(m.precision == doctest::Approx(50.0 / 60.0).epsilon(1e-12));
  CHECK(m.f1 == doctest::Approx(100.0 / 110.0).epsilon(1e-12));
  CHECK(std::abs(m.precision - 0.8333) < 1e-4);
  CHECK(std::abs(m.f1 - 0.9091) < 1e-4);
}

TEST_CASE("perfect confusion scores one everywhere") {
  const MetricsReport m = DeriveMetrics({7, 0, 9, 0});
  CHECK(m.accuracy == 1.0);
  CHECK(m.sensitivity == 1.0);
  CHECK(m.specificity == 1.0);
  CHECK(m.precision == 1.0);
  CHECK(m.f1 == 1.0);
  CHECK(m.undefined.empty());
}

TEST_CASE("0/0 ratios are reported as zero and flagged") {
  const MetricsReport m = DeriveMetrics({0, 0, 5, 3});
  CHECK(m.precision == 0.0);
  CHECK(m.f1 == 0.0);
  CHECK(std::find(m.undefined.begin(), m.undefined.end(), "precision") != m.undefined.end());
}

TEST_CASE("empty confusion is a domain error") {
  try {
    DeriveMetrics({0, 0, 0, 0});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDomain);
  }
}

TEST_CASE("accuracy times total equals tp + tn") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> count(0, 40);
  for (int trial = 0; trial < 200; ++trial) {
    Confusion c{static_cast<size_t>(count(rng)), static_cast<size_t>(count(rng)),
                static_cast<size_t>(count(rng)), static_cast<size_t>(count(rng)) + 1};
    const MetricsReport m = DeriveMetrics(c);
    CHECK(m.accuracy * static_cast<double>(c.total()) ==
          doctest::Approx(static_cast<double>(c.tp + c.tn)).epsilon(1e-12));
    const auto h = oracle::Metrics(c.tp, c.fp, c.tn, c.fn);
    CHECK(std::abs(m.sensitivity - h.sensitivity) < 1e-12);
    CHECK(std::abs(m.specificity - h.specificity) < 1e-12);
    CHECK(std::abs(m.precision - h.precision) < 1e-12);
    CHECK(std::abs(m.f1 - h.f1) < 1e-12);
  }
}

TEST_CASE("auc worked example") {
  std::vector<int> labels = {0, 0, 1, 1};
  std::vector<double> scores = {0.1, 0.4, 0.35, 0.8};
  CHECK(Auc(labels, scores) == 0.75);
}

TEST_CASE("auc of perfect and constant scores") {
  std::vector<int> labels = {0, 1, 0, 1, 1};
  std::vector<double> perfect(labels.begin(), labels.end());
  CHECK(Auc(labels, perfect) == 1.0);
  std::vector<double> flat(labels.size(), 0.3);
  CHECK(Auc(labels, flat) == 0.5);
}

TEST_CASE("single-class labels are a domain error") {
  std::vector<int> labels = {1, 1, 1};
  std::vector<double> scores = {0.2, 0.4, 0.9};
  try {
    Auc(labels, scores);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDomain);
  }
}

TEST_CASE("roc curve runs from (0,0) to (1,1) monotonically") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> bit(0, 1);
  std::uniform_int_distribution<int> level(0, 6);
  std::vector<int> labels;
  std::vector<double> scores;
  for (int i = 0; i < 40; ++i) {
    labels.push_back(bit(rng));
    scores.push_back(level(rng) / 6.0);
  }
  labels[0] = 0;
  labels[1] = 1;
  const Roc roc = RocAuc(labels, scores);
  REQUIRE(roc.points.size() >= 2);
  CHECK(roc.points.front().fpr == 0.0);
  CHECK(roc.points.front().tpr == 0.0);
  CHECK(roc.points.back().fpr == 1.0);
  CHECK(roc.points.back().tpr == 1.0);
  for (size_t i = 1; i < roc.points.size(); ++i) {
    CHECK(roc.points[i].fpr >= roc.points[i - 1].fpr);
    CHECK(roc.points[i].tpr >= roc.points[i - 1].tpr);
  }
}

TEST_CASE("trapezoidal auc equals the pair-counting oracle exactly") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 50)(rng);
    // Coarse score levels force many ties.
    const int levels = std::uniform_int_distribution<int>(1, 12)(rng);
    std::vector<int> labels(n);
    std::vector<double> scores(n);
    for (int i = 0; i < n; ++i) {
      labels[i] = std::uniform_int_distribution<int>(0, 1)(rng);
      scores[i] = std::uniform_int_distribution<int>(0, levels)(rng) / static_cast<double>(levels);
    }
    labels[0] = 0;
    labels[1] = 1;
    REQUIRE(Auc(labels, scores) == oracle::PairCountAuc(labels, scores));
  }
}

TEST_CASE("auc is invariant under increasing transforms and flips under reversal") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<int> labels;
  std::vector<double> scores;
  for (int i = 0; i < 30; ++i) {
    labels.push_back(i % 3 == 0);
    scores.push_back(u(rng));
  }
  const double auc = Auc(labels, scores);
  std::vector<double> cubed, reversed;
  for (double s : scores) {
    cubed.push_back(std::pow(s, 3.0) + 2.0);
    reversed.push_back(-s);
  }
  CHECK(Auc(labels, cubed) == auc);
  CHECK(Auc(labels, reversed) == doctest::Approx(1.0 - auc).epsilon(1e-12));
}

TEST_CASE("metrics json round trip") {
  std::vector<int> labels = {1, 1, 0, 0, 1};
  std::vector<double> scores = {0.9, 0.4, 0.6, 0.1, 0.7};
  const MetricsReport m = Evaluate(labels, scores);
  const MetricsReport back = MetricsFromJson(MetricsToJson(m));
  CHECK(back.auc == m.auc);
  CHECK(back.confusion.tp == m.confusion.tp);
  CHECK(back.f1 == m.f1);
  CHECK(back.roc.size() == m.roc.size());
}
}
