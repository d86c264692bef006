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
#include "core/dataset.h"
#include "core/resampling.h"
#include "doctest.h"

using namespace tabutune;

namespace {

std::vector<FeatureSchema> Schema() {
  return {{"a", FeatureKind::kNumeric, {}},
          {"b", FeatureKind::kNumeric, {}},
          {"c", FeatureKind::kCategorical, {"0", "1", "2"}}};
}

Dataset Random(size_t n0, size_t n1, uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v;
  std::vector<int> labels;
  for (size_t i = 0; i < n0 + n1; ++i) {
    const int y = i < n0 ? 0 : 1;
    v.push_back(g(rng) + y);
    v.push_back(g(rng) - y);
    v.push_back(static_cast<double>(i % 3));
    labels.push_back(y);
  }
  return Dataset(Schema(), std::move(v), std::move(labels));
}

}  // namespace

TEST_SUITE("resampling") {
TEST_CASE("balanced input is returned unchanged") {
  Dataset d = Random(30, 30, 1);
  Dataset out = Smote(d, {});
  CHECK(out.rows() == d.rows());
  CHECK(out.values() == d.values());
}

TEST_CASE("80/20 at ratio 1 appends 60 minority rows") {
  Dataset d = Random(20, 80, 2);
  SmoteConfig cfg;
  cfg.seed = 5;
  Dataset out = Smote(d, cfg);
  CHECK(out.rows() == 160);
  CHECK(out.CountLabel(0) == 80);
  for (size_t r = 0; r < d.rows(); ++r) {
    for (size_t c = 0; c < d.cols(); ++c) CHECK(out.at(r, c) == d.at(r, c));
  }
  for (size_t r = d.rows(); r < out.rows(); ++r) CHECK(out.labels()[r] == 0);
}

TEST_CASE("partial target ratio") {
  Dataset d = Random(20, 80, 3);
  SmoteConfig cfg;
  cfg.target_ratio = 0.5;
  Dataset out = Smote(d, cfg);
  const double ratio = static_cast<double>(out.CountLabel(0)) / out.CountLabel(1);
  CHECK(std::abs(ratio - 0.5) <= 1.0 / 80);
}

TEST_CASE("synthetic points lie on the segment between two minority points") {
  std::vector<FeatureSchema> s = {{"a", FeatureKind::kNumeric, {}},
                                  {"b", FeatureKind::kNumeric, {}}};
  std::vector<double> v = {0, 0, 1, 1};
  std::vector<int> labels = {1, 1};
  for (int i = 0; i < 10; ++i) {
    v.push_back(5.0 + i);
    v.push_back(-3.0);
    labels.push_back(0);
  }
  SmoteConfig cfg;
  cfg.k_neighbors = 1;
  cfg.seed = 17;
  Dataset out = Smote(Dataset(s, v, labels), cfg);
  REQUIRE(out.rows() == 20);
  for (size_t r = 12; r < out.rows(); ++r) {
    const double a = out.at(r, 0);
    const double b = out.at(r, 1);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
    CHECK(a >= 0.0);
    CHECK(a <= 1.0);
  }
}

TEST_CASE("categorical coordinates are copied") {
  Dataset d = Random(15, 60, 4);
  Dataset out = Smote(d, {});
  for (size_t r = d.rows(); r < out.rows(); ++r) {
    const double c = out.at(r, 2);
    CHECK(c == std::round(c));
    CHECK(c >= 0);
    CHECK(c <= 2);
  }
}

TEST_CASE("synthetic rows stay within the minority bounding box") {
  Dataset d = Random(25, 75, 6);
  Dataset out = Smote(d, {});
  for (size_t c = 0; c < 2; ++c) {
    double lo = 1e300, hi = -1e300;
    for (size_t r = 0; r < d.rows(); ++r) {
      if (d.labels()[r] != 0) continue;
      lo = std::min(lo, d.at(r, c));
      hi = std::max(hi, d.at(r, c));
    }
    for (size_t r = d.rows(); r < out.rows(); ++r) {
      CHECK(out.at(r, c) >= lo);
      CHECK(out.at(r, c) <= hi);
    }
  }
}

TEST_CASE("deterministic under a fixed seed") {
  Dataset d = Random(20, 70, 8);
  SmoteConfig cfg;
  cfg.seed = 99;
  CHECK(Smote(d, cfg).values() == Smote(d, cfg).values());
}

TEST_CASE("minority too small") {
  Dataset d = Random(3, 50, 9);
  try {
    Smote(d, {});
    FAIL("expected a resample error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kResample);
  }
}
}
