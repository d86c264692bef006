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
#include <numeric>
#include <set>
#include <sstream>
#include <vector>

#include "core/common.h"
#include "core/dataset.h"
#include "doctest.h"

using namespace tabutune;

namespace {

std::vector<FeatureSchema> Numeric(size_t p) {
  std::vector<FeatureSchema> s;
  for (size_t i = 0; i < p; ++i) s.push_back({"x" + std::to_string(i), FeatureKind::kNumeric, {}});
  return s;
}

Dataset Column(std::vector<double> v) {
  std::vector<int> labels(v.size(), 0);
  return Dataset(Numeric(1), std::move(v), std::move(labels));
}

Dataset Labeled(size_t n0, size_t n1) {
  std::vector<int> labels(n0, 0);
  labels.insert(labels.end(), n1, 1);
  std::vector<double> v(labels.size());
  std::iota(v.begin(), v.end(), 0.0);
  return Dataset(Numeric(1), std::move(v), std::move(labels));
}

}  // namespace

TEST_SUITE("dataset") {
TEST_CASE("csv parsing with missing tokens and string labels") {
  std::istringstream in(
      "sex,bp,disposition\n"
      "M,120,admitted\n"
      "F,NA,discharged\n"
      "M,,discharged\n");
  std::vector<FeatureSchema> schema = {{"sex", FeatureKind::kCategorical, {}},
                                       {"bp", FeatureKind::kNumeric, {}}};
  Dataset d = ParseCsv(in, schema, "disposition");
  REQUIRE(d.rows() == 3);
  CHECK(d.at(0, 0) == 0);
  CHECK(d.at(1, 0) == 1);
  CHECK(d.at(2, 0) == 0);
  CHECK(d.schema()[0].categories == std::vector<std::string>{"M", "F"});
  CHECK(d.at(0, 1) == 120);
  CHECK(d.missing(1, 1));
  CHECK(d.missing(2, 1));
  CHECK(d.labels() == std::vector<int>{0, 1, 1});
  CHECK(d.CountMissing() == 2);
}

TEST_CASE("csv errors") {
  std::vector<FeatureSchema> schema = Numeric(1);
  {
    std::istringstream in("x0,disposition\nabc,admitted\n");
    CHECK_THROWS_AS(ParseCsv(in, schema, "disposition"), Error);
  }
  {
    std::istringstream in("x0,disposition\n1,maybe\n");
    try {
      ParseCsv(in, schema, "disposition");
      FAIL("expected a label error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kLabel);
    }
  }
  {
    std::istringstream in("y,disposition\n1,admitted\n");
    try {
      ParseCsv(in, schema, "disposition");
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kParse);
    }
  }
}

TEST_CASE("labels must be binary") {
  CHECK_THROWS_AS(Dataset(Numeric(1), {1.0}, {2}), Error);
  CHECK_THROWS_AS(Dataset(Numeric(2), {1.0}, {0}), Error);
}

TEST_CASE("categorical encoding") {
  std::vector<std::string> sex = {"M", "F", "M"};
  EncodedColumn e = EncodeCategoricalColumn(sex);
  CHECK(e.codes == std::vector<double>{0, 1, 0});

  std::vector<std::string> eth = {"b", "c", "a", "b", "e", "d", "a"};
  e = EncodeCategoricalColumn(eth);
  CHECK(e.categories.size() == 5);
  CHECK(e.codes == std::vector<double>{0, 1, 2, 0, 3, 4, 2});

  std::vector<std::string> ints = {"3", "0", "", "1"};
  e = EncodeCategoricalColumn(ints);
  CHECK(e.codes[0] == 3);
  CHECK(e.codes[1] == 0);
  CHECK(IsMissing(e.codes[2]));
  CHECK(e.codes[3] == 1);
}

TEST_CASE("encode is idempotent") {
  Dataset d = SynthGenerate(200, DefaultMissingProfile(), 0.2, 3);
  Dataset once = EncodeCategoricals(d);
  Dataset twice = EncodeCategoricals(once);
  const auto& a = once.values();
  const auto& b = twice.values();
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK((a[i] == b[i] || (IsMissing(a[i]) && IsMissing(b[i]))));
  }
}

TEST_CASE("min-max normalization") {
  std::vector<size_t> all = {0, 1, 2};
  auto [d, scaler] = NormalizeMinMax(Column({0, 5, 10}), all);
  CHECK(d.at(0, 0) == 0.0);
  CHECK(d.at(1, 0) == 0.5);
  CHECK(d.at(2, 0) == 1.0);

  auto [constant, s2] = NormalizeMinMax(Column({7, 7, 7}), all);
  for (size_t r = 0; r < 3; ++r) CHECK(constant.at(r, 0) == 0.0);

  std::vector<size_t> first_two = {0, 1};
  auto [partial, s3] = NormalizeMinMax(Column({0, 5, 10}), first_two);
  CHECK(partial.at(2, 0) == doctest::Approx(2.0));
}

TEST_CASE("normalization is order preserving and bounded on fit rows") {
  Dataset d = KnnImpute(EncodeCategoricals(SynthGenerate(300, DefaultMissingProfile(), 0.2, 5)), 4);
  std::vector<size_t> rows(d.rows());
  std::iota(rows.begin(), rows.end(), 0);
  auto [n, scaler] = NormalizeMinMax(d, rows, ScaleScope::kAllColumns);
  for (size_t c = 0; c < d.cols(); ++c) {
    for (size_t r = 0; r < d.rows(); ++r) {
      CHECK(n.at(r, c) >= 0.0);
      CHECK(n.at(r, c) <= 1.0);
      if (r > 0 && d.at(r, c) < d.at(r - 1, c)) CHECK(n.at(r, c) <= n.at(r - 1, c));
    }
  }
}

TEST_CASE("knn imputation toy") {
  Dataset d(Numeric(3), {1, 1, kMissing, 1, 1, 8, 9, 9, 2}, {0, 0, 1});
  Dataset out = KnnImpute(d, 1);
  CHECK(out.at(0, 2) == 8.0);
  CHECK(out.CountMissing() == 0);
  for (size_t r = 0; r < 3; ++r) {
    for (size_t c = 0; c < 3; ++c) {
      if (!d.missing(r, c)) CHECK(out.at(r, c) == d.at(r, c));
    }
  }
}

TEST_CASE("knn with four neighbours averages four rows") {
  // Rows 1..4 sit at distance 1 from row 0; row 5 is far away.
  Dataset d(Numeric(2),
            {0, kMissing, 1, 10, -1, 20, 1, 30, -1, 40, 100, 1000},
            {0, 0, 0, 1, 1, 1});
  Dataset out = KnnImpute(d, 4);
  CHECK(out.at(0, 1) == doctest::Approx(25.0));
}

TEST_CASE("knn with k = n - 1 at equal distance is the column mean") {
  Dataset d(Numeric(2), {5, kMissing, 5, 2, 5, 4, 5, 9}, {0, 1, 0, 1});
  Dataset out = KnnImpute(d, 3);
  CHECK(out.at(0, 1) == doctest::Approx(5.0));
}

TEST_CASE("knn leaves complete data unchanged") {
  Dataset d(Numeric(2), {1, 2, 3, 4, 5, 6}, {0, 1, 0});
  CHECK(KnnImpute(d, 2).values() == d.values());
}

TEST_CASE("knn errors") {
  Dataset d(Numeric(2), {1, kMissing, 2, kMissing}, {0, 1});
  try {
    KnnImpute(d, 1);
    FAIL("expected an impute error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kImpute);
    CHECK(std::string(e.what()).find("x1") != std::string::npos);
  }
  CHECK_THROWS_AS(KnnImpute(Column({1, 2}), 0), Error);
}

TEST_CASE("random sample") {
  CHECK(SampleIndices(10, 4, 1) == SampleIndices(10, 4, 1));
  auto idx = SampleIndices(10, 10, 2);
  std::vector<size_t> sorted = idx;
  std::sort(sorted.begin(), sorted.end());
  for (size_t i = 0; i < 10; ++i) CHECK(sorted[i] == i);
  std::set<size_t> unique(idx.begin(), idx.end());
  CHECK(unique.size() == 10);
  for (size_t m : {size_t{0}, size_t{11}}) {
    try {
      SampleIndices(10, m, 1);
      FAIL("expected a size error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kSize);
    }
  }
}

TEST_CASE("stratified split counts") {
  Dataset d = Labeled(20, 80);
  auto split = StratifiedSplitIndices(d.labels(), 0.3, 7);
  size_t test0 = 0, test1 = 0;
  for (size_t i : split.test) (d.labels()[i] == 0 ? test0 : test1)++;
  CHECK(test0 >= 5);
  CHECK(test0 <= 7);
  CHECK(test1 >= 23);
  CHECK(test1 <= 25);

  std::vector<size_t> all = split.train;
  all.insert(all.end(), split.test.begin(), split.test.end());
  std::sort(all.begin(), all.end());
  for (size_t i = 0; i < all.size(); ++i) CHECK(all[i] == i);
  CHECK(all.size() == 100);

  auto again = StratifiedSplitIndices(d.labels(), 0.3, 7);
  CHECK(again.train == split.train);
  CHECK(again.test == split.test);
}

TEST_CASE("tiny test fraction keeps each class in test") {
  Dataset d = Labeled(20, 80);
  auto split = StratifiedSplitIndices(d.labels(), 0.001, 1);
  std::set<int> classes;
  for (size_t i : split.test) classes.insert(d.labels()[i]);
  CHECK(classes.size() == 2);
}

TEST_CASE("stratification errors") {
  Dataset d = Labeled(1, 10);
  try {
    StratifiedSplitIndices(d.labels(), 0.3, 1);
    FAIL("expected a stratification error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kStratification);
  }
  CHECK_THROWS_AS(StratifiedSplitIndices(Labeled(5, 5).labels(), 1.0, 1), Error);
}

TEST_CASE("synthetic missingness follows the profile") {
  const size_t n = 20000;
  Dataset d = SynthGenerate(n, DefaultMissingProfile(), 0.2, 11);
  CHECK(d.cols() == 17);
  const int col = d.FeatureIndex("Respiratory Rate");
  REQUIRE(col >= 0);
  size_t missing = 0;
  for (size_t r = 0; r < n; ++r) missing += d.missing(r, col);
  const double p = 0.272;
  const double sd = std::sqrt(p * (1 - p) / n);
  CHECK(std::abs(static_cast<double>(missing) / n - p) < 4 * sd);
}

TEST_CASE("synthetic class balance and empty profile") {
  const size_t n = 10000;
  Dataset d = SynthGenerate(n, {}, 0.5, 4);
  CHECK(d.CountMissing() == 0);
  const double sd = std::sqrt(n * 0.25);
  CHECK(std::abs(static_cast<double>(d.CountLabel(0)) - n / 2.0) < 3 * sd);
  CHECK_THROWS_AS(SynthGenerate(0, {}, 0.5, 1), Error);
  CHECK_THROWS_AS(SynthGenerate(10, {}, 1.5, 1), Error);
}

TEST_CASE("synthetic data is reproducible") {
  auto a = SynthGenerate(500, DefaultMissingProfile(), 0.2, 9);
  auto b = SynthGenerate(500, DefaultMissingProfile(), 0.2, 9);
  CHECK(a.labels() == b.labels());
  CHECK(a.CountMissing() == b.CountMissing());
}
}
