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

#ifndef TABUTUNE_CORE_DATASET_H_
#define TABUTUNE_CORE_DATASET_H_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace tabutune {

enum class FeatureKind { kNumeric, kCategorical };

struct FeatureSchema {
  std::string name;
  FeatureKind kind = FeatureKind::kNumeric;
  // Category names indexed by code. Empty for numeric features.
  std::vector<std::string> categories;
};

// Schema declaration file contents: the features plus the label column name.
struct SchemaDecl {
  std::vector<FeatureSchema> features;
  std::string label_column = "disposition";
};

SchemaDecl ParseSchemaJson(const nlohmann::json& j);
SchemaDecl LoadSchemaFile(const std::string& path);
nlohmann::json SchemaToJson(const SchemaDecl& decl);

// Per-feature missing fraction, keyed by feature name.
using MissingProfile = std::map<std::string, double>;

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool IsMissing(double v) { return std::isnan(v); }

// Immutable tabular classification data. Cells are stored row-major; missing
// cells hold NaN. Categorical cells hold integer codes into the schema's
// category list. Label 0 = admitted (negative), 1 = discharged (positive).
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<FeatureSchema> schema, std::vector<double> values,
          std::vector<int> labels);

  size_t rows() const { return labels_.size(); }
  size_t cols() const { return schema_.size(); }

  double at(size_t r, size_t c) const { return values_[r * cols() + c]; }
  bool missing(size_t r, size_t c) const { return IsMissing(at(r, c)); }
  std::span<const double> row(size_t r) const {
    return {values_.data() + r * cols(), cols()};
  }

  const std::vector<FeatureSchema>& schema() const { return schema_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<int>& labels() const { return labels_; }

  std::vector<std::string> FeatureNames() const;
  // -1 when absent.
  int FeatureIndex(const std::string& name) const;
  size_t CountMissing() const;
  size_t CountLabel(int label) const;

  Dataset SelectRows(std::span<const size_t> rows) const;
  Dataset SelectColumns(std::span<const size_t> columns) const;
  // Rows of `this` followed by rows of `other`; schemas must agree.
  Dataset Concat(const Dataset& other) const;

 private:
  std::vector<FeatureSchema> schema_;
  std::vector<double> values_;
  std::vector<int> labels_;
};

// Integer encoding of one categorical column. Present cells that are all
// non-negative integer literals are taken as already encoded; otherwise codes
// follow first appearance. Empty optional cells must be passed as "".
struct EncodedColumn {
  std::vector<double> codes;
  std::vector<std::string> categories;
};
EncodedColumn EncodeCategoricalColumn(std::span<const std::string> cells);

bool IsMissingToken(std::string_view cell);
// "admitted"/"0" -> 0, "discharged"/"1" -> 1; throws kLabel otherwise.
int ParseLabel(std::string_view cell);

Dataset ParseCsv(std::istream& in, const std::vector<FeatureSchema>& schema,
                 const std::string& label_column);
Dataset LoadCsv(const std::string& path,
                const std::vector<FeatureSchema>& schema,
                const std::string& label_column);
void WriteCsv(const Dataset& d, const std::string& path,
              const std::string& label_column = "disposition");

// Guarantees categorical columns hold integral codes within their category
// list. Idempotent; leaves encoded data unchanged.
Dataset EncodeCategoricals(const Dataset& d);

enum class ScaleScope { kNumericOnly, kAllColumns };

struct MinMaxScaler {
  std::vector<size_t> columns;
  std::vector<double> min;
  std::vector<double> max;

  Dataset Apply(const Dataset& d) const;
};

MinMaxScaler FitMinMax(const Dataset& d, std::span<const size_t> fit_rows,
                       ScaleScope scope = ScaleScope::kNumericOnly);

// Fits on `fit_rows` and applies to every row. Constant columns map to 0.
std::pair<Dataset, MinMaxScaler> NormalizeMinMax(
    const Dataset& d, std::span<const size_t> fit_rows,
    ScaleScope scope = ScaleScope::kNumericOnly);

// Fills missing cells with the mean of the k nearest rows that have the cell
// present. Distance is Euclidean over mutually present numeric columns,
// scaled by sqrt(total / present). Categorical fills are rounded to a code.
Dataset KnnImpute(const Dataset& d, size_t k);

// Uniform sample without replacement; rows keep their original order.
Dataset RandomSample(const Dataset& d, size_t m, uint64_t seed);
std::vector<size_t> SampleIndices(size_t n, size_t m, uint64_t seed);

struct Split {
  std::vector<size_t> train;
  std::vector<size_t> test;
};

// Per-class proportional split. Each class keeps at least one row on either
// side.
Split StratifiedSplitIndices(std::span<const int> labels, double test_fraction,
                             uint64_t seed);
std::pair<Dataset, Dataset> StratifiedSplit(const Dataset& d,
                                            double test_fraction,
                                            uint64_t seed);

// The seventeen emergency-department features, in column order.
std::vector<FeatureSchema> EdSchema();
// Missing fractions observed for the vitals and zip code.
MissingProfile DefaultMissingProfile();

Dataset SynthGenerate(size_t n, const MissingProfile& profile,
                      double admit_fraction, uint64_t seed);

}  // namespace tabutune

#endif  // TABUTUNE_CORE_DATASET_H_
