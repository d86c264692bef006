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

#include "core/dataset.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "core/common.h"

namespace tabutune {
namespace {

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cell));
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  out.push_back(std::move(cell));
  return out;
}

std::string QuoteCsv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool ParseReal(std::string_view s, double* out) {
  s = Trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(*out);
}

bool ParseCode(std::string_view s, long* out) {
  s = Trim(s);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size() && *out >= 0;
}

// Shortest text that parses back to the same double.
std::string FormatReal(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

SchemaDecl ParseSchemaJson(const nlohmann::json& j) {
  SchemaDecl decl;
  try {
    decl.label_column = j.value("label_column", std::string("disposition"));
    for (const auto& f : j.at("features")) {
      FeatureSchema fs;
      fs.name = f.at("name").get<std::string>();
      const std::string kind = f.at("kind").get<std::string>();
      if (kind == "numeric") {
        fs.kind = FeatureKind::kNumeric;
      } else if (kind == "categorical") {
        fs.kind = FeatureKind::kCategorical;
        if (f.contains("categories")) {
          fs.categories = f["categories"].get<std::vector<std::string>>();
        }
      } else {
        throw Error(ErrorCode::kSchema, "unknown feature kind '" + kind +
                                            "' for " + fs.name);
      }
      decl.features.push_back(std::move(fs));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchema, std::string("bad schema: ") + e.what());
  }
  for (size_t i = 0; i < decl.features.size(); ++i) {
    for (size_t k = 0; k < i; ++k) {
      if (decl.features[i].name == decl.features[k].name) {
        throw Error(ErrorCode::kSchema,
                    "duplicate feature name " + decl.features[i].name);
      }
    }
  }
  return decl;
}

SchemaDecl LoadSchemaFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open schema " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, path + ": " + e.what());
  }
  return ParseSchemaJson(j);
}

nlohmann::json SchemaToJson(const SchemaDecl& decl) {
  nlohmann::json features = nlohmann::json::array();
  for (const auto& f : decl.features) {
    nlohmann::json jf = {
        {"name", f.name},
        {"kind", f.kind == FeatureKind::kNumeric ? "numeric" : "categorical"}};
    if (f.kind == FeatureKind::kCategorical && !f.categories.empty()) {
      jf["categories"] = f.categories;
    }
    features.push_back(std::move(jf));
  }
  return {{"label_column", decl.label_column}, {"features", features}};
}

Dataset::Dataset(std::vector<FeatureSchema> schema, std::vector<double> values,
                 std::vector<int> labels)
    : schema_(std::move(schema)),
      values_(std::move(values)),
      labels_(std::move(labels)) {
  if (values_.size() != labels_.size() * schema_.size()) {
    throw Error(ErrorCode::kShape, "dataset values do not match rows x cols");
  }
  for (int y : labels_) {
    if (y != 0 && y != 1) throw Error(ErrorCode::kLabel, "labels must be 0/1");
  }
}

std::vector<std::string> Dataset::FeatureNames() const {
  std::vector<std::string> names;
  names.reserve(schema_.size());
  for (const auto& f : schema_) names.push_back(f.name);
  return names;
}

int Dataset::FeatureIndex(const std::string& name) const {
  for (size_t i = 0; i < schema_.size(); ++i) {
    if (schema_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

size_t Dataset::CountMissing() const {
  return std::count_if(values_.begin(), values_.end(),
                       [](double v) { return IsMissing(v); });
}

size_t Dataset::CountLabel(int label) const {
  return std::count(labels_.begin(), labels_.end(), label);
}

Dataset Dataset::SelectRows(std::span<const size_t> rows) const {
  std::vector<double> values;
  values.reserve(rows.size() * cols());
  std::vector<int> labels;
  labels.reserve(rows.size());
  for (size_t r : rows) {
    if (r >= this->rows()) throw Error(ErrorCode::kSize, "row out of range");
    auto src = row(r);
    values.insert(values.end(), src.begin(), src.end());
    labels.push_back(labels_[r]);
  }
  return Dataset(schema_, std::move(values), std::move(labels));
}

Dataset Dataset::SelectColumns(std::span<const size_t> columns) const {
  std::vector<FeatureSchema> schema;
  for (size_t c : columns) {
    if (c >= cols()) throw Error(ErrorCode::kSize, "column out of range");
    schema.push_back(schema_[c]);
  }
  std::vector<double> values;
  values.reserve(rows() * columns.size());
  for (size_t r = 0; r < rows(); ++r) {
    for (size_t c : columns) values.push_back(at(r, c));
  }
  return Dataset(std::move(schema), std::move(values), labels_);
}

Dataset Dataset::Concat(const Dataset& other) const {
  if (other.cols() != cols()) {
    throw Error(ErrorCode::kShape, "concat of datasets with different arity");
  }
  std::vector<double> values = values_;
  values.insert(values.end(), other.values_.begin(), other.values_.end());
  std::vector<int> labels = labels_;
  labels.insert(labels.end(), other.labels_.begin(), other.labels_.end());
  return Dataset(schema_, std::move(values), std::move(labels));
}

bool IsMissingToken(std::string_view cell) {
  cell = Trim(cell);
  return cell.empty() || cell == "NA";
}

int ParseLabel(std::string_view cell) {
  cell = Trim(cell);
  if (cell == "admitted" || cell == "0") return 0;
  if (cell == "discharged" || cell == "1") return 1;
  throw Error(ErrorCode::kLabel, "unknown label value '" + std::string(cell) + "'");
}

EncodedColumn EncodeCategoricalColumn(std::span<const std::string> cells) {
  EncodedColumn out;
  out.codes.resize(cells.size(), kMissing);
  bool all_codes = true;
  long max_code = -1;
  for (const auto& cell : cells) {
    if (IsMissingToken(cell)) continue;
    long code;
    if (!ParseCode(cell, &code)) {
      all_codes = false;
      break;
    }
    max_code = std::max(max_code, code);
  }
  if (all_codes) {
    for (long c = 0; c <= max_code; ++c) out.categories.push_back(std::to_string(c));
    for (size_t i = 0; i < cells.size(); ++i) {
      long code;
      if (!IsMissingToken(cells[i]) && ParseCode(cells[i], &code)) {
        out.codes[i] = static_cast<double>(code);
      }
    }
    return out;
  }
  std::unordered_map<std::string, size_t> index;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (IsMissingToken(cells[i])) continue;
    std::string key(Trim(cells[i]));
    auto [it, inserted] = index.emplace(key, out.categories.size());
    if (inserted) out.categories.push_back(key);
    out.codes[i] = static_cast<double>(it->second);
  }
  return out;
}

Dataset ParseCsv(std::istream& in, const std::vector<FeatureSchema>& schema,
                 const std::string& label_column) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kParse, "empty CSV");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = SplitCsvLine(line);
  auto find_column = [&](const std::string& name) -> size_t {
    for (size_t i = 0; i < header.size(); ++i) {
      if (Trim(header[i]) == name) return i;
    }
    throw Error(ErrorCode::kParse, "CSV header is missing column '" + name + "'");
  };
  std::vector<size_t> source(schema.size());
  for (size_t c = 0; c < schema.size(); ++c) source[c] = find_column(schema[c].name);
  const size_t label_source = find_column(label_column);

  std::vector<std::vector<std::string>> raw;
  std::vector<int> labels;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    auto cells = SplitCsvLine(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": expected " +
                                         std::to_string(header.size()) + " cells, got " +
                                         std::to_string(cells.size()));
    }
    try {
      labels.push_back(ParseLabel(cells[label_source]));
    } catch (const Error& e) {
      throw Error(ErrorCode::kLabel, "line " + std::to_string(line_no) + ": " + e.what());
    }
    raw.push_back(std::move(cells));
  }

  const size_t n = raw.size();
  const size_t p = schema.size();
  std::vector<FeatureSchema> out_schema = schema;
  std::vector<double> values(n * p, kMissing);
  for (size_t c = 0; c < p; ++c) {
    const size_t src = source[c];
    if (schema[c].kind == FeatureKind::kNumeric) {
      for (size_t r = 0; r < n; ++r) {
        const std::string& cell = raw[r][src];
        if (IsMissingToken(cell)) continue;
        double v;
        if (!ParseReal(cell, &v)) {
          throw Error(ErrorCode::kParse, "row " + std::to_string(r + 1) + ", column '" +
                                             schema[c].name + "': cannot parse '" + cell +
                                             "' as a number");
        }
        values[r * p + c] = v;
      }
    } else {
      std::vector<std::string> cells(n);
      for (size_t r = 0; r < n; ++r) cells[r] = raw[r][src];
      EncodedColumn enc = EncodeCategoricalColumn(cells);
      for (size_t r = 0; r < n; ++r) values[r * p + c] = enc.codes[r];
      out_schema[c].categories = std::move(enc.categories);
    }
  }
  return Dataset(std::move(out_schema), std::move(values), std::move(labels));
}

Dataset LoadCsv(const std::string& path, const std::vector<FeatureSchema>& schema,
                const std::string& label_column) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return ParseCsv(in, schema, label_column);
}

void WriteCsv(const Dataset& d, const std::string& path,
              const std::string& label_column) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  for (const auto& f : d.schema()) out << QuoteCsv(f.name) << ',';
  out << QuoteCsv(label_column) << '\n';
  for (size_t r = 0; r < d.rows(); ++r) {
    for (size_t c = 0; c < d.cols(); ++c) {
      const double v = d.at(r, c);
      const auto& f = d.schema()[c];
      if (IsMissing(v)) {
        out << "NA";
      } else if (f.kind == FeatureKind::kCategorical) {
        const auto code = static_cast<size_t>(std::llround(v));
        out << QuoteCsv(code < f.categories.size() ? f.categories[code]
                                                   : std::to_string(code));
      } else {
        out << FormatReal(v);
      }
      out << ',';
    }
    out << (d.labels()[r] == 0 ? "admitted" : "discharged") << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

Dataset EncodeCategoricals(const Dataset& d) {
  std::vector<FeatureSchema> schema = d.schema();
  std::vector<double> values = d.values();
  const size_t p = d.cols();
  for (size_t c = 0; c < p; ++c) {
    if (schema[c].kind != FeatureKind::kCategorical) continue;
    size_t needed = schema[c].categories.size();
    for (size_t r = 0; r < d.rows(); ++r) {
      double& v = values[r * p + c];
      if (IsMissing(v)) continue;
      v = std::max(0.0, std::round(v));
      needed = std::max(needed, static_cast<size_t>(v) + 1);
    }
    while (schema[c].categories.size() < needed) {
      schema[c].categories.push_back(std::to_string(schema[c].categories.size()));
    }
  }
  return Dataset(std::move(schema), std::move(values), d.labels());
}

Dataset MinMaxScaler::Apply(const Dataset& d) const {
  std::vector<double> values = d.values();
  const size_t p = d.cols();
  for (size_t k = 0; k < columns.size(); ++k) {
    const size_t c = columns[k];
    const double range = max[k] - min[k];
    for (size_t r = 0; r < d.rows(); ++r) {
      double& v = values[r * p + c];
      if (IsMissing(v)) continue;
      v = range > 0 ? (v - min[k]) / range : 0.0;
    }
  }
  return Dataset(d.schema(), std::move(values), d.labels());
}

MinMaxScaler FitMinMax(const Dataset& d, std::span<const size_t> fit_rows,
                       ScaleScope scope) {
  if (fit_rows.empty()) throw Error(ErrorCode::kSize, "normalization needs fit rows");
  MinMaxScaler s;
  for (size_t c = 0; c < d.cols(); ++c) {
    if (scope == ScaleScope::kNumericOnly &&
        d.schema()[c].kind != FeatureKind::kNumeric) {
      continue;
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (size_t r : fit_rows) {
      const double v = d.at(r, c);
      if (IsMissing(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (!std::isfinite(lo)) lo = hi = 0.0;
    s.columns.push_back(c);
    s.min.push_back(lo);
    s.max.push_back(hi);
  }
  return s;
}

std::pair<Dataset, MinMaxScaler> NormalizeMinMax(const Dataset& d,
                                                 std::span<const size_t> fit_rows,
                                                 ScaleScope scope) {
  MinMaxScaler s = FitMinMax(d, fit_rows, scope);
  Dataset out = s.Apply(d);
  return {std::move(out), std::move(s)};
}

Dataset KnnImpute(const Dataset& d, size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "impute k must be positive");
  const size_t n = d.rows();
  const size_t p = d.cols();
  std::vector<size_t> missing_rows;
  for (size_t r = 0; r < n; ++r) {
    auto row = d.row(r);
    if (std::any_of(row.begin(), row.end(), [](double v) { return IsMissing(v); })) {
      missing_rows.push_back(r);
    }
  }
  if (missing_rows.empty()) return d;

  std::vector<size_t> present_count(p, 0);
  for (size_t r = 0; r < n; ++r) {
    for (size_t c = 0; c < p; ++c) present_count[c] += !d.missing(r, c);
  }
  for (size_t c = 0; c < p; ++c) {
    if (present_count[c] == 0) {
      throw Error(ErrorCode::kImpute,
                  "column '" + d.schema()[c].name + "' is entirely missing");
    }
  }

  std::vector<size_t> metric_cols;
  for (size_t c = 0; c < p; ++c) {
    if (d.schema()[c].kind == FeatureKind::kNumeric) metric_cols.push_back(c);
  }
  if (metric_cols.empty()) {
    metric_cols.resize(p);
    std::iota(metric_cols.begin(), metric_cols.end(), 0);
  }
  // Column-major copy of the metric columns for the distance loop.
  const size_t q = metric_cols.size();
  std::vector<double> cm(q * n);
  for (size_t j = 0; j < q; ++j) {
    for (size_t r = 0; r < n; ++r) cm[j * n + r] = d.at(r, metric_cols[j]);
  }

  std::vector<double> values = d.values();
  std::vector<double> sum(n), dist(n);
  std::vector<uint32_t> used(n);
  std::vector<std::pair<double, size_t>> donors;
  donors.reserve(n);
  const double inf = std::numeric_limits<double>::infinity();
  for (size_t r : missing_rows) {
    std::fill(sum.begin(), sum.end(), 0.0);
    std::fill(used.begin(), used.end(), 0u);
    for (size_t j = 0; j < q; ++j) {
      const double* col = &cm[j * n];
      const double x = col[r];
      if (IsMissing(x)) continue;
      for (size_t s = 0; s < n; ++s) {
        const double diff = col[s] - x;
        if (!std::isnan(diff)) {
          sum[s] += diff * diff;
          ++used[s];
        }
      }
    }
    for (size_t s = 0; s < n; ++s) {
      dist[s] = used[s] == 0 ? inf
                             : std::sqrt(sum[s] * static_cast<double>(q) / used[s]);
    }
    for (size_t c = 0; c < p; ++c) {
      if (!d.missing(r, c)) continue;
      donors.clear();
      for (size_t s = 0; s < n; ++s) {
        if (s != r && !d.missing(s, c)) donors.emplace_back(dist[s], s);
      }
      const size_t take = std::min(k, donors.size());
      std::partial_sort(donors.begin(), donors.begin() + take, donors.end());
      double acc = 0.0;
      for (size_t i = 0; i < take; ++i) acc += d.at(donors[i].second, c);
      double fill = acc / static_cast<double>(take);
      if (d.schema()[c].kind == FeatureKind::kCategorical) fill = std::round(fill);
      values[r * p + c] = fill;
    }
  }
  return Dataset(d.schema(), std::move(values), d.labels());
}

std::vector<size_t> SampleIndices(size_t n, size_t m, uint64_t seed) {
  if (m == 0 || m > n) {
    throw Error(ErrorCode::kSize, "sample size " + std::to_string(m) +
                                      " outside [1, " + std::to_string(n) + "]");
  }
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  for (size_t i = 0; i < m; ++i) {
    std::uniform_int_distribution<size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(m);
  std::sort(idx.begin(), idx.end());
  return idx;
}

Dataset RandomSample(const Dataset& d, size_t m, uint64_t seed) {
  const auto idx = SampleIndices(d.rows(), m, seed);
  return d.SelectRows(idx);
}

Split StratifiedSplitIndices(std::span<const int> labels, double test_fraction,
                             uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "test fraction must lie in (0,1)");
  }
  Split split;
  for (int cls = 0; cls <= 1; ++cls) {
    std::vector<size_t> members;
    for (size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) members.push_back(i);
    }
    if (members.size() < 2) {
      throw Error(ErrorCode::kStratification,
                  "class " + std::to_string(cls) + " has fewer than 2 rows");
    }
    Rng rng(DeriveSeed(seed, static_cast<uint64_t>(cls)));
    std::shuffle(members.begin(), members.end(), rng);
    auto n_test = static_cast<size_t>(
        std::llround(test_fraction * static_cast<double>(members.size())));
    n_test = std::clamp<size_t>(n_test, 1, members.size() - 1);
    split.test.insert(split.test.end(), members.begin(), members.begin() + n_test);
    split.train.insert(split.train.end(), members.begin() + n_test, members.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::pair<Dataset, Dataset> StratifiedSplit(const Dataset& d, double test_fraction,
                                            uint64_t seed) {
  const Split s = StratifiedSplitIndices(d.labels(), test_fraction, seed);
  return {d.SelectRows(s.train), d.SelectRows(s.test)};
}

std::vector<FeatureSchema> EdSchema() {
  auto cat = [](std::string name, std::vector<std::string> cats) {
    return FeatureSchema{std::move(name), FeatureKind::kCategorical, std::move(cats)};
  };
  // Integer-coded columns; the category name is the code itself.
  auto codes = [](int last) {
    std::vector<std::string> out;
    for (int i = 0; i <= last; ++i) out.push_back(std::to_string(i));
    return out;
  };
  auto num = [](std::string name) {
    return FeatureSchema{std::move(name), FeatureKind::kNumeric, {}};
  };
  return {
      cat("Patient Sex", {"M", "F"}),
      cat("Ed Department Location ID", codes(5)),
      cat("ED Arrival Time hour", codes(23)),
      cat("Zip code", codes(49)),
      cat("Patient Ethnicity",
          {"White", "Black", "Hispanic", "Asian", "Other"}),
      cat("Patient Smoking Status", {"Never", "Former", "Current", "Unknown"}),
      cat("month of year", codes(12)),
      cat("day of week", codes(6)),
      cat("Chief Complaint", codes(39)),
      num("BMI"),
      num("Age Years"),
      num("Diastolic Blood Pressure"),
      num("Temperature in Fahrenheit"),
      num("Respiratory Rate"),
      num("Pulse Rate"),
      num("Systolic Blood Pressure"),
      num("O2 Saturation"),
  };
}

MissingProfile DefaultMissingProfile() {
  return {
      {"Respiratory Rate", 0.272},
      {"O2 Saturation", 0.269},
      {"BMI", 0.257},
      {"Systolic Blood Pressure", 0.257},
      {"Diastolic Blood Pressure", 0.257},
      {"Pulse Rate", 0.257},
      {"Temperature in Fahrenheit", 0.257},
      {"Zip code", 1065.0 / 453664.0},
  };
}

Dataset SynthGenerate(size_t n, const MissingProfile& profile, double admit_fraction,
                      uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::kSize, "synthetic row count must be positive");
  if (!(admit_fraction > 0.0 && admit_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "admit fraction must lie in (0,1)");
  }
  std::vector<FeatureSchema> schema = EdSchema();
  const size_t p = schema.size();
  for (const auto& [name, frac] : profile) {
    if (!(frac >= 0.0 && frac <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "missing fraction for " + name +
                                                   " outside [0,1]");
    }
  }
  std::vector<double> miss(p, 0.0);
  for (size_t c = 0; c < p; ++c) {
    auto it = profile.find(schema[c].name);
    if (it != profile.end()) miss[c] = it->second;
  }

  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto normal = [&](double mean, double sd, double lo, double hi) {
    std::normal_distribution<double> dist(mean, sd);
    return std::clamp(dist(rng), lo, hi);
  };
  auto uniform_code = [&](int lo, int hi) {
    std::uniform_int_distribution<int> dist(lo, hi);
    return static_cast<double>(dist(rng));
  };

  std::vector<double> values(n * p);
  std::vector<int> labels(n);
  for (size_t r = 0; r < n; ++r) {
    const bool admitted = unit(rng) < admit_fraction;
    labels[r] = admitted ? 0 : 1;
    double* row = &values[r * p];
    row[0] = uniform_code(0, 1);
    row[1] = admitted && unit(rng) < 0.3 ? uniform_code(0, 1) : uniform_code(0, 5);
    row[2] = uniform_code(0, 23);
    row[3] = uniform_code(0, 49);
    row[4] = uniform_code(0, 4);
    row[5] = uniform_code(0, 3);
    row[6] = uniform_code(1, 12);
    row[7] = uniform_code(0, 6);
    // Low complaint codes stand for the high-acuity complaints.
    if (admitted) {
      row[8] = unit(rng) < 0.65 ? uniform_code(0, 9) : uniform_code(0, 39);
    } else {
      row[8] = unit(rng) < 0.85 ? uniform_code(10, 39) : uniform_code(0, 9);
    }
    row[9] = admitted ? normal(29.5, 7, 14, 60) : normal(27.5, 6, 14, 60);
    row[10] = admitted ? normal(66, 15, 0, 100) : normal(40, 18, 0, 100);
    row[11] = admitted ? normal(72, 14, 40, 130) : normal(79, 11, 40, 130);
    row[12] = admitted ? normal(99.1, 1.2, 94, 105) : normal(98.4, 0.7, 94, 105);
    row[13] = admitted ? normal(21, 4, 8, 40) : normal(17, 2.2, 8, 40);
    row[14] = admitted ? normal(96, 18, 40, 180) : normal(82, 14, 40, 180);
    row[15] = admitted ? normal(126, 24, 70, 220) : normal(131, 18, 70, 220);
    row[16] = admitted ? normal(93.5, 3, 70, 100) : normal(97.5, 1.5, 70, 100);
    for (size_t c = 9; c < p; ++c) row[c] = std::round(row[c] * 10.0) / 10.0;
    for (size_t c = 0; c < p; ++c) {
      if (miss[c] > 0.0 && unit(rng) < miss[c]) row[c] = kMissing;
    }
  }
  return Dataset(std::move(schema), std::move(values), std::move(labels));
}

}  // namespace tabutune
