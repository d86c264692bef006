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


#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "core/common.h"
#include "core/experiment.h"
#include "doctest.h"
#include "json.hpp"

using namespace tabutune;
namespace fs = std::filesystem;

namespace {

ExperimentConfig Tiny(const std::string& name) {
  ExperimentConfig cfg;
  cfg.profile = "tiny";
  cfg.synth_rows = 400;
  cfg.sample_size = 300;
  cfg.ts.max_iterations = 2;
  cfg.ts.neighborhood_size = 3;
  cfg.selection.rf_trees = 10;
  cfg.learner.mlp_epochs = 10;
  cfg.output_dir = (fs::temp_directory_path() / ("tabutune_" + name)).string();
  fs::remove_all(cfg.output_dir);
  return cfg;
}

std::vector<std::string> Lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("experiment") {
TEST_CASE("variant names") {
  auto all = AllVariants();
  REQUIRE(all.size() == 6);
  std::vector<std::string> names;
  for (const auto& v : all) names.push_back(VariantName(v));
  CHECK(names == std::vector<std::string>{"t_gbt", "t_adab", "t_mlp", "gbt", "adab", "mlp"});
  for (const auto& n : names) CHECK(VariantName(ParseVariant(n)) == n);
  CHECK_THROWS_AS(ParseVariant("svm"), Error);
}

TEST_CASE("config json round trip and unknown keys") {
  ExperimentConfig cfg = SmokeConfig();
  cfg.seed = 7;
  cfg.groups = {"all", "voting"};
  ExperimentConfig back = ConfigFromJson(ConfigToJson(cfg));
  CHECK(ConfigToJson(back) == ConfigToJson(cfg));
  nlohmann::json bad = {{"no_such_key", 1}};
  try {
    ConfigFromJson(bad);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParse);
  }
}

TEST_CASE("seed override from the environment") {
  ExperimentConfig cfg;
  setenv("TABUTUNE_SEED", "1234", 1);
  ApplySeedOverride(cfg);
  unsetenv("TABUTUNE_SEED");
  CHECK(cfg.seed == 1234);
}

TEST_CASE("prepared data is complete and split") {
  ExperimentConfig cfg = Tiny("prepare");
  PreparedData d = Prepare(cfg);
  CHECK(d.sample.rows() == 300);
  CHECK(d.sample.CountMissing() == 0);
  CHECK(d.train.rows() + d.test.rows() == 300);
  CHECK(d.feature_names.size() == 17);
  cfg.impute_after_sample = true;
  CHECK(Prepare(cfg).sample.CountMissing() == 0);
}

TEST_CASE("full matrix on a tiny configuration") {
  ExperimentConfig cfg = Tiny("matrix");
  MatrixResult m = RunMatrix(cfg);
  REQUIRE(m.records.size() == 54);
  std::set<std::string> groups, algos;
  std::set<std::pair<std::string, std::string>> cells;
  for (const auto& r : m.records) {
    groups.insert(r.group);
    algos.insert(r.algo);
    cells.insert({r.group, r.algo});
    CHECK_MESSAGE(!r.failed, r.group << "/" << r.algo << ": " << r.error);
  }
  CHECK(groups.size() == 9);
  CHECK(algos.size() == 6);
  CHECK(cells.size() == 54);
  for (const auto& s : m.selection) {
    if (s.method == SelectionMethod::kAll) CHECK(s.selected.size() == 17);
  }

  const fs::path dir = cfg.output_dir;
  auto metrics = Lines(dir / "metrics.csv");
  REQUIRE(metrics.size() == 55);
  CHECK(metrics[0] == "group,algo,auc,sensitivity,specificity,f1,accuracy");
  for (size_t i = 1; i < metrics.size(); ++i) {
    CHECK(std::count(metrics[i].begin(), metrics[i].end(), ',') == 6);
  }
  for (const char* algo : {"t_gbt", "t_adab", "t_mlp", "gbt", "adab", "mlp"}) {
    auto params = Lines(dir / (std::string("params_") + algo + ".csv"));
    REQUIRE(!params.empty());
    CHECK(std::count(params[0].begin(), params[0].end(), ',') == 9);
  }
  for (const char* f : {"records.json", "selection.json", "selection.csv", "convergence.csv",
                        "feature_importance.csv", "summary.json", "config.json"}) {
    CHECK_MESSAGE(fs::exists(dir / f), f);
  }

  // The trace's best evaluation is the stored best.
  for (const auto& r : m.records) {
    const fs::path trace = dir / r.trace_path;
    REQUIRE(fs::exists(trace));
    double best = -1.0;
    nlohmann::json best_params;
    for (const auto& line : Lines(trace)) {
      auto j = nlohmann::json::parse(line);
      if (j["objective"].get<double>() > best) {
        best = j["objective"].get<double>();
        best_params = j["params"];
      }
    }
    CHECK(best == doctest::Approx(r.tuning_auc));
    CHECK(best_params == r.best_params);
  }

  const int b = BestRecord(m.records);
  REQUIRE(b >= 0);
  for (const auto& r : m.records) CHECK(r.metrics.auc <= m.records[b].metrics.auc);

  MatrixResult loaded = LoadMatrixResult(cfg.output_dir);
  REQUIRE(loaded.records.size() == 54);
  CHECK(RecordToJson(loaded.records[5]) == RecordToJson(m.records[5]));
}

TEST_CASE("same seed gives identical reports") {
  ExperimentConfig a = Tiny("repeat_a");
  ExperimentConfig b = Tiny("repeat_b");
  a.groups = b.groups = {"dt_sfm", "all"};
  a.variants = b.variants = {"t_gbt", "adab", "t_mlp"};
  RunMatrix(a);
  RunMatrix(b);
  CHECK(Slurp(fs::path(a.output_dir) / "metrics.csv") == Slurp(fs::path(b.output_dir) / "metrics.csv"));
  for (const auto& e : fs::directory_iterator(fs::path(a.output_dir) / "traces")) {
    if (e.path().extension() != ".jsonl") continue;
    CHECK(Slurp(e.path()) == Slurp(fs::path(b.output_dir) / "traces" / e.path().filename()));
  }
}

TEST_CASE("one record gives a one-row metrics table") {
  ExperimentConfig cfg = Tiny("single");
  cfg.groups = {"all"};
  cfg.variants = {"t_adab"};
  MatrixResult m = RunMatrix(cfg);
  REQUIRE(m.records.size() == 1);
  CHECK(Lines(fs::path(cfg.output_dir) / "metrics.csv").size() == 2);
}

TEST_CASE("sensitivity analysis") {
  ExperimentConfig cfg = Tiny("sensitivity");
  cfg.groups = {"all"};
  cfg.variants = {"t_gbt"};
  MatrixResult m = RunMatrix(cfg);
  REQUIRE(m.records.size() == 1);
  const RunRecord& cell = m.records[0];
  CHECK(SensitivityAnalysis(cfg, cell, {}).empty());
  auto twice = SensitivityAnalysis(cfg, cell, {300, 300});
  REQUIRE(twice.size() == 2);
  CHECK(twice[0].metrics.auc == twice[1].metrics.auc);

  cfg.data_path = (fs::path(cfg.output_dir) / "small.csv").string();
  cfg.schema_path = (fs::path(cfg.output_dir) / "small.schema.json").string();
  WriteCsv(SynthGenerate(200, DefaultMissingProfile(), 0.2, 1), cfg.data_path);
  std::ofstream(cfg.schema_path) << SchemaToJson({EdSchema(), "disposition"}).dump();
  try {
    SensitivityAnalysis(cfg, cell, {500});
    FAIL("expected a size error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSize);
  }
}
}
