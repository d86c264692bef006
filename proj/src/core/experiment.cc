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


#include "core/experiment.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "core/gbt.h"
#include "core/learner.h"

namespace tabutune {
namespace fs = std::filesystem;
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::ofstream OpenOut(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

nlohmann::json ReadJson(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

void RejectUnknownKeys(const nlohmann::json& j, std::initializer_list<const char*> known,
                       const std::string& where) {
  if (!j.is_object()) throw Error(ErrorCode::kParse, where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      throw Error(ErrorCode::kParse, "unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
void Read(const nlohmann::json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

std::vector<size_t> AllRows(size_t n) {
  std::vector<size_t> v(n);
  for (size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

Dataset LoadRaw(const ExperimentConfig& cfg) {
  if (cfg.data_path.empty()) {
    return SynthGenerate(cfg.synth_rows, DefaultMissingProfile(), cfg.admit_fraction,
                         DeriveSeed(cfg.seed, "synth"));
  }
  if (cfg.schema_path.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "a schema file is required with a data file");
  }
  SchemaDecl decl = LoadSchemaFile(cfg.schema_path);
  return LoadCsv(cfg.data_path, decl.features, decl.label_column);
}

std::vector<size_t> ColumnsByName(const Dataset& d, const std::vector<std::string>& names) {
  std::vector<size_t> cols;
  for (const auto& name : names) {
    const int idx = d.FeatureIndex(name);
    if (idx < 0) throw Error(ErrorCode::kSchema, "unknown feature '" + name + "'");
    cols.push_back(static_cast<size_t>(idx));
  }
  return cols;
}

// Training rows after oversampling, plus the held-out rows on the same scale.
struct FitInputs {
  std::shared_ptr<const TrainingData> train;
  std::shared_ptr<const Dataset> holdout;
};

FitInputs BuildFitInputs(const Dataset& train, const Dataset& holdout, Algorithm algorithm,
                         const SmoteConfig& smote) {
  Dataset balanced = Smote(train, smote);
  Dataset scored = holdout;
  if (UsesNormalizedInputs(algorithm)) {
    auto [scaled, scaler] =
        NormalizeMinMax(balanced, AllRows(balanced.rows()), ScaleScope::kAllColumns);
    balanced = std::move(scaled);
    scored = scaler.Apply(holdout);
  }
  return {std::make_shared<const TrainingData>(std::move(balanced)),
          std::make_shared<const Dataset>(std::move(scored))};
}

uint64_t CellSeed(uint64_t master, const std::string& group, const std::string& algo) {
  return DeriveSeed(master, group + "/" + algo);
}

double Median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : (v[mid - 1] + v[mid]) / 2.0;
}

std::mutex log_mu;

}  // namespace

std::string VariantName(const Variant& v) {
  return (v.tabu ? "t_" : "") + AlgorithmName(v.algorithm);
}

Variant ParseVariant(const std::string& name) {
  for (const auto& v : AllVariants()) {
    if (VariantName(v) == name) return v;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown algorithm '" + name + "'");
}

std::vector<Variant> AllVariants() {
  return {{Algorithm::kGbt, true},  {Algorithm::kAdaboost, true},  {Algorithm::kMlp, true},
          {Algorithm::kGbt, false}, {Algorithm::kAdaboost, false}, {Algorithm::kMlp, false}};
}

ExperimentConfig SmokeConfig() {
  ExperimentConfig cfg;
  cfg.profile = "smoke";
  cfg.synth_rows = 500;
  cfg.sample_size = 500;
  cfg.ts.max_iterations = 30;
  cfg.output_dir = "out-smoke";
  return cfg;
}

nlohmann::json ConfigToJson(const ExperimentConfig& c) {
  const auto& s = c.selection;
  return {
      {"seed", c.seed},
      {"profile", c.profile},
      {"data",
       {{"path", c.data_path},
        {"schema", c.schema_path},
        {"synth_rows", c.synth_rows},
        {"admit_fraction", c.admit_fraction}}},
      {"preprocess",
       {{"impute_k", c.impute_k},
        {"impute_after_sample", c.impute_after_sample},
        {"sample_size", c.sample_size},
        {"test_fraction", c.test_fraction},
        {"tuning_fraction", c.tuning_fraction},
        {"single_split", c.single_split}}},
      {"smote", {{"k_neighbors", c.smote.k_neighbors}, {"target_ratio", c.smote.target_ratio}}},
      {"selection",
       {{"path", c.selection_path},
        {"skb_k", s.skb_k},
        {"chi_bins", s.chi_bins},
        {"dt_rfe_keep", s.dt_rfe_keep},
        {"rf_rfe_keep", s.rf_rfe_keep},
        {"lasso_rfe_keep", s.lasso_rfe_keep},
        {"rfe_step", s.rfe_step},
        {"lasso_lambda", s.lasso_lambda},
        {"rf_trees", s.rf_trees},
        {"vote_threshold", s.vote_threshold}}},
      {"tabu",
       {{"max_iterations", c.ts.max_iterations},
        {"neighborhood_size", c.ts.neighborhood_size},
        {"diversification_prob", c.ts.diversification_prob},
        {"tabu_length", c.ts.tabu_length},
        {"intensify_after", c.ts.intensify_after},
        {"sigma_large", c.ts.sigma_large},
        {"sigma_unit", c.ts.sigma_unit},
        {"threads", c.ts.threads}}},
      {"grid", {{"budget", c.grid_budget}}},
      {"learner", {{"mlp_epochs", c.learner.mlp_epochs}}},
      {"groups", c.groups},
      {"variants", c.variants},
      {"workers", c.workers},
      {"output_dir", c.output_dir},
  };
}

ExperimentConfig ConfigFromJson(const nlohmann::json& j, const ExperimentConfig& base) {
  ExperimentConfig c = base;
  try {
    RejectUnknownKeys(j,
                      {"seed", "profile", "data", "preprocess", "smote", "selection", "tabu",
                       "grid", "learner", "groups", "variants", "workers", "output_dir"},
                      "config");
    Read(j, "seed", c.seed);
    Read(j, "profile", c.profile);
    Read(j, "groups", c.groups);
    Read(j, "variants", c.variants);
    Read(j, "workers", c.workers);
    Read(j, "output_dir", c.output_dir);
    if (j.contains("data")) {
      const auto& d = j["data"];
      RejectUnknownKeys(d, {"path", "schema", "synth_rows", "admit_fraction"}, "data");
      Read(d, "path", c.data_path);
      Read(d, "schema", c.schema_path);
      Read(d, "synth_rows", c.synth_rows);
      Read(d, "admit_fraction", c.admit_fraction);
    }
    if (j.contains("preprocess")) {
      const auto& p = j["preprocess"];
      RejectUnknownKeys(p,
                        {"impute_k", "impute_after_sample", "sample_size", "test_fraction",
                         "tuning_fraction", "single_split"},
                        "preprocess");
      Read(p, "impute_k", c.impute_k);
      Read(p, "impute_after_sample", c.impute_after_sample);
      Read(p, "sample_size", c.sample_size);
      Read(p, "test_fraction", c.test_fraction);
      Read(p, "tuning_fraction", c.tuning_fraction);
      Read(p, "single_split", c.single_split);
    }
    if (j.contains("smote")) {
      const auto& s = j["smote"];
      RejectUnknownKeys(s, {"k_neighbors", "target_ratio"}, "smote");
      Read(s, "k_neighbors", c.smote.k_neighbors);
      Read(s, "target_ratio", c.smote.target_ratio);
    }
    if (j.contains("selection")) {
      const auto& s = j["selection"];
      RejectUnknownKeys(s,
                        {"path", "skb_k", "chi_bins", "dt_rfe_keep", "rf_rfe_keep",
                         "lasso_rfe_keep", "rfe_step", "lasso_lambda", "rf_trees",
                         "vote_threshold"},
                        "selection");
      Read(s, "path", c.selection_path);
      Read(s, "skb_k", c.selection.skb_k);
      Read(s, "chi_bins", c.selection.chi_bins);
      Read(s, "dt_rfe_keep", c.selection.dt_rfe_keep);
      Read(s, "rf_rfe_keep", c.selection.rf_rfe_keep);
      Read(s, "lasso_rfe_keep", c.selection.lasso_rfe_keep);
      Read(s, "rfe_step", c.selection.rfe_step);
      Read(s, "lasso_lambda", c.selection.lasso_lambda);
      Read(s, "rf_trees", c.selection.rf_trees);
      Read(s, "vote_threshold", c.selection.vote_threshold);
    }
    if (j.contains("tabu")) {
      const auto& t = j["tabu"];
      RejectUnknownKeys(t,
                        {"max_iterations", "neighborhood_size", "diversification_prob",
                         "tabu_length", "intensify_after", "sigma_large", "sigma_unit",
                         "threads"},
                        "tabu");
      Read(t, "max_iterations", c.ts.max_iterations);
      Read(t, "neighborhood_size", c.ts.neighborhood_size);
      Read(t, "diversification_prob", c.ts.diversification_prob);
      Read(t, "tabu_length", c.ts.tabu_length);
      Read(t, "intensify_after", c.ts.intensify_after);
      Read(t, "sigma_large", c.ts.sigma_large);
      Read(t, "sigma_unit", c.ts.sigma_unit);
      Read(t, "threads", c.ts.threads);
    }
    if (j.contains("grid")) {
      RejectUnknownKeys(j["grid"], {"budget"}, "grid");
      Read(j["grid"], "budget", c.grid_budget);
    }
    if (j.contains("learner")) {
      RejectUnknownKeys(j["learner"], {"mlp_epochs"}, "learner");
      Read(j["learner"], "mlp_epochs", c.learner.mlp_epochs);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("bad config: ") + e.what());
  }
  for (const auto& g : c.groups) ParseSelectionMethod(g);
  for (const auto& v : c.variants) ParseVariant(v);
  if (!(c.test_fraction > 0 && c.test_fraction < 1) ||
      !(c.tuning_fraction > 0 && c.tuning_fraction < 1)) {
    throw Error(ErrorCode::kInvalidArgument, "split fractions must lie in (0, 1)");
  }
  return c;
}

void ApplySeedOverride(ExperimentConfig& cfg) {
  const char* env = std::getenv("TABUTUNE_SEED");
  if (env == nullptr || *env == '\0') return;
  char* end = nullptr;
  const unsigned long long seed = std::strtoull(env, &end, 10);
  if (*end != '\0') {
    throw Error(ErrorCode::kInvalidArgument, std::string("TABUTUNE_SEED is not an integer: ") + env);
  }
  cfg.seed = seed;
}

Dataset PrepareDataset(const Dataset& raw, size_t impute_k, size_t sample_size, uint64_t seed,
                       bool impute_after_sample) {
  Dataset d = EncodeCategoricals(raw);
  if (sample_size > d.rows()) {
    throw Error(ErrorCode::kSize, "sample of " + std::to_string(sample_size) +
                                      " rows requested from " + std::to_string(d.rows()));
  }
  const size_t m = sample_size == 0 ? d.rows() : sample_size;
  if (impute_after_sample) return KnnImpute(RandomSample(d, m, seed), impute_k);
  return RandomSample(KnnImpute(d, impute_k), m, seed);
}

PreparedData Prepare(const ExperimentConfig& cfg) {
  PreparedData out;
  out.sample = PrepareDataset(LoadRaw(cfg), cfg.impute_k, cfg.sample_size,
                              DeriveSeed(cfg.seed, "sample"), cfg.impute_after_sample);
  auto [train, test] = StratifiedSplit(out.sample, cfg.test_fraction, DeriveSeed(cfg.seed, "split"));
  out.train = std::move(train);
  out.test = std::move(test);
  out.feature_names = out.sample.FeatureNames();
  return out;
}

nlohmann::json RecordToJson(const RunRecord& r) {
  nlohmann::json j = {
      {"group", r.group},
      {"algo", r.algo},
      {"failed", r.failed},
      {"error", r.error},
      {"best_params", r.best_params},
      {"features", r.features},
      {"tuning_auc", r.tuning_auc},
      {"evaluations", r.evaluations},
      {"fit_failures", r.fit_failures},
      {"iterations", r.iterations},
      {"trace_path", r.trace_path},
      {"wall_seconds", r.wall_seconds},
      {"best_by_iteration", r.best_by_iteration},
      {"split_counts", r.split_counts},
  };
  if (!r.failed) j["metrics"] = MetricsToJson(r.metrics, false);
  return j;
}

RunRecord RecordFromJson(const nlohmann::json& j) {
  RunRecord r;
  try {
    r.group = j.at("group").get<std::string>();
    r.algo = j.at("algo").get<std::string>();
    Read(j, "failed", r.failed);
    Read(j, "error", r.error);
    if (j.contains("best_params")) r.best_params = j["best_params"];
    Read(j, "features", r.features);
    Read(j, "tuning_auc", r.tuning_auc);
    Read(j, "evaluations", r.evaluations);
    Read(j, "fit_failures", r.fit_failures);
    Read(j, "iterations", r.iterations);
    Read(j, "trace_path", r.trace_path);
    Read(j, "wall_seconds", r.wall_seconds);
    Read(j, "best_by_iteration", r.best_by_iteration);
    Read(j, "split_counts", r.split_counts);
    if (j.contains("metrics")) r.metrics = MetricsFromJson(j["metrics"]);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("bad run record: ") + e.what());
  }
  return r;
}

std::vector<SelectionResult> LoadSelection(const std::string& path,
                                           const std::vector<std::string>& feature_names) {
  const nlohmann::json j = ReadJson(path);
  const nlohmann::json& groups = j.is_object() ? j.at("groups") : j;
  std::vector<SelectionResult> out;
  for (const auto& g : groups) out.push_back(SelectionFromJson(g, feature_names));
  return out;
}

std::vector<SelectionResult> SelectGroups(const Dataset& train, const ExperimentConfig& cfg) {
  if (!cfg.selection_path.empty()) return LoadSelection(cfg.selection_path, train.FeatureNames());
  SelectionConfig sc = cfg.selection;
  sc.seed = DeriveSeed(cfg.seed, "selection");
  return RunSelection(train, sc);
}

RunRecord RunCell(const PreparedData& data, const SelectionResult& group, const Variant& variant,
                  const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  RunRecord rec;
  rec.group = SelectionMethodName(group.method);
  rec.algo = VariantName(variant);
  for (size_t c : group.selected) rec.features.push_back(data.feature_names.at(c));
  const uint64_t cell_seed = CellSeed(cfg.seed, rec.group, rec.algo);
  const uint64_t fit_seed = DeriveSeed(cell_seed, "fit");

  const Dataset train = data.train.SelectColumns(group.selected);
  const Dataset test = data.test.SelectColumns(group.selected);
  Dataset tune_fit = train;
  Dataset tune_score = test;
  if (!cfg.single_split) {
    auto [fit, score] = StratifiedSplit(train, cfg.tuning_fraction, DeriveSeed(cfg.seed, "tuning"));
    tune_fit = std::move(fit);
    tune_score = std::move(score);
  }
  SmoteConfig smote = cfg.smote;
  smote.seed = DeriveSeed(cfg.seed, "smote/" + rec.group);
  FitInputs tuning = BuildFitInputs(tune_fit, tune_score, variant.algorithm, smote);

  auto objective = std::make_shared<ModelObjective>(variant.algorithm, tuning.train,
                                                    tuning.holdout, fit_seed, cfg.learner);
  const ParamSpace space = DefaultSpace(variant.algorithm);
  SearchResult search;
  if (variant.tabu) {
    TsConfig ts = cfg.ts;
    ts.seed = DeriveSeed(cell_seed, "search");
    search = TabuSearch(space, MakeObjective(objective), ts);
  } else {
    const size_t budget = cfg.grid_budget ? cfg.grid_budget
                                          : static_cast<size_t>(cfg.ts.max_iterations) *
                                                cfg.ts.neighborhood_size;
    const auto points = GridPointsForBudget(space, std::max<size_t>(budget, 1));
    search = GridSearch(space, MakeObjective(objective), points, std::max<size_t>(budget, 1));
  }
  rec.best_params = ParamsToJson(search.best, space);
  rec.tuning_auc = search.best_objective;
  rec.evaluations = objective->evaluations();
  rec.fit_failures = objective->failures();
  rec.iterations = search.iterations;
  rec.best_by_iteration = search.best_by_iteration;

  // Refit the winner on the whole oversampled training split.
  SmoteConfig final_smote = cfg.smote;
  final_smote.seed = DeriveSeed(cfg.seed, "smote_final/" + rec.group);
  FitInputs final_inputs = BuildFitInputs(train, test, variant.algorithm, final_smote);
  auto model = FitModel(variant.algorithm, *final_inputs.train, search.best, fit_seed, cfg.learner);
  rec.metrics = Evaluate(test.labels(), model->Score(*final_inputs.holdout));
  if (const auto* gbt = dynamic_cast<const GbtModel*>(model.get())) {
    for (size_t i = 0; i < rec.features.size(); ++i) {
      rec.split_counts[rec.features[i]] = static_cast<double>(gbt->split_counts().at(i));
    }
  }

  rec.wall_seconds = Seconds(start);
  const fs::path dir = fs::path(cfg.output_dir) / "traces";
  fs::create_directories(dir);
  const std::string stem = rec.group + "__" + rec.algo;
  rec.trace_path = "traces/" + stem + ".jsonl";
  {
    std::ofstream out = OpenOut(dir / (stem + ".jsonl"));
    for (const auto& e : search.trace) out << TraceEntryToJson(e, space).dump() << '\n';
  }
  {
    std::ofstream out = OpenOut(dir / (stem + ".summary.json"));
    out << nlohmann::json{{"group", rec.group},
                          {"algo", rec.algo},
                          {"best_params", rec.best_params},
                          {"best_auc", rec.tuning_auc},
                          {"iterations", rec.iterations},
                          {"evaluations", rec.evaluations},
                          {"wall_seconds", rec.wall_seconds}}
               .dump(2)
        << '\n';
  }
  return rec;
}

MatrixResult RunMatrix(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  const PreparedData data = Prepare(cfg);
  MatrixResult result;
  result.feature_names = data.feature_names;
  result.selection = SelectGroups(data.train, cfg);

  std::vector<const SelectionResult*> groups;
  for (const auto& s : result.selection) {
    if (cfg.groups.empty() ||
        std::find(cfg.groups.begin(), cfg.groups.end(), SelectionMethodName(s.method)) !=
            cfg.groups.end()) {
      groups.push_back(&s);
    }
  }
  std::vector<Variant> variants;
  if (cfg.variants.empty()) {
    variants = AllVariants();
  } else {
    for (const auto& v : cfg.variants) variants.push_back(ParseVariant(v));
  }
  struct Cell {
    const SelectionResult* group;
    Variant variant;
  };
  std::vector<Cell> cells;
  for (const auto* g : groups) {
    for (const auto& v : variants) cells.push_back({g, v});
  }
  {
    std::lock_guard<std::mutex> lock(log_mu);
    std::cerr << "[tabutune] " << cells.size() << " cells, " << data.train.rows() << " train / "
              << data.test.rows() << " test rows (" << Fixed(Seconds(start)) << "s prep)\n";
  }

  result.records.resize(cells.size());
  std::atomic<size_t> next{0};
  std::atomic<size_t> done{0};
  auto worker = [&] {
    for (size_t i = next++; i < cells.size(); i = next++) {
      const Cell& cell = cells[i];
      RunRecord rec;
      try {
        rec = RunCell(data, *cell.group, cell.variant, cfg);
      } catch (const std::exception& e) {
        rec.group = SelectionMethodName(cell.group->method);
        rec.algo = VariantName(cell.variant);
        rec.failed = true;
        rec.error = e.what();
      }
      std::lock_guard<std::mutex> lock(log_mu);
      std::cerr << "[tabutune] " << ++done << "/" << cells.size() << " " << rec.group << " "
                << rec.algo << " "
                << (rec.failed ? "FAILED: " + rec.error : "auc=" + Fixed(rec.metrics.auc)) << " ("
                << Fixed(rec.wall_seconds) << "s)\n";
      result.records[i] = std::move(rec);
    }
  };
  size_t workers = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<size_t>(cells.size(), 1));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  fs::create_directories(cfg.output_dir);
  {
    std::ofstream out = OpenOut(fs::path(cfg.output_dir) / "config.json");
    out << ConfigToJson(cfg).dump(2) << '\n';
  }
  EmitReport(result, cfg.output_dir);
  return result;
}

int BestRecord(const std::vector<RunRecord>& records) {
  int best = -1;
  for (size_t i = 0; i < records.size(); ++i) {
    if (records[i].failed) continue;
    if (best < 0 || records[i].metrics.auc > records[best].metrics.auc) best = static_cast<int>(i);
  }
  return best;
}

std::vector<SensitivityPoint> SensitivityAnalysis(const ExperimentConfig& cfg,
                                                  const RunRecord& cell,
                                                  const std::vector<size_t>& sizes) {
  std::vector<SensitivityPoint> out;
  if (sizes.empty()) return out;
  if (cell.failed) throw Error(ErrorCode::kInvalidArgument, "cannot rerun a failed cell");
  const Variant variant = ParseVariant(cell.algo);
  const ParamSpace space = DefaultSpace(variant.algorithm);
  const ParamVector params = ParamsFromJson(cell.best_params, space);
  const size_t largest = *std::max_element(sizes.begin(), sizes.end());

  ExperimentConfig source = cfg;
  if (source.data_path.empty()) source.synth_rows = std::max(source.synth_rows, largest);
  Dataset full = EncodeCategoricals(LoadRaw(source));
  if (largest > full.rows()) {
    throw Error(ErrorCode::kSize, "sample of " + std::to_string(largest) +
                                      " rows requested from " + std::to_string(full.rows()));
  }
  if (!cfg.impute_after_sample) full = KnnImpute(full, cfg.impute_k);
  const std::vector<size_t> columns = ColumnsByName(full, cell.features);
  const uint64_t fit_seed = DeriveSeed(CellSeed(cfg.seed, cell.group, cell.algo), "fit");

  for (size_t m : sizes) {
    if (m == 0) throw Error(ErrorCode::kSize, "sample size must be positive");
    Dataset sample = RandomSample(full, m, DeriveSeed(cfg.seed, "sample"));
    if (cfg.impute_after_sample) sample = KnnImpute(sample, cfg.impute_k);
    sample = sample.SelectColumns(columns);
    auto [train, test] = StratifiedSplit(sample, cfg.test_fraction, DeriveSeed(cfg.seed, "split"));
    SmoteConfig smote = cfg.smote;
    smote.seed = DeriveSeed(cfg.seed, "smote_final/" + cell.group);
    FitInputs inputs = BuildFitInputs(train, test, variant.algorithm, smote);
    auto model = FitModel(variant.algorithm, *inputs.train, params, fit_seed, cfg.learner);
    out.push_back({m, Evaluate(test.labels(), model->Score(*inputs.holdout))});
  }
  return out;
}

void EmitReport(const MatrixResult& result, const std::string& dir_name) {
  const fs::path dir(dir_name);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
  const auto& records = result.records;
  const auto& names = result.feature_names;

  {
    nlohmann::json j = {{"feature_names", names}, {"records", nlohmann::json::array()}};
    for (const auto& r : records) j["records"].push_back(RecordToJson(r));
    OpenOut(dir / "records.json") << j.dump(2) << '\n';
  }
  {
    nlohmann::json j = {{"groups", nlohmann::json::array()}};
    for (const auto& s : result.selection) j["groups"].push_back(SelectionToJson(s, names));
    OpenOut(dir / "selection.json") << j.dump(2) << '\n';
  }
  {
    std::ofstream out = OpenOut(dir / "metrics.csv");
    out << "group,algo,auc,sensitivity,specificity,f1,accuracy\n";
    for (const auto& r : records) {
      out << r.group << ',' << r.algo;
      if (r.failed) {
        out << ",NA,NA,NA,NA,NA\n";
        continue;
      }
      const auto& m = r.metrics;
      out << ',' << Fixed(m.auc) << ',' << Fixed(m.sensitivity) << ',' << Fixed(m.specificity)
          << ',' << Fixed(m.f1) << ',' << Fixed(m.accuracy) << '\n';
    }
  }
  if (!result.selection.empty()) {
    std::ofstream out = OpenOut(dir / "selection.csv");
    out << "feature";
    for (const auto& s : result.selection) {
      if (s.method != SelectionMethod::kAll) out << ',' << SelectionMethodName(s.method);
    }
    out << ",total\n";
    for (size_t f = 0; f < names.size(); ++f) {
      out << names[f];
      int total = 0;
      for (const auto& s : result.selection) {
        if (s.method == SelectionMethod::kAll) continue;
        const bool chosen = std::binary_search(s.selected.begin(), s.selected.end(), f);
        out << ',' << (chosen ? 1 : 0);
        if (chosen && s.method != SelectionMethod::kVoting) ++total;
      }
      out << ',' << total << '\n';
    }
  }
  {
    // Parameter rows by group columns, one table per algorithm.
    std::vector<std::string> algos;
    for (const auto& r : records) {
      if (std::find(algos.begin(), algos.end(), r.algo) == algos.end()) algos.push_back(r.algo);
    }
    for (const auto& algo : algos) {
      const ParamSpace space = DefaultSpace(ParseVariant(algo).algorithm);
      std::vector<const RunRecord*> cols;
      for (const auto& r : records) {
        if (r.algo == algo) cols.push_back(&r);
      }
      std::ofstream out = OpenOut(dir / ("params_" + algo + ".csv"));
      out << "param";
      for (const auto* r : cols) out << ',' << r->group;
      out << '\n';
      for (const auto& spec : space) {
        out << spec.name;
        for (const auto* r : cols) {
          out << ',';
          if (r->failed || !r->best_params.contains(spec.name)) {
            out << "NA";
          } else if (spec.kind == ParamKind::kInteger) {
            out << r->best_params[spec.name].get<long long>();
          } else {
            out << Fixed(r->best_params[spec.name].get<double>());
          }
        }
        out << '\n';
      }
    }
  }
  {
    std::ofstream out = OpenOut(dir / "convergence.csv");
    out << "group,algo,step,best_auc\n";
    for (const auto& r : records) {
      for (size_t i = 0; i < r.best_by_iteration.size(); ++i) {
        out << r.group << ',' << r.algo << ',' << i << ',' << Fixed(r.best_by_iteration[i]) << '\n';
      }
    }
  }
  {
    int best_gbt = -1;
    for (size_t i = 0; i < records.size(); ++i) {
      const auto& r = records[i];
      if (r.failed || ParseVariant(r.algo).algorithm != Algorithm::kGbt) continue;
      if (best_gbt < 0 || r.metrics.auc > records[best_gbt].metrics.auc) {
        best_gbt = static_cast<int>(i);
      }
    }
    std::ofstream out = OpenOut(dir / "feature_importance.csv");
    out << "feature,split_count\n";
    if (best_gbt >= 0) {
      const auto& r = records[best_gbt];
      std::vector<std::pair<std::string, double>> rows;
      for (const auto& f : r.features) rows.emplace_back(f, r.split_counts.count(f) ? r.split_counts.at(f) : 0.0);
      std::stable_sort(rows.begin(), rows.end(),
                       [](const auto& a, const auto& b) { return a.second > b.second; });
      for (const auto& [f, count] : rows) out << f << ',' << static_cast<long long>(count) << '\n';
    }
  }
  {
    nlohmann::json summary = {{"cells", records.size()}};
    size_t failed = 0;
    std::map<std::string, std::vector<double>> by_algo;
    for (const auto& r : records) {
      if (r.failed) {
        ++failed;
        continue;
      }
      by_algo[r.algo].push_back(r.metrics.auc);
    }
    summary["failed"] = failed;
    const int best = BestRecord(records);
    if (best >= 0) {
      const auto& r = records[best];
      summary["best"] = {{"group", r.group},
                         {"algo", r.algo},
                         {"auc", r.metrics.auc},
                         {"metrics", MetricsToJson(r.metrics, false)},
                         {"best_params", r.best_params}};
    }
    nlohmann::json medians = nlohmann::json::object();
    for (const auto& [algo, aucs] : by_algo) medians[algo] = Median(aucs);
    summary["median_auc"] = medians;
    // Tabu variant against its grid counterpart on the same group.
    nlohmann::json versus = nlohmann::json::object();
    for (Algorithm a : {Algorithm::kGbt, Algorithm::kAdaboost, Algorithm::kMlp}) {
      const std::string tabu = VariantName({a, true});
      const std::string grid = VariantName({a, false});
      size_t pairs = 0;
      size_t wins = 0;
      for (const auto& t : records) {
        if (t.failed || t.algo != tabu) continue;
        for (const auto& g : records) {
          if (g.failed || g.algo != grid || g.group != t.group) continue;
          ++pairs;
          if (t.metrics.auc >= g.metrics.auc) ++wins;
        }
      }
      if (pairs == 0) continue;
      versus[AlgorithmName(a)] = {{"cells", pairs},
                                  {"tabu_at_least_grid", wins},
                                  {"tabu_median_auc", Median(by_algo[tabu])},
                                  {"grid_median_auc", Median(by_algo[grid])}};
    }
    summary["tabu_vs_grid"] = versus;
    OpenOut(dir / "summary.json") << summary.dump(2) << '\n';
  }
}

MatrixResult LoadMatrixResult(const std::string& dir_name) {
  const fs::path dir(dir_name);
  const nlohmann::json j = ReadJson(dir / "records.json");
  MatrixResult result;
  try {
    result.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    for (const auto& r : j.at("records")) result.records.push_back(RecordFromJson(r));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("bad records.json: ") + e.what());
  }
  if (fs::exists(dir / "selection.json")) {
    result.selection = LoadSelection((dir / "selection.json").string(), result.feature_names);
  }
  return result;
}

}  // namespace tabutune
