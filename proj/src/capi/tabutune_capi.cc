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


#include "tabutune/tabutune.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <new>
#include <string>

#include "core/experiment.h"
#include "core/learner.h"
#include "core/metrics.h"

struct tt_dataset {
  tabutune::Dataset data;
};

struct tt_model {
  std::unique_ptr<tabutune::Model> model;
};

namespace {

thread_local std::string last_error;

tt_status Fail(tt_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <typename F>
tt_status Guard(F&& body) {
  try {
    body();
    last_error.clear();
    return TT_OK;
  } catch (const tabutune::Error& e) {
    return Fail(static_cast<tt_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(TT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(TT_ERR_INTERNAL, e.what());
  }
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void Require(bool ok, const char* what) {
  if (!ok) throw tabutune::Error(tabutune::ErrorCode::kInvalidArgument, what);
}

tabutune::ExperimentConfig ParseConfig(const char* config_json) {
  if (config_json == nullptr || *config_json == '\0') return {};
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(config_json);
  } catch (const nlohmann::json::exception& e) {
    throw tabutune::Error(tabutune::ErrorCode::kParse, std::string("config: ") + e.what());
  }
  return tabutune::ConfigFromJson(j);
}

}  // namespace

extern "C" {

const char* tt_version(void) { return "1.0.0"; }

const char* tt_status_name(tt_status status) {
  switch (status) {
    case TT_OK: return "ok";
    case TT_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case TT_ERR_PARSE: return "parse_error";
    case TT_ERR_LABEL: return "label_error";
    case TT_ERR_IO: return "io_error";
    case TT_ERR_SIZE: return "size_error";
    case TT_ERR_DOMAIN: return "domain_error";
    case TT_ERR_SHAPE: return "shape_error";
    case TT_ERR_SCHEMA: return "schema_error";
    case TT_ERR_IMPUTE: return "impute_error";
    case TT_ERR_STRATIFICATION: return "stratification_error";
    case TT_ERR_RESAMPLE: return "resample_error";
    case TT_ERR_FIT: return "fit_error";
    case TT_ERR_BUDGET: return "budget_error";
    case TT_ERR_EVALUATION: return "evaluation_error";
    case TT_ERR_SELECTION: return "selection_error";
    case TT_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

const char* tt_last_error(void) { return last_error.c_str(); }

void tt_free_string(char* s) { std::free(s); }

tt_status tt_dataset_synth(size_t rows, double admit_fraction, uint64_t seed, tt_dataset** out) {
  return Guard([&] {
    Require(out != nullptr, "out is null");
    *out = nullptr;
    auto d = std::make_unique<tt_dataset>();
    d->data = tabutune::SynthGenerate(rows, tabutune::DefaultMissingProfile(), admit_fraction, seed);
    *out = d.release();
  });
}

tt_status tt_dataset_load_csv(const char* path, const char* schema_path, tt_dataset** out) {
  return Guard([&] {
    Require(path != nullptr && schema_path != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    const tabutune::SchemaDecl decl = tabutune::LoadSchemaFile(schema_path);
    auto d = std::make_unique<tt_dataset>();
    d->data = tabutune::LoadCsv(path, decl.features, decl.label_column);
    *out = d.release();
  });
}

tt_status tt_dataset_write_csv(const tt_dataset* d, const char* path) {
  return Guard([&] {
    Require(d != nullptr && path != nullptr, "null argument");
    tabutune::WriteCsv(d->data, path);
  });
}

tt_status tt_dataset_schema_json(const tt_dataset* d, char** out_json) {
  return Guard([&] {
    Require(d != nullptr && out_json != nullptr, "null argument");
    tabutune::SchemaDecl decl;
    decl.features = d->data.schema();
    *out_json = CopyString(tabutune::SchemaToJson(decl).dump(2));
  });
}

tt_status tt_dataset_shape(const tt_dataset* d, size_t* rows, size_t* cols) {
  return Guard([&] {
    Require(d != nullptr, "dataset is null");
    if (rows) *rows = d->data.rows();
    if (cols) *cols = d->data.cols();
  });
}

tt_status tt_dataset_missing_cells(const tt_dataset* d, size_t* count) {
  return Guard([&] {
    Require(d != nullptr && count != nullptr, "null argument");
    *count = d->data.CountMissing();
  });
}

tt_status tt_dataset_label_count(const tt_dataset* d, int label, size_t* count) {
  return Guard([&] {
    Require(d != nullptr && count != nullptr, "null argument");
    *count = d->data.CountLabel(label);
  });
}

tt_status tt_dataset_preprocess(const tt_dataset* in, size_t impute_k, size_t sample_size,
                                uint64_t seed, tt_dataset** out) {
  return Guard([&] {
    Require(in != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    auto d = std::make_unique<tt_dataset>();
    d->data = tabutune::PrepareDataset(in->data, impute_k, sample_size, seed);
    *out = d.release();
  });
}

void tt_dataset_free(tt_dataset* d) { delete d; }

tt_status tt_config_default(int smoke, char** out_json) {
  return Guard([&] {
    Require(out_json != nullptr, "out is null");
    const auto cfg = smoke ? tabutune::SmokeConfig() : tabutune::ExperimentConfig{};
    *out_json = CopyString(tabutune::ConfigToJson(cfg).dump(2));
  });
}

tt_status tt_select_groups(const char* config_json, char** out_json) {
  return Guard([&] {
    const auto cfg = ParseConfig(config_json);
    const auto data = tabutune::Prepare(cfg);
    const auto groups = tabutune::SelectGroups(data.train, cfg);
    nlohmann::json j = {{"groups", nlohmann::json::array()}};
    for (const auto& g : groups) j["groups"].push_back(tabutune::SelectionToJson(g, data.feature_names));
    std::filesystem::create_directories(cfg.output_dir);
    const auto path = std::filesystem::path(cfg.output_dir) / "selection.json";
    std::ofstream file(path);
    if (!(file << j.dump(2) << '\n')) {
      throw tabutune::Error(tabutune::ErrorCode::kIo, "cannot write " + path.string());
    }
    if (out_json) *out_json = CopyString(j.dump(2));
  });
}

tt_status tt_run_matrix(const char* config_json, char** out_json) {
  return Guard([&] {
    const auto cfg = ParseConfig(config_json);
    tabutune::RunMatrix(cfg);
    if (out_json) {
      std::ifstream in(std::filesystem::path(cfg.output_dir) / "summary.json");
      std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      *out_json = CopyString(text);
    }
  });
}

tt_status tt_sensitivity(const char* config_json, const char* records_dir, const size_t* sizes,
                         size_t n_sizes, char** out_json) {
  return Guard([&] {
    Require(records_dir != nullptr && (sizes != nullptr || n_sizes == 0), "null argument");
    const auto cfg = ParseConfig(config_json);
    const auto result = tabutune::LoadMatrixResult(records_dir);
    const int best = tabutune::BestRecord(result.records);
    if (best < 0) {
      throw tabutune::Error(tabutune::ErrorCode::kInvalidArgument,
                            "no successful record in " + std::string(records_dir));
    }
    const auto& cell = result.records[best];
    const auto points = tabutune::SensitivityAnalysis(cfg, cell, {sizes, sizes + n_sizes});
    nlohmann::json j = {{"group", cell.group}, {"algo", cell.algo}, {"points", nlohmann::json::array()}};
    for (const auto& p : points) {
      j["points"].push_back({{"sample_size", p.sample_size},
                             {"auc", p.metrics.auc},
                             {"metrics", tabutune::MetricsToJson(p.metrics, false)}});
    }
    if (out_json) *out_json = CopyString(j.dump(2));
  });
}

tt_status tt_emit_report(const char* dir) {
  return Guard([&] {
    Require(dir != nullptr, "dir is null");
    tabutune::EmitReport(tabutune::LoadMatrixResult(dir), dir);
  });
}

tt_status tt_model_fit(const tt_dataset* train, const char* algo, const char* params_json,
                       uint64_t seed, tt_model** out) {
  return Guard([&] {
    Require(train != nullptr && algo != nullptr && params_json != nullptr && out != nullptr,
            "null argument");
    *out = nullptr;
    const auto a = tabutune::ParseAlgorithm(algo);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(params_json);
    } catch (const nlohmann::json::exception& e) {
      throw tabutune::Error(tabutune::ErrorCode::kParse, std::string("params: ") + e.what());
    }
    const auto params = tabutune::ParamsFromJson(j, tabutune::DefaultSpace(a));
    tabutune::TrainingData data(train->data);
    auto m = std::make_unique<tt_model>();
    m->model = tabutune::FitModel(a, data, params, seed);
    *out = m.release();
  });
}

tt_status tt_model_score(const tt_model* m, const tt_dataset* d, double* scores, size_t n_scores) {
  return Guard([&] {
    Require(m != nullptr && d != nullptr && scores != nullptr, "null argument");
    if (n_scores != d->data.rows()) {
      throw tabutune::Error(tabutune::ErrorCode::kShape, "score buffer does not match row count");
    }
    const auto s = m->model->Score(d->data);
    std::copy(s.begin(), s.end(), scores);
  });
}

tt_status tt_model_to_json(const tt_model* m, char** out_json) {
  return Guard([&] {
    Require(m != nullptr && out_json != nullptr, "null argument");
    *out_json = CopyString(m->model->ToJson().dump());
  });
}

tt_status tt_model_from_json(const char* json, tt_model** out) {
  return Guard([&] {
    Require(json != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
      throw tabutune::Error(tabutune::ErrorCode::kParse, std::string("model: ") + e.what());
    }
    auto m = std::make_unique<tt_model>();
    m->model = tabutune::ModelFromJson(j);
    *out = m.release();
  });
}

void tt_model_free(tt_model* m) { delete m; }

tt_status tt_roc_auc(const int* labels, const double* scores, size_t n, double* auc) {
  return Guard([&] {
    Require(labels != nullptr && scores != nullptr && auc != nullptr, "null argument");
    *auc = tabutune::Auc({labels, n}, {scores, n});
  });
}

tt_status tt_evaluate(const int* labels, const double* scores, size_t n, char** out_json) {
  return Guard([&] {
    Require(labels != nullptr && scores != nullptr && out_json != nullptr, "null argument");
    *out_json = CopyString(tabutune::MetricsToJson(tabutune::Evaluate({labels, n}, {scores, n}), false).dump(2));
  });
}

}  // extern "C"
