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


// Command-line front end. Talks to the library only through the C API.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tabutune/tabutune.h"

namespace {

using nlohmann::json;

struct CliError {
  tt_status status;
  std::string message;
};

void Check(tt_status s) {
  if (s != TT_OK) throw CliError{s, tt_last_error()};
}

std::string TakeString(char* s) {
  std::string out = s ? s : "";
  tt_free_string(s);
  return out;
}

json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError{TT_ERR_IO, "cannot read " + path};
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw CliError{TT_ERR_PARSE, path + ": " + e.what()};
  }
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!(out << text)) throw CliError{TT_ERR_IO, "cannot write " + path};
}

std::string SiblingSchema(const std::string& csv) {
  std::filesystem::path p(csv);
  return (p.parent_path() / (p.stem().string() + ".schema.json")).string();
}

std::optional<uint64_t> EnvSeed() {
  const char* env = std::getenv("TABUTUNE_SEED");
  if (env == nullptr || *env == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0') throw CliError{TT_ERR_INVALID_ARGUMENT, "TABUTUNE_SEED must be an integer"};
  return v;
}

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Options shared by the experiment subcommands. Precedence, lowest first:
// profile defaults, --config file, TABUTUNE_SEED, command-line flags.
struct ExperimentArgs {
  std::string config_path;
  bool smoke = false;
  std::string in;
  std::string schema;
  std::string out;
  std::string selection;
  std::optional<uint64_t> seed;
  std::optional<size_t> workers;
  std::optional<size_t> sample;
  std::optional<int> epochs;

  void Register(CLI::App* app) {
    app->add_option("--config", config_path, "Experiment configuration JSON");
    app->add_flag("--smoke", smoke, "Use the small smoke-test profile");
    app->add_option("--in", in, "Input CSV (default: generated data)");
    app->add_option("--schema", schema, "Schema JSON for --in (default: <in>.schema.json)");
    app->add_option("--out", out, "Output directory");
    app->add_option("--selection", selection, "Precomputed selection.json");
    app->add_option("--seed", seed, "Master seed");
    app->add_option("--workers", workers, "Cells run in parallel");
    app->add_option("--sample", sample, "Rows sampled for the study");
    app->add_option("--mlp-epochs", epochs, "Training epochs per MLP fit");
  }

  json Build() const {
    char* text = nullptr;
    Check(tt_config_default(smoke ? 1 : 0, &text));
    json cfg = json::parse(TakeString(text));
    if (!config_path.empty()) cfg.merge_patch(ReadJsonFile(config_path));
    if (auto env = EnvSeed()) cfg["seed"] = *env;
    if (seed) cfg["seed"] = *seed;
    if (!in.empty()) {
      cfg["data"]["path"] = in;
      cfg["data"]["schema"] = schema.empty() ? SiblingSchema(in) : schema;
      // A supplied file is usually already sampled by `prep`.
      if (!sample) cfg["preprocess"]["sample_size"] = 0;
    }
    if (!out.empty()) cfg["output_dir"] = out;
    if (!selection.empty()) cfg["selection"]["path"] = selection;
    if (workers) cfg["workers"] = *workers;
    if (sample) cfg["preprocess"]["sample_size"] = *sample;
    if (epochs) cfg["learner"]["mlp_epochs"] = *epochs;
    return cfg;
  }
};

int RunSynth(size_t rows, double admit, std::optional<uint64_t> seed, const std::string& out,
             std::string schema_out) {
  uint64_t s = 42;
  if (auto env = EnvSeed()) s = *env;
  if (seed) s = *seed;
  tt_dataset* d = nullptr;
  Check(tt_dataset_synth(rows, admit, s, &d));
  std::unique_ptr<tt_dataset, decltype(&tt_dataset_free)> guard(d, tt_dataset_free);
  Check(tt_dataset_write_csv(d, out.c_str()));
  char* schema = nullptr;
  Check(tt_dataset_schema_json(d, &schema));
  if (schema_out.empty()) schema_out = SiblingSchema(out);
  WriteText(schema_out, TakeString(schema) + "\n");
  size_t missing = 0;
  Check(tt_dataset_missing_cells(d, &missing));
  std::cout << "wrote " << rows << " rows to " << out << " (" << missing << " missing cells), schema "
            << schema_out << "\n";
  return 0;
}

int RunPrep(const std::string& in, std::string schema, size_t k, size_t sample,
            std::optional<uint64_t> seed, const std::string& out, std::string schema_out) {
  if (schema.empty()) schema = SiblingSchema(in);
  uint64_t s = 42;
  if (auto env = EnvSeed()) s = *env;
  if (seed) s = *seed;
  tt_dataset* raw = nullptr;
  Check(tt_dataset_load_csv(in.c_str(), schema.c_str(), &raw));
  std::unique_ptr<tt_dataset, decltype(&tt_dataset_free)> raw_guard(raw, tt_dataset_free);
  tt_dataset* prepared = nullptr;
  Check(tt_dataset_preprocess(raw, k, sample, s, &prepared));
  std::unique_ptr<tt_dataset, decltype(&tt_dataset_free)> guard(prepared, tt_dataset_free);
  Check(tt_dataset_write_csv(prepared, out.c_str()));
  char* text = nullptr;
  Check(tt_dataset_schema_json(prepared, &text));
  if (schema_out.empty()) schema_out = SiblingSchema(out);
  WriteText(schema_out, TakeString(text) + "\n");
  size_t rows = 0, pos = 0;
  Check(tt_dataset_shape(prepared, &rows, nullptr));
  Check(tt_dataset_label_count(prepared, 1, &pos));
  std::cout << "wrote " << rows << " rows (" << pos << " discharged, " << rows - pos
            << " admitted) to " << out << "\n";
  return 0;
}

int RunSelect(const ExperimentArgs& args, const std::string& groups) {
  json cfg = args.Build();
  char* text = nullptr;
  Check(tt_select_groups(cfg.dump().c_str(), &text));
  const json result = json::parse(TakeString(text));
  const std::vector<std::string> wanted = groups == "all" ? std::vector<std::string>{} : SplitList(groups);
  for (const auto& g : result["groups"]) {
    const std::string name = g["method"];
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), name) == wanted.end()) continue;
    std::cout << name << " (" << g["selected_names"].size() << "):";
    for (const auto& f : g["selected_names"]) std::cout << " " << f.get<std::string>() << ";";
    std::cout << "\n";
  }
  std::cout << "selection written to " << cfg["output_dir"].get<std::string>() << "/selection.json\n";
  return 0;
}

int RunCells(json cfg) {
  char* text = nullptr;
  Check(tt_run_matrix(cfg.dump().c_str(), &text));
  std::cout << TakeString(text);
  return 0;
}

int RunSensitivity(const ExperimentArgs& args, const std::string& sizes_arg,
                   const std::string& records_dir) {
  json cfg = args.Build();
  std::vector<size_t> sizes;
  for (const auto& s : SplitList(sizes_arg)) {
    try {
      sizes.push_back(std::stoull(s));
    } catch (const std::exception&) {
      throw CliError{TT_ERR_INVALID_ARGUMENT, "bad sample size '" + s + "'"};
    }
  }
  const std::string dir = records_dir.empty() ? cfg["output_dir"].get<std::string>() : records_dir;
  char* text = nullptr;
  Check(tt_sensitivity(cfg.dump().c_str(), dir.c_str(), sizes.data(), sizes.size(), &text));
  const std::string result = TakeString(text);
  WriteText((std::filesystem::path(dir) / "sensitivity.json").string(), result + "\n");
  const json j = json::parse(result);
  std::ofstream csv(std::filesystem::path(dir) / "sensitivity.csv");
  csv << "sample_size,auc\n";
  std::cout << "best cell " << j["group"].get<std::string>() << " / " << j["algo"].get<std::string>()
            << "\n";
  for (const auto& p : j["points"]) {
    csv << p["sample_size"] << "," << p["auc"] << "\n";
    std::cout << "  n=" << p["sample_size"] << " auc=" << p["auc"] << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tabu-search hyperparameter tuning for ED disposition models"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tt_version()));

  size_t synth_rows = 5000;
  double admit = 0.2;
  std::optional<uint64_t> seed;
  std::string out = "data.csv";
  std::string schema_out;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic ED dataset");
  synth->add_option("--rows", synth_rows, "Rows to generate")->capture_default_str();
  synth->add_option("--admit-frac", admit, "Fraction of admitted patients")->capture_default_str();
  synth->add_option("--seed", seed, "Generator seed");
  synth->add_option("--out", out, "Output CSV")->capture_default_str();
  synth->add_option("--schema-out", schema_out, "Schema JSON (default: <out>.schema.json)");

  std::string prep_in;
  std::string prep_schema;
  size_t impute_k = 4;
  size_t sample = 5000;
  std::string prep_out = "prepared.csv";
  std::string prep_schema_out;
  auto* prep = app.add_subcommand("prep", "Encode, impute and sample a dataset");
  prep->add_option("--in", prep_in, "Input CSV")->required();
  prep->add_option("--schema", prep_schema, "Schema JSON (default: <in>.schema.json)");
  prep->add_option("--impute-k", impute_k, "KNN imputation neighbours")->capture_default_str();
  prep->add_option("--sample", sample, "Rows to sample, 0 for all")->capture_default_str();
  prep->add_option("--seed", seed, "Sampling seed");
  prep->add_option("--out", prep_out, "Output CSV")->capture_default_str();
  prep->add_option("--schema-out", prep_schema_out, "Schema JSON (default: <out>.schema.json)");

  ExperimentArgs select_args;
  std::string groups = "all";
  auto* select = app.add_subcommand("select", "Run the feature selection groups");
  select_args.Register(select);
  select->add_option("--groups", groups, "Comma-separated groups to print, or all")->capture_default_str();

  ExperimentArgs tune_args;
  std::string tune_algo = "gbt";
  std::string tune_group = "all";
  std::optional<int> iters;
  auto* tune = app.add_subcommand("tune", "Tabu-search one algorithm on one feature group");
  tune_args.Register(tune);
  tune->add_option("--algo", tune_algo, "gbt, adab or mlp")->capture_default_str();
  tune->add_option("--group", tune_group, "Feature group")->capture_default_str();
  tune->add_option("--iters", iters, "Tabu search iterations");

  ExperimentArgs grid_args;
  std::string grid_algo = "gbt";
  std::string grid_group = "all";
  std::optional<size_t> budget;
  auto* grid = app.add_subcommand("grid", "Grid-search one algorithm on one feature group");
  grid_args.Register(grid);
  grid->add_option("--algo", grid_algo, "gbt, adab or mlp")->capture_default_str();
  grid->add_option("--group", grid_group, "Feature group")->capture_default_str();
  grid->add_option("--budget", budget, "Maximum grid points");

  ExperimentArgs matrix_args;
  auto* matrix = app.add_subcommand("matrix", "Run the full group x algorithm matrix");
  matrix_args.Register(matrix);

  ExperimentArgs sens_args;
  std::string sizes = "1000,5000,20000";
  std::string records_dir;
  auto* sens = app.add_subcommand("sensitivity", "Refit the best cell at several sample sizes");
  sens_args.Register(sens);
  sens->add_option("--sizes", sizes, "Comma-separated sample sizes")->capture_default_str();
  sens->add_option("--dir", records_dir, "Directory holding records.json (default: output dir)");

  std::string report_dir = "out";
  auto* report = app.add_subcommand("report", "Re-render report tables from records.json");
  report->add_option("--dir", report_dir, "Result directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) return RunSynth(synth_rows, admit, seed, out, schema_out);
    if (prep->parsed()) {
      return RunPrep(prep_in, prep_schema, impute_k, sample, seed, prep_out, prep_schema_out);
    }
    if (select->parsed()) return RunSelect(select_args, groups);
    if (tune->parsed()) {
      json cfg = tune_args.Build();
      cfg["groups"] = {tune_group};
      cfg["variants"] = {"t_" + tune_algo};
      if (iters) cfg["tabu"]["max_iterations"] = *iters;
      return RunCells(cfg);
    }
    if (grid->parsed()) {
      json cfg = grid_args.Build();
      cfg["groups"] = {grid_group};
      cfg["variants"] = {grid_algo};
      if (budget) cfg["grid"]["budget"] = *budget;
      return RunCells(cfg);
    }
    if (matrix->parsed()) return RunCells(matrix_args.Build());
    if (sens->parsed()) return RunSensitivity(sens_args, sizes, records_dir);
    if (report->parsed()) {
      Check(tt_emit_report(report_dir.c_str()));
      std::cout << "report written to " << report_dir << "\n";
      return 0;
    }
  } catch (const CliError& e) {
    std::cerr << "error (" << tt_status_name(e.status) << "): " << e.message << "\n";
    return static_cast<int>(e.status) & 0x7f ? static_cast<int>(e.status) & 0x7f : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
