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

#include "core/tuning.h"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "core/metrics.h"

namespace tabutune {
namespace {

bool IsIntegral(double v) { return std::isfinite(v) && std::floor(v) == v; }

std::string FormatVector(const ParamVector& v) {
  std::ostringstream os;
  os.precision(10);
  os << '[';
  for (size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ']';
  return os.str();
}

std::vector<double> EvaluateAll(const std::vector<ParamVector>& candidates,
                                const Objective& objective, size_t threads) {
  auto eval = [&](const ParamVector& v) {
    try {
      return objective(v);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kEvaluation) throw;
      throw Error(ErrorCode::kEvaluation,
                  "objective failed at " + FormatVector(v) + ": " + e.what());
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kEvaluation,
                  "objective failed at " + FormatVector(v) + ": " + e.what());
    }
  };
  std::vector<double> out(candidates.size());
  const size_t workers = std::min(threads, candidates.size());
  if (workers <= 1) {
    for (size_t i = 0; i < candidates.size(); ++i) out[i] = eval(candidates[i]);
    return out;
  }
  std::vector<std::exception_ptr> errors(candidates.size());
  std::vector<std::thread> pool;
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (size_t i = w; i < candidates.size(); i += workers) {
        try {
          out[i] = eval(candidates[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  // Report the first failing candidate in index order.
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace

void ValidateSpace(const ParamSpace& space) {
  for (const auto& s : space) {
    if (!(s.lower <= s.init_lower && s.init_lower <= s.init_upper &&
          s.init_upper <= s.upper)) {
      throw Error(ErrorCode::kInvalidArgument, "parameter '" + s.name +
                                                   "' violates lower <= init_lower <= "
                                                   "init_upper <= upper");
    }
    if (s.kind == ParamKind::kInteger && (!IsIntegral(s.lower) || !IsIntegral(s.upper))) {
      throw Error(ErrorCode::kInvalidArgument,
                  "integer parameter '" + s.name + "' has non-integral bounds");
    }
  }
}

bool InBounds(const ParamVector& v, const ParamSpace& space) {
  if (v.size() != space.size()) return false;
  for (size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= space[i].lower && v[i] <= space[i].upper)) return false;
    if (space[i].kind == ParamKind::kInteger && !IsIntegral(v[i])) return false;
  }
  return true;
}

nlohmann::json ParamsToJson(const ParamVector& v, const ParamSpace& space) {
  nlohmann::json j = nlohmann::json::object();
  for (size_t i = 0; i < space.size() && i < v.size(); ++i) {
    if (space[i].kind == ParamKind::kInteger) {
      j[space[i].name] = std::llround(v[i]);
    } else {
      j[space[i].name] = v[i];
    }
  }
  return j;
}

ParamVector ParamsFromJson(const nlohmann::json& j, const ParamSpace& space) {
  ParamVector v;
  for (const auto& s : space) {
    if (!j.contains(s.name)) {
      throw Error(ErrorCode::kInvalidArgument, "missing parameter '" + s.name + "'");
    }
    v.push_back(j.at(s.name).get<double>());
  }
  return v;
}

TabuKey MakeTabuKey(const ParamVector& v, const ParamSpace& space) {
  TabuKey key(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    const bool integer = i < space.size() && space[i].kind == ParamKind::kInteger;
    key[i] = integer ? std::llround(v[i]) : std::llround(v[i] * 1e6);
  }
  return key;
}

void TabuList::Push(TabuKey key) {
  entries_.push_back(std::move(key));
  while (entries_.size() > capacity_) entries_.pop_front();
}

int TabuList::Find(const TabuKey& key) const {
  for (size_t i = entries_.size(); i-- > 0;) {
    if (entries_[i] == key) return static_cast<int>(i);
  }
  return -1;
}

ParamVector InitSolution(const ParamSpace& space, Rng& rng) {
  ParamVector v(space.size());
  for (size_t i = 0; i < space.size(); ++i) {
    std::uniform_real_distribution<double> dist(space[i].init_lower, space[i].init_upper);
    v[i] = space[i].init_lower == space[i].init_upper ? space[i].init_lower : dist(rng);
    if (space[i].kind == ParamKind::kInteger) v[i] = std::round(v[i]);
  }
  return RepairBounds(std::move(v), space);
}

ParamVector RandomSolution(const ParamSpace& space, Rng& rng) {
  ParamVector v(space.size());
  for (size_t i = 0; i < space.size(); ++i) {
    std::uniform_real_distribution<double> dist(space[i].lower, space[i].upper);
    v[i] = space[i].lower == space[i].upper ? space[i].lower : dist(rng);
    if (space[i].kind == ParamKind::kInteger) v[i] = std::round(v[i]);
  }
  return RepairBounds(std::move(v), space);
}

ParamVector RepairBounds(ParamVector v, const ParamSpace& space) {
  if (v.size() != space.size()) {
    throw Error(ErrorCode::kShape, "parameter vector does not match the space");
  }
  for (size_t i = 0; i < v.size(); ++i) {
    if (std::isnan(v[i])) v[i] = space[i].lower;
    if (space[i].kind == ParamKind::kInteger) v[i] = std::round(v[i]);
    v[i] = std::clamp(v[i], space[i].lower, space[i].upper);
  }
  return v;
}

double MoveSigma(const ParamSpec& spec, const TsConfig& cfg) {
  return spec.upper > 1.0 ? cfg.sigma_large : cfg.sigma_unit;
}

ParamVector ApplyMove(const ParamVector& current, const ParamSpace& space,
                      std::span<const double> deltas) {
  if (current.size() != space.size() || deltas.size() != space.size()) {
    throw Error(ErrorCode::kShape, "move does not match the space");
  }
  ParamVector next(current.size());
  for (size_t i = 0; i < current.size(); ++i) {
    next[i] = current[i] + deltas[i];
    if (space[i].kind == ParamKind::kInteger) next[i] = std::round(next[i]);
  }
  return RepairBounds(std::move(next), space);
}

ParamVector Neighbor(const ParamVector& current, const ParamSpace& space, Rng& rng,
                     const TsConfig& cfg) {
  std::vector<double> deltas(space.size());
  for (size_t i = 0; i < space.size(); ++i) {
    std::normal_distribution<double> dist(0.0, MoveSigma(space[i], cfg));
    deltas[i] = dist(rng);
  }
  return ApplyMove(current, space, deltas);
}

nlohmann::json TraceEntryToJson(const TraceEntry& e, const ParamSpace& space) {
  return {
      {"iteration", e.iteration},
      {"params", ParamsToJson(e.params, space)},
      {"objective", e.objective},
      {"accepted", e.accepted},
      {"tabu_hit", e.tabu_hit},
      {"aspiration", e.aspiration},
      {"diversified", e.diversified},
      {"forced", e.forced},
  };
}

SearchResult TabuSearch(const ParamSpace& space, const Objective& objective,
                        const TsConfig& cfg) {
  ValidateSpace(space);
  if (cfg.max_iterations < 0) {
    throw Error(ErrorCode::kInvalidArgument, "max_iterations must be >= 0");
  }
  if (!(cfg.diversification_prob >= 0.0 && cfg.diversification_prob <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "diversification probability outside [0,1]");
  }
  if (cfg.neighborhood_size == 0 || cfg.tabu_length == 0) {
    throw Error(ErrorCode::kInvalidArgument, "neighbourhood and tabu list must be non-empty");
  }

  Rng rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SearchResult result;
  TabuList tabu(cfg.tabu_length);

  ParamVector current = InitSolution(space, rng);
  const double initial = EvaluateAll({current}, objective, 1)[0];
  result.trace.push_back({0, current, initial, true, false, false, false, false});
  result.best = current;
  result.best_objective = initial;
  result.best_by_iteration.push_back(initial);

  int stale = 0;
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    std::vector<ParamVector> candidates;
    candidates.reserve(cfg.neighborhood_size);
    for (size_t k = 0; k < cfg.neighborhood_size; ++k) {
      candidates.push_back(Neighbor(current, space, rng, cfg));
    }
    const std::vector<double> scores = EvaluateAll(candidates, objective, cfg.threads);

    std::vector<TabuKey> keys;
    std::vector<int> tabu_rank;
    for (const auto& c : candidates) {
      keys.push_back(MakeTabuKey(c, space));
      tabu_rank.push_back(tabu.Find(keys.back()));
    }
    std::vector<size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return scores[a] > scores[b]; });

    int chosen = -1;
    bool aspiration = false;
    bool forced = false;
    for (size_t idx : order) {
      if (tabu_rank[idx] < 0) {
        chosen = static_cast<int>(idx);
        break;
      }
      if (scores[idx] > result.best_objective) {
        chosen = static_cast<int>(idx);
        aspiration = true;
        break;
      }
    }
    if (chosen < 0) {
      // Every candidate is tabu: take the one whose tabu entry is oldest.
      forced = true;
      for (size_t idx : order) {
        if (chosen < 0 || tabu_rank[idx] < tabu_rank[chosen]) chosen = static_cast<int>(idx);
      }
    }

    bool improved = false;
    for (size_t i = 0; i < candidates.size(); ++i) {
      TraceEntry e;
      e.iteration = it;
      e.params = candidates[i];
      e.objective = scores[i];
      e.accepted = static_cast<int>(i) == chosen;
      e.tabu_hit = tabu_rank[i] >= 0;
      e.aspiration = e.accepted && aspiration;
      e.forced = e.accepted && forced;
      result.trace.push_back(std::move(e));
      if (scores[i] > result.best_objective) {
        result.best_objective = scores[i];
        result.best = candidates[i];
        improved = true;
      }
    }
    tabu.Push(keys[chosen]);
    result.max_tabu_size = std::max(result.max_tabu_size, tabu.size());
    current = candidates[chosen];

    stale = improved ? 0 : stale + 1;
    if (cfg.intensify_after > 0 && stale >= cfg.intensify_after) {
      current = result.best;
      stale = 0;
    }
    if (unit(rng) < cfg.diversification_prob) {
      current = RandomSolution(space, rng);
      const double score = EvaluateAll({current}, objective, 1)[0];
      TraceEntry e;
      e.iteration = it;
      e.params = current;
      e.objective = score;
      e.accepted = true;
      e.diversified = true;
      result.trace.push_back(std::move(e));
      if (score > result.best_objective) {
        result.best_objective = score;
        result.best = current;
      }
    }
    result.best_by_iteration.push_back(result.best_objective);
    result.iterations = it;
  }
  return result;
}

std::vector<double> GridValues(const ParamSpec& spec, size_t points) {
  if (points == 0) throw Error(ErrorCode::kInvalidArgument, "grid needs >= 1 point");
  std::vector<double> values;
  if (points == 1) {
    double mid = spec.lower + (spec.upper - spec.lower) / 2.0;
    if (spec.kind == ParamKind::kInteger) mid = std::round(mid);
    return {std::clamp(mid, spec.lower, spec.upper)};
  }
  for (size_t i = 0; i < points; ++i) {
    double v = spec.lower + (spec.upper - spec.lower) * static_cast<double>(i) /
                                static_cast<double>(points - 1);
    if (i + 1 == points) v = spec.upper;
    if (spec.kind == ParamKind::kInteger) v = std::round(v);
    if (values.empty() || v != values.back()) values.push_back(v);
  }
  return values;
}

size_t GridSize(const ParamSpace& space, std::span<const size_t> points) {
  if (points.size() != space.size()) {
    throw Error(ErrorCode::kInvalidArgument, "one grid point count per parameter required");
  }
  size_t total = 1;
  for (size_t i = 0; i < space.size(); ++i) {
    const size_t k = GridValues(space[i], points[i]).size();
    if (k != 0 && total > std::numeric_limits<size_t>::max() / k) {
      return std::numeric_limits<size_t>::max();
    }
    total *= k;
  }
  return total;
}

std::vector<size_t> GridPointsForBudget(const ParamSpace& space, size_t budget) {
  std::vector<size_t> points(space.size(), 1);
  auto cap = [&](size_t i) -> size_t {
    if (space[i].kind == ParamKind::kInteger) {
      return static_cast<size_t>(space[i].upper - space[i].lower) + 1;
    }
    return std::numeric_limits<size_t>::max();
  };
  size_t product = 1;
  for (;;) {
    std::vector<size_t> order(space.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return points[a] < points[b]; });
    bool grown = false;
    for (size_t i : order) {
      if (points[i] >= cap(i)) continue;
      const size_t next = product / points[i] * (points[i] + 1);
      if (next > budget) continue;
      product = next;
      ++points[i];
      grown = true;
      break;
    }
    if (!grown) break;
  }
  return points;
}

SearchResult GridSearch(const ParamSpace& space, const Objective& objective,
                        std::span<const size_t> points, size_t budget) {
  ValidateSpace(space);
  const size_t total = GridSize(space, points);
  if (total > budget) {
    throw Error(ErrorCode::kBudget, "grid of " + std::to_string(total) +
                                        " points exceeds the budget of " +
                                        std::to_string(budget));
  }
  std::vector<std::vector<double>> axes;
  for (size_t i = 0; i < space.size(); ++i) axes.push_back(GridValues(space[i], points[i]));

  SearchResult result;
  std::vector<size_t> odometer(space.size(), 0);
  bool first = true;
  for (size_t step = 0; step < total; ++step) {
    ParamVector v(space.size());
    for (size_t i = 0; i < space.size(); ++i) v[i] = axes[i][odometer[i]];
    const double score = EvaluateAll({v}, objective, 1)[0];
    TraceEntry e;
    e.iteration = static_cast<int>(step);
    e.params = v;
    e.objective = score;
    if (first || score > result.best_objective) {
      result.best_objective = score;
      result.best = v;
      first = false;
    }
    e.accepted = result.best == v;
    result.trace.push_back(std::move(e));
    result.best_by_iteration.push_back(result.best_objective);
    // Last coordinate varies fastest: lexicographic order.
    for (size_t i = space.size(); i-- > 0;) {
      if (++odometer[i] < axes[i].size()) break;
      odometer[i] = 0;
    }
  }
  result.iterations = static_cast<int>(total);
  return result;
}

ModelObjective::ModelObjective(Algorithm algorithm,
                               std::shared_ptr<const TrainingData> train,
                               std::shared_ptr<const Dataset> validation, uint64_t seed,
                               LearnerOptions options)
    : algorithm_(algorithm), train_(std::move(train)), validation_(std::move(validation)),
      seed_(seed), options_(options) {}

double ModelObjective::operator()(const ParamVector& v) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(v);
    if (it != memo_.end()) {
      ++hits_;
      return it->second;
    }
  }
  double score;
  bool failed = false;
  try {
    auto model = FitModel(algorithm_, *train_, v, seed_, options_);
    const std::vector<double> scores = model->Score(*validation_);
    score = Auc(validation_->labels(), scores);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kFit) throw;
    std::cerr << "[tabutune] warning: " << AlgorithmName(algorithm_) << " fit failed at "
              << FormatVector(v) << " (" << e.what() << "); scoring 0.5\n";
    score = 0.5;
    failed = true;
  }
  std::lock_guard<std::mutex> lock(mu_);
  memo_[v] = score;
  ++evaluations_;
  if (failed) ++failures_;
  return score;
}

size_t ModelObjective::evaluations() const {
  std::lock_guard<std::mutex> lock(mu_);
  return evaluations_;
}

size_t ModelObjective::memo_hits() const {
  std::lock_guard<std::mutex> lock(mu_);
  return hits_;
}

size_t ModelObjective::failures() const {
  std::lock_guard<std::mutex> lock(mu_);
  return failures_;
}

Objective MakeObjective(std::shared_ptr<ModelObjective> objective) {
  return [objective](const ParamVector& v) { return (*objective)(v); };
}

}  // namespace tabutune
