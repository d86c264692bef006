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

#ifndef TABUTUNE_CORE_TUNING_H_
#define TABUTUNE_CORE_TUNING_H_

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "core/common.h"
#include "core/learner.h"
#include "core/param_space.h"
#include "json.hpp"

namespace tabutune {

struct TsConfig {
  int max_iterations = 300;
  double diversification_prob = 0.002;
  size_t neighborhood_size = 10;
  uint64_t seed = 0;
  double sigma_large = 2.0;  // move spread for parameters whose upper bound exceeds 1
  double sigma_unit = 0.1;   // move spread for parameters bounded by 1
  size_t tabu_length = 20;
  // Consecutive non-improving iterations before the search returns to the
  // best solution found so far. 0 disables.
  int intensify_after = 30;
  // Worker threads for evaluating one neighbourhood.
  size_t threads = 1;
};

using Objective = std::function<double(const ParamVector&)>;

// Coordinates after integer rounding and rounding floats to 6 decimals.
using TabuKey = std::vector<int64_t>;
TabuKey MakeTabuKey(const ParamVector& v, const ParamSpace& space);

// Bounded FIFO of recently accepted solutions.
class TabuList {
 public:
  explicit TabuList(size_t capacity) : capacity_(capacity) {}

  void Push(TabuKey key);
  // Age rank of the newest matching entry: 0 is the oldest entry; -1 when
  // the key is not tabu.
  int Find(const TabuKey& key) const;
  bool Contains(const TabuKey& key) const { return Find(key) >= 0; }
  size_t size() const { return entries_.size(); }
  size_t capacity() const { return capacity_; }

 private:
  size_t capacity_;
  std::deque<TabuKey> entries_;
};

// Uniform over [init_lower, init_upper]; integers rounded to nearest.
ParamVector InitSolution(const ParamSpace& space, Rng& rng);
// Uniform over the full [lower, upper] box.
ParamVector RandomSolution(const ParamSpace& space, Rng& rng);
// Clamp into [lower, upper]; integers made integral.
ParamVector RepairBounds(ParamVector v, const ParamSpace& space);
double MoveSigma(const ParamSpec& spec, const TsConfig& cfg);
// current + delta per coordinate, integers rounded, then repaired.
ParamVector ApplyMove(const ParamVector& current, const ParamSpace& space,
                      std::span<const double> deltas);
// Draws delta ~ Normal(0, sigma) per coordinate and applies the move.
ParamVector Neighbor(const ParamVector& current, const ParamSpace& space, Rng& rng,
                     const TsConfig& cfg = {});

struct TraceEntry {
  int iteration = 0;
  ParamVector params;
  double objective = 0.0;
  bool accepted = false;
  bool tabu_hit = false;
  bool aspiration = false;
  bool diversified = false;
  // Accepted although tabu because every candidate was tabu.
  bool forced = false;
};

nlohmann::json TraceEntryToJson(const TraceEntry& e, const ParamSpace& space);

struct SearchResult {
  ParamVector best;
  double best_objective = 0.0;
  std::vector<TraceEntry> trace;
  // best_objective after the initial evaluation and after each iteration.
  std::vector<double> best_by_iteration;
  size_t max_tabu_size = 0;
  int iterations = 0;
};

SearchResult TabuSearch(const ParamSpace& space, const Objective& objective,
                        const TsConfig& cfg);

// Evenly spaced values over [lower, upper]; integer specs use distinct
// integral values. A single point is the box midpoint.
std::vector<double> GridValues(const ParamSpec& spec, size_t points);
// Largest per-parameter point counts (grown round-robin) whose product stays
// within `budget`.
std::vector<size_t> GridPointsForBudget(const ParamSpace& space, size_t budget);
size_t GridSize(const ParamSpace& space, std::span<const size_t> points);

// Exhaustive search over the Cartesian grid; ties go to the lexicographically
// smallest vector. Throws kBudget before evaluating anything if the grid has
// more than `budget` points.
SearchResult GridSearch(const ParamSpace& space, const Objective& objective,
                        std::span<const size_t> points, size_t budget);

// Objective that fits a learner on `train` and returns validation AUC.
// Repeated vectors are served from a memo table. Fit failures score 0.5.
class ModelObjective {
 public:
  ModelObjective(Algorithm algorithm, std::shared_ptr<const TrainingData> train,
                 std::shared_ptr<const Dataset> validation, uint64_t seed,
                 LearnerOptions options = {});

  double operator()(const ParamVector& v);

  size_t evaluations() const;
  size_t memo_hits() const;
  size_t failures() const;

 private:
  Algorithm algorithm_;
  std::shared_ptr<const TrainingData> train_;
  std::shared_ptr<const Dataset> validation_;
  uint64_t seed_;
  LearnerOptions options_;
  mutable std::mutex mu_;
  std::map<ParamVector, double> memo_;
  size_t evaluations_ = 0;
  size_t hits_ = 0;
  size_t failures_ = 0;
};

// Wraps a shared ModelObjective as a plain Objective.
Objective MakeObjective(std::shared_ptr<ModelObjective> objective);

}  // namespace tabutune

#endif  // TABUTUNE_CORE_TUNING_H_
