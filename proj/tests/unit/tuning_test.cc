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
#include <deque>
#include <memory>
#include <stdexcept>
#include <vector>

#include "core/common.h"
#include "core/dataset.h"
#include "core/learner.h"
#include "core/param_space.h"
#include "core/tuning.h"
#include "doctest.h"
#include "oracles/oracles.h"

using namespace tabutune;

namespace {

ParamSpace IntSquare(int hi) {
  const double top = static_cast<double>(hi);
  const double init = std::min(5.0, top);
  return {{"a", ParamKind::kInteger, 0, top, 0, init}, {"b", ParamKind::kInteger, 0, top, 0, init}};
}

Objective Quadratic(std::vector<double> c) {
  return [c](const ParamVector& v) {
    double s = 0.0;
    for (size_t i = 0; i < v.size(); ++i) s -= (v[i] - c[i]) * (v[i] - c[i]);
    return s;
  };
}

std::vector<FeatureSchema> Numeric(size_t p) {
  std::vector<FeatureSchema> s;
  for (size_t i = 0; i < p; ++i) s.push_back({"x" + std::to_string(i), FeatureKind::kNumeric, {}});
  return s;
}

}  // namespace

TEST_SUITE("tuning") {
TEST_CASE("space validation") {
  ParamSpace bad = {{"a", ParamKind::kFloat, 0, 1, 0.5, 0.2}};
  CHECK_THROWS_AS(ValidateSpace(bad), Error);
  ParamSpace frac = {{"n", ParamKind::kInteger, 0, 1.5, 0, 1}};
  CHECK_THROWS_AS(ValidateSpace(frac), Error);
  for (Algorithm a : {Algorithm::kGbt, Algorithm::kAdaboost, Algorithm::kMlp}) {
    CHECK_NOTHROW(ValidateSpace(DefaultSpace(a)));
  }
}

TEST_CASE("initial solutions stay in the init range") {
  const ParamSpace gbt = DefaultSpace(Algorithm::kGbt);
  Rng rng(1);
  for (int i = 0; i < 500; ++i) {
    ParamVector v = InitSolution(gbt, rng);
    CHECK(v[0] >= 1);
    CHECK(v[0] <= 5);
    CHECK(v[0] == std::round(v[0]));
    CHECK(v[2] >= 0.001);
    CHECK(v[2] <= 0.1);
  }
  ParamSpace fixed = {{"c", ParamKind::kFloat, 0, 10, 3.25, 3.25}};
  CHECK(InitSolution(fixed, rng)[0] == 3.25);
}

TEST_CASE("moves and repair") {
  const ParamSpace gbt = DefaultSpace(Algorithm::kGbt);
  ParamVector v = {10, 5, 0.05, 1.0, 2, 1};
  std::vector<double> d = {0, 0, 0.008, 0, 0, 0};
  CHECK(ApplyMove(v, gbt, d)[2] == doctest::Approx(0.058));
  std::vector<double> zero(6, 0.0);
  CHECK(ApplyMove(v, gbt, zero) == v);
  v[0] = 48;
  std::vector<double> up = {3.7, 0, 0, 0, 0, 0};
  CHECK(ApplyMove(v, gbt, up)[0] == 50);

  ParamVector out = {63, 5, -0.3, 1.0, 2, 1};
  ParamVector fixed = RepairBounds(out, gbt);
  CHECK(fixed[0] == 50);
  CHECK(fixed[2] == 0.0);
  ParamVector inside = {10, 5, 0.05, 1.0, 2, 1};
  CHECK(RepairBounds(inside, gbt) == inside);
}

TEST_CASE("move spread keys on the upper bound") {
  TsConfig cfg;
  const ParamSpace gbt = DefaultSpace(Algorithm::kGbt);
  CHECK(MoveSigma(gbt[0], cfg) == 2.0);
  CHECK(MoveSigma(gbt[2], cfg) == 0.1);
}

TEST_CASE("tabu list is a bounded FIFO") {
  TabuList list(3);
  for (int64_t i = 0; i < 5; ++i) list.Push({i});
  CHECK(list.size() == 3);
  CHECK(!list.Contains({0}));
  CHECK(!list.Contains({1}));
  CHECK(list.Find({2}) == 0);
  CHECK(list.Find({4}) == 2);
  const ParamSpace s = {{"f", ParamKind::kFloat, 0, 1, 0, 1}};
  CHECK(MakeTabuKey({0.1234564}, s) == MakeTabuKey({0.1234561}, s));
  CHECK(MakeTabuKey({0.123456}, s) != MakeTabuKey({0.123457}, s));
}

TEST_CASE("zero iterations returns the initial solution") {
  TsConfig cfg;
  cfg.max_iterations = 0;
  cfg.seed = 3;
  auto r = TabuSearch(IntSquare(20), Quadratic({13, 7}), cfg);
  REQUIRE(r.trace.size() == 1);
  CHECK(r.best == r.trace[0].params);
  CHECK(r.best_objective == r.trace[0].objective);
  CHECK(r.iterations == 0);
}

TEST_CASE("tabu search finds the exhaustive optimum of a separable surrogate") {
  const ParamSpace space = IntSquare(20);
  const Objective f = Quadratic({13, 7});
  const auto expect = oracle::ExhaustiveArgmax(f, {0, 0}, {20, 20});
  for (uint64_t seed = 0; seed < 5; ++seed) {
    TsConfig cfg;
    cfg.seed = seed;
    auto r = TabuSearch(space, f, cfg);
    CHECK(r.best == expect);
  }
}

TEST_CASE("search invariants over the trace") {
  const ParamSpace space = DefaultSpace(Algorithm::kGbt);
  const Objective f = Quadratic({30, 12, 0.3, 20.5, 7, 3});
  TsConfig cfg;
  cfg.seed = 11;
  cfg.max_iterations = 120;
  cfg.diversification_prob = 0.05;
  auto r = TabuSearch(space, f, cfg);
  CHECK(r.max_tabu_size <= 20);
  REQUIRE(r.best_by_iteration.size() == 121);
  for (size_t i = 1; i < r.best_by_iteration.size(); ++i) {
    CHECK(r.best_by_iteration[i] >= r.best_by_iteration[i - 1]);
  }
  double best = -INFINITY;
  for (const auto& e : r.trace) {
    CHECK(InBounds(e.params, space));
    best = std::max(best, e.objective);
  }
  CHECK(best == r.best_objective);

  // No accepted move repeats one of the last 20 unless aspiration or the
  // all-tabu rule allowed it.
  std::deque<TabuKey> recent;
  for (const auto& e : r.trace) {
    if (!e.accepted || e.diversified || e.iteration == 0) continue;
    const TabuKey key = MakeTabuKey(e.params, space);
    const bool repeated = std::find(recent.begin(), recent.end(), key) != recent.end();
    if (repeated) CHECK((e.aspiration || e.forced));
    CHECK(repeated == e.tabu_hit);
    recent.push_back(key);
    if (recent.size() > 20) recent.pop_front();
  }
}

TEST_CASE("all-tabu neighbourhoods still move") {
  // A one-point space makes every candidate tabu after the first move.
  ParamSpace space = {{"n", ParamKind::kInteger, 4, 4, 4, 4}};
  TsConfig cfg;
  cfg.max_iterations = 5;
  auto r = TabuSearch(space, [](const ParamVector&) { return 1.0; }, cfg);
  int forced = 0;
  for (const auto& e : r.trace) forced += e.forced;
  CHECK(forced == 4);
  CHECK(r.iterations == 5);
}

TEST_CASE("tabu search is reproducible") {
  const ParamSpace space = DefaultSpace(Algorithm::kAdaboost);
  const Objective f = Quadratic({20, 0.5, 10, 10, 10});
  TsConfig cfg;
  cfg.seed = 5;
  cfg.max_iterations = 50;
  auto a = TabuSearch(space, f, cfg);
  cfg.threads = 3;
  auto b = TabuSearch(space, f, cfg);
  REQUIRE(a.trace.size() == b.trace.size());
  for (size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(TraceEntryToJson(a.trace[i], space).dump() == TraceEntryToJson(b.trace[i], space).dump());
  }
}

TEST_CASE("objective failures carry the offending vector") {
  TsConfig cfg;
  cfg.max_iterations = 3;
  try {
    TabuSearch(IntSquare(10), [](const ParamVector&) -> double { throw std::runtime_error("boom"); },
               cfg);
    FAIL("expected an evaluation error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEvaluation);
    CHECK(std::string(e.what()).find("boom") != std::string::npos);
    CHECK(std::string(e.what()).find('[') != std::string::npos);
  }
}

TEST_CASE("tabu search matches or beats grid search at equal budget") {
  const ParamSpace space = {{"n", ParamKind::kInteger, 0, 50, 1, 5},
                            {"r", ParamKind::kFloat, 0, 1, 0.001, 0.1}};
  int wins = 0;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(DeriveSeed(seed, 1));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::vector<double> c = {std::round(u(rng) * 50), u(rng)};
    const Objective f = Quadratic(c);
    TsConfig cfg;
    cfg.seed = seed;
    cfg.max_iterations = 30;
    auto ts = TabuSearch(space, f, cfg);
    const size_t budget = cfg.max_iterations * cfg.neighborhood_size;
    auto points = GridPointsForBudget(space, budget);
    auto grid = GridSearch(space, f, points, budget);
    wins += ts.best_objective >= grid.best_objective;
  }
  CHECK(wins >= 16);
}

TEST_CASE("grid values") {
  ParamSpec f{"f", ParamKind::kFloat, 0, 1, 0, 1};
  CHECK(GridValues(f, 5) == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  CHECK(GridValues(f, 1) == std::vector<double>{0.5});
  ParamSpec n{"n", ParamKind::kInteger, 1, 50, 1, 5};
  auto v = GridValues(n, 4);
  CHECK(v.front() == 1);
  CHECK(v.back() == 50);
  for (double x : v) CHECK(x == std::round(x));
  ParamSpec small{"s", ParamKind::kInteger, 0, 2, 0, 2};
  CHECK(GridValues(small, 10).size() == 3);
}

TEST_CASE("grid search") {
  const ParamSpace space = IntSquare(4);
  const Objective f = Quadratic({3, 1});
  std::vector<size_t> five = {5, 5};
  auto r = GridSearch(space, f, five, 25);
  CHECK(r.best == oracle::ExhaustiveArgmax(f, {0, 0}, {4, 4}));
  CHECK(r.trace.size() == 25);

  std::vector<size_t> one = {1, 1};
  CHECK(GridSearch(space, f, one, 1).best == ParamVector{2, 2});

  auto flat = GridSearch(space, [](const ParamVector&) { return 0.0; }, five, 25);
  CHECK(flat.best == ParamVector{0, 0});

  int calls = 0;
  try {
    GridSearch(space, [&](const ParamVector&) { ++calls; return 0.0; }, five, 24);
    FAIL("expected a budget error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBudget);
  }
  CHECK(calls == 0);
}

TEST_CASE("grid points fit the budget") {
  for (Algorithm a : {Algorithm::kGbt, Algorithm::kAdaboost, Algorithm::kMlp}) {
    const ParamSpace space = DefaultSpace(a);
    auto points = GridPointsForBudget(space, 3000);
    const size_t size = GridSize(space, points);
    CHECK(size <= 3000);
    CHECK(size >= 3000 / 4);
  }
}

TEST_CASE("model objective memoises and scores degenerate fits") {
  Rng rng(2);
  std::normal_distribution<double> g(0, 1);
  std::vector<double> v;
  std::vector<int> y;
  for (int i = 0; i < 200; ++i) {
    y.push_back(i % 2);
    v.push_back(g(rng) + y.back());
    v.push_back(g(rng));
  }
  Dataset all(Numeric(2), v, y);
  auto [train, test] = StratifiedSplit(all, 0.3, 1);
  auto obj = std::make_shared<ModelObjective>(
      Algorithm::kGbt, std::make_shared<const TrainingData>(train),
      std::make_shared<const Dataset>(test), 7);
  ParamVector p = {5, 3, 0.1, 0.0, 0, 1};
  const double first = (*obj)(p);
  const double second = (*obj)(p);
  CHECK(first == second);
  CHECK(obj->evaluations() == 1);
  CHECK(obj->memo_hits() == 1);
  CHECK(first > 0.6);

  ParamVector leaf = {5, 3, 0.1, 50.0, 0, 1};
  CHECK((*obj)(leaf) == doctest::Approx(0.5));

  const ParamVector dt_sfm = {14, 23, 0.075, 1.621, 3, 1};
  CHECK(InBounds(dt_sfm, DefaultSpace(Algorithm::kGbt)));
  const ParamVector rf_rfe = {11, 0.276, 15, 15, 11};
  CHECK(InBounds(rf_rfe, DefaultSpace(Algorithm::kAdaboost)));
  Objective wrapped = MakeObjective(obj);
  CHECK(wrapped(dt_sfm) >= 0.0);
}

TEST_CASE("parameter json round trip") {
  const ParamSpace space = DefaultSpace(Algorithm::kMlp);
  ParamVector v = {3, 17, 30, 0.25, 0.5, 0.001};
  auto j = ParamsToJson(v, space);
  CHECK(j["hidden_2"].get<int>() == 17);
  CHECK(ParamsFromJson(j, space) == v);
}
}
