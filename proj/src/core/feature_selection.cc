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


#include "core/feature_selection.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/tree.h"

namespace tabutune {
namespace {

constexpr const char* kMethodNames[] = {
    "lasso_sfm", "dt_sfm", "rf_sfm", "chi_skb", "dt_rfe", "rf_rfe", "lasso_rfe", "voting", "all",
};

void RequireComplete(const Dataset& d, const char* what) {
  if (d.CountMissing() != 0) {
    throw Error(ErrorCode::kSelection, std::string(what) + " needs imputed data");
  }
  if (d.CountLabel(0) == 0 || d.CountLabel(1) == 0) {
    throw Error(ErrorCode::kFit, std::string(what) + " needs both classes");
  }
}

// Interval index per row: equal-frequency bins over the sorted values; equal
// values always share an interval.
std::vector<size_t> EqualFrequencyBins(const Dataset& d, size_t col, size_t bins) {
  const size_t n = d.rows();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return d.at(a, col) < d.at(b, col); });
  std::vector<size_t> bin(n);
  size_t start = 0;
  while (start < n) {
    size_t end = start;
    while (end < n && d.at(order[end], col) == d.at(order[start], col)) ++end;
    const size_t b = std::min(bins - 1, start * bins / n);
    for (size_t i = start; i < end; ++i) bin[order[i]] = b;
    start = end;
  }
  return bin;
}

std::vector<size_t> AllIndices(size_t n) {
  std::vector<size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

const char* SelectionMethodName(SelectionMethod m) {
  return kMethodNames[static_cast<int>(m)];
}

SelectionMethod ParseSelectionMethod(const std::string& name) {
  for (auto m : kSelectionMethods) {
    if (name == SelectionMethodName(m)) return m;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown selection group '" + name + "'");
}

nlohmann::json SelectionToJson(const SelectionResult& r,
                               const std::vector<std::string>& feature_names) {
  nlohmann::json names = nlohmann::json::array();
  for (size_t i : r.selected) names.push_back(feature_names.at(i));
  return {{"method", SelectionMethodName(r.method)},
          {"selected", r.selected},
          {"selected_names", names},
          {"scores", r.scores}};
}

SelectionResult SelectionFromJson(const nlohmann::json& j,
                                  const std::vector<std::string>& feature_names) {
  SelectionResult r;
  r.method = ParseSelectionMethod(j.at("method").get<std::string>());
  if (j.contains("selected")) {
    r.selected = j.at("selected").get<std::vector<size_t>>();
  } else {
    for (const auto& name : j.at("selected_names")) {
      auto it = std::find(feature_names.begin(), feature_names.end(), name.get<std::string>());
      if (it == feature_names.end()) {
        throw Error(ErrorCode::kSchema, "unknown feature '" + name.get<std::string>() + "'");
      }
      r.selected.push_back(static_cast<size_t>(it - feature_names.begin()));
    }
    std::sort(r.selected.begin(), r.selected.end());
  }
  if (j.contains("scores")) r.scores = j.at("scores").get<std::vector<double>>();
  for (size_t i : r.selected) {
    if (i >= feature_names.size()) throw Error(ErrorCode::kSchema, "selected index out of range");
  }
  return r;
}

double ChiSquareFromTable(const std::vector<std::vector<double>>& table) {
  if (table.empty()) return 0.0;
  const size_t classes = table[0].size();
  std::vector<double> col_sum(classes, 0.0);
  std::vector<double> row_sum(table.size(), 0.0);
  double total = 0.0;
  for (size_t i = 0; i < table.size(); ++i) {
    if (table[i].size() != classes) throw Error(ErrorCode::kShape, "ragged contingency table");
    for (size_t j = 0; j < classes; ++j) {
      if (table[i][j] < 0) throw Error(ErrorCode::kDomain, "negative count");
      row_sum[i] += table[i][j];
      col_sum[j] += table[i][j];
      total += table[i][j];
    }
  }
  if (total == 0) return 0.0;
  double chi = 0.0;
  for (size_t i = 0; i < table.size(); ++i) {
    for (size_t j = 0; j < classes; ++j) {
      const double expected = row_sum[i] * col_sum[j] / total;
      if (expected == 0) continue;
      const double diff = table[i][j] - expected;
      chi += diff * diff / expected;
    }
  }
  return chi;
}

std::vector<double> ChiSquareScores(const Dataset& d, size_t bins) {
  if (bins < 2) throw Error(ErrorCode::kInvalidArgument, "chi-square needs >= 2 bins");
  for (int y : d.labels()) {
    if (y != 0 && y != 1) throw Error(ErrorCode::kLabel, "labels must be binary");
  }
  std::vector<double> scores(d.cols(), 0.0);
  for (size_t c = 0; c < d.cols(); ++c) {
    std::vector<size_t> interval;
    size_t count = 0;
    if (d.schema()[c].kind == FeatureKind::kCategorical) {
      std::map<double, size_t> codes;
      for (size_t r = 0; r < d.rows(); ++r) codes.emplace(d.at(r, c), 0);
      for (auto& [code, idx] : codes) idx = count++;
      for (size_t r = 0; r < d.rows(); ++r) interval.push_back(codes[d.at(r, c)]);
    } else {
      interval = EqualFrequencyBins(d, c, bins);
      count = bins;
    }
    std::vector<std::vector<double>> table(count, std::vector<double>(2, 0.0));
    for (size_t r = 0; r < d.rows(); ++r) table[interval[r]][d.labels()[r]] += 1.0;
    scores[c] = ChiSquareFromTable(table);
  }
  return scores;
}

std::vector<size_t> SelectKBest(std::span<const double> scores, size_t k) {
  if (k == 0 || k > scores.size()) {
    throw Error(ErrorCode::kSize, "k=" + std::to_string(k) + " outside [1, " +
                                      std::to_string(scores.size()) + "]");
  }
  std::vector<size_t> order = AllIndices(scores.size());
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] > scores[b]; });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<size_t> SelectFromModel(std::span<const double> importances) {
  std::vector<double> imp(importances.begin(), importances.end());
  for (double& v : imp) v = std::max(v, 0.0);
  double mean = 0.0;
  for (double v : imp) mean += v;
  mean /= static_cast<double>(std::max<size_t>(imp.size(), 1));
  // Absorb summation rounding so equal importances all pass.
  const double slack = 1e-12 * std::max(1.0, std::abs(mean));
  std::vector<size_t> keep;
  for (size_t i = 0; i < imp.size(); ++i) {
    if (imp[i] >= mean - slack) keep.push_back(i);
  }
  return keep;
}

LassoFit FitLassoLogistic(const Dataset& d, double lambda, const LassoConfig& cfg) {
  if (!(lambda >= 0)) throw Error(ErrorCode::kInvalidArgument, "lambda must be >= 0");
  if (d.CountMissing() != 0) throw Error(ErrorCode::kSelection, "lasso needs imputed data");
  const Eigen::Index n = static_cast<Eigen::Index>(d.rows());
  const Eigen::Index p = static_cast<Eigen::Index>(d.cols());
  if (n == 0) throw Error(ErrorCode::kSize, "lasso needs rows");
  Eigen::MatrixXd x(n, p + 1);
  Eigen::VectorXd y(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < p; ++c) x(r, c) = d.at(r, c);
    x(r, p) = 1.0;
    y(r) = d.labels()[r];
  }
  // Lipschitz constant of the mean log-loss gradient.
  const Eigen::MatrixXd gram = x.transpose() * x / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double lipschitz = 0.25 * eig.eigenvalues().maxCoeff() * 1.0001 + 1e-12;
  const double step = 1.0 / lipschitz;

  auto gradient = [&](const Eigen::VectorXd& w) {
    Eigen::VectorXd margin = x * w;
    Eigen::VectorXd resid(n);
    for (Eigen::Index i = 0; i < n; ++i) resid(i) = Sigmoid(margin(i)) - y(i);
    return Eigen::VectorXd(x.transpose() * resid / static_cast<double>(n));
  };
  auto prox = [&](Eigen::VectorXd w) {
    const double t = step * lambda;
    for (Eigen::Index c = 0; c < p; ++c) {
      const double v = w(c);
      w(c) = v > t ? v - t : (v < -t ? v + t : 0.0);
    }
    return w;
  };

  Eigen::VectorXd w = Eigen::VectorXd::Zero(p + 1);
  Eigen::VectorXd z = w;
  double momentum = 1.0;
  LassoFit fit;
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    Eigen::VectorXd next = prox(z - step * gradient(z));
    const double change = (next - w).cwiseAbs().maxCoeff();
    const double next_momentum = (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum)) / 2.0;
    // Restart the acceleration when it points against the last step.
    if ((z - next).dot(next - w) > 0) {
      momentum = 1.0;
      z = next;
    } else {
      z = next + ((momentum - 1.0) / next_momentum) * (next - w);
      momentum = next_momentum;
    }
    w = std::move(next);
    fit.iterations = it;
    if (change < cfg.tolerance) {
      fit.converged = true;
      break;
    }
  }
  fit.coef.assign(w.data(), w.data() + p);
  fit.intercept = w(p);
  return fit;
}

std::vector<double> DtImportance(const Dataset& d) {
  RequireComplete(d, "decision tree importance");
  FeatureMatrix x(d);
  std::vector<double> weights(d.rows(), 1.0);
  auto fit = FitClassificationTree(x, d.labels(), weights, TreeLimits{});
  double total = std::accumulate(fit.importance.begin(), fit.importance.end(), 0.0);
  if (total > 0) {
    for (double& v : fit.importance) v /= total;
  }
  return fit.importance;
}

RfImportanceResult RfImportance(const Dataset& d, const RfConfig& cfg) {
  RequireComplete(d, "random forest importance");
  if (cfg.n_trees == 0) throw Error(ErrorCode::kInvalidArgument, "forest needs >= 1 tree");
  const size_t n = d.rows();
  const size_t p = d.cols();
  FeatureMatrix x(d);
  TreeLimits limits;
  limits.max_features =
      cfg.max_features ? cfg.max_features
                       : std::max<size_t>(1, static_cast<size_t>(std::sqrt(static_cast<double>(p))));
  Rng rng(cfg.seed);
  std::uniform_int_distribution<size_t> pick(0, n - 1);
  const auto& labels = d.labels();

  // drops[j][b]
  std::vector<std::vector<double>> drops(p, std::vector<double>(cfg.n_trees, 0.0));
  std::vector<double> weights(n);
  std::vector<double> buffer;
  for (size_t b = 0; b < cfg.n_trees; ++b) {
    std::fill(weights.begin(), weights.end(), 0.0);
    for (size_t i = 0; i < n; ++i) weights[pick(rng)] += 1.0;
    std::vector<size_t> oob;
    for (size_t i = 0; i < n; ++i) {
      if (weights[i] == 0) oob.push_back(i);
    }
    auto fit = FitClassificationTree(x, labels, weights, limits, &rng);
    if (oob.empty()) continue;
    buffer.assign(oob.size() * p, 0.0);
    for (size_t k = 0; k < oob.size(); ++k) {
      auto row = d.row(oob[k]);
      std::copy(row.begin(), row.end(), buffer.begin() + k * p);
    }
    auto accuracy = [&]() {
      size_t correct = 0;
      for (size_t k = 0; k < oob.size(); ++k) {
        const double prob = fit.tree.Predict({buffer.data() + k * p, p});
        correct += (prob >= 0.5 ? 1 : 0) == labels[oob[k]];
      }
      return static_cast<double>(correct) / static_cast<double>(oob.size());
    };
    const double base = accuracy();
    std::vector<double> saved(oob.size());
    for (size_t j = 0; j < p; ++j) {
      for (size_t k = 0; k < oob.size(); ++k) saved[k] = buffer[k * p + j];
      std::vector<double> shuffled = saved;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      for (size_t k = 0; k < oob.size(); ++k) buffer[k * p + j] = shuffled[k];
      drops[j][b] = base - accuracy();
      for (size_t k = 0; k < oob.size(); ++k) buffer[k * p + j] = saved[k];
    }
  }

  RfImportanceResult out;
  out.single_tree = cfg.n_trees == 1;
  const double trees = static_cast<double>(cfg.n_trees);
  for (size_t j = 0; j < p; ++j) {
    const double mean = std::accumulate(drops[j].begin(), drops[j].end(), 0.0) / trees;
    out.mean_drop.push_back(mean);
    if (out.single_tree) {
      out.z.push_back(mean);
      continue;
    }
    double ss = 0.0;
    for (double v : drops[j]) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (trees - 1.0));
    out.z.push_back(sd > 0 ? mean / (sd / std::sqrt(trees)) : 0.0);
  }
  return out;
}

std::vector<double> RankerImportance(const Dataset& d, Ranker ranker,
                                     const SelectionConfig& cfg) {
  switch (ranker) {
    case Ranker::kDt:
      return DtImportance(d);
    case Ranker::kRf: {
      RfConfig rf;
      rf.n_trees = cfg.rf_trees;
      rf.seed = cfg.seed;
      return RfImportance(d, rf).z;
    }
    case Ranker::kLasso: {
      RequireComplete(d, "lasso importance");
      const auto all = AllIndices(d.rows());
      const Dataset scaled = NormalizeMinMax(d, all, ScaleScope::kAllColumns).first;
      LassoFit fit = FitLassoLogistic(scaled, cfg.lasso_lambda);
      for (double& v : fit.coef) v = std::abs(v);
      return fit.coef;
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown ranker");
}

SelectionResult Rfe(const Dataset& d, Ranker ranker, size_t n_keep, size_t step,
                    const SelectionConfig& cfg) {
  if (n_keep == 0 || n_keep > d.cols()) {
    throw Error(ErrorCode::kSize, "n_keep=" + std::to_string(n_keep) + " outside [1, " +
                                      std::to_string(d.cols()) + "]");
  }
  if (step == 0) throw Error(ErrorCode::kInvalidArgument, "RFE step must be >= 1");
  std::vector<size_t> remaining = AllIndices(d.cols());
  std::vector<double> scores(d.cols(), 0.0);
  std::vector<double> importance;
  for (;;) {
    importance = RankerImportance(d.SelectColumns(remaining), ranker, cfg);
    if (remaining.size() <= n_keep) break;
    const size_t drop = std::min(step, remaining.size() - n_keep);
    std::vector<size_t> order = AllIndices(remaining.size());
    // Least important first; among ties the higher index goes first.
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      if (importance[a] != importance[b]) return importance[a] < importance[b];
      return a > b;
    });
    std::vector<bool> dropped(remaining.size(), false);
    for (size_t i = 0; i < drop; ++i) dropped[order[i]] = true;
    std::vector<size_t> next;
    for (size_t i = 0; i < remaining.size(); ++i) {
      if (!dropped[i]) next.push_back(remaining[i]);
    }
    remaining = std::move(next);
  }
  for (size_t i = 0; i < remaining.size(); ++i) scores[remaining[i]] = importance[i];
  SelectionResult r;
  r.selected = remaining;
  r.scores = std::move(scores);
  return r;
}

SelectionResult VotingGroup(std::span<const SelectionResult> members, size_t threshold) {
  if (members.size() != 7) {
    throw Error(ErrorCode::kInvalidArgument,
                "voting needs the seven method results, got " + std::to_string(members.size()));
  }
  size_t width = 0;
  for (const auto& m : members) {
    width = std::max(width, m.scores.size());
    for (size_t i : m.selected) width = std::max(width, i + 1);
  }
  SelectionResult r;
  r.method = SelectionMethod::kVoting;
  r.scores.assign(width, 0.0);
  for (const auto& m : members) {
    for (size_t i : m.selected) r.scores[i] += 1.0;
  }
  for (size_t i = 0; i < width; ++i) {
    if (r.scores[i] >= static_cast<double>(threshold)) r.selected.push_back(i);
  }
  if (r.selected.empty()) {
    throw Error(ErrorCode::kSelection,
                "no feature reached " + std::to_string(threshold) + " votes");
  }
  return r;
}

std::vector<SelectionResult> RunSelection(const Dataset& d, const SelectionConfig& cfg) {
  RequireComplete(d, "feature selection");
  auto sub_cfg = [&](const char* name) {
    SelectionConfig c = cfg;
    c.seed = DeriveSeed(cfg.seed, std::string_view(name));
    return c;
  };
  std::vector<SelectionResult> out;
  auto sfm = [&](SelectionMethod m, Ranker ranker) {
    SelectionResult r;
    r.method = m;
    r.scores = RankerImportance(d, ranker, sub_cfg(SelectionMethodName(m)));
    r.selected = SelectFromModel(r.scores);
    out.push_back(std::move(r));
  };
  sfm(SelectionMethod::kLassoSfm, Ranker::kLasso);
  sfm(SelectionMethod::kDtSfm, Ranker::kDt);
  sfm(SelectionMethod::kRfSfm, Ranker::kRf);
  {
    SelectionResult r;
    r.method = SelectionMethod::kChiSkb;
    r.scores = ChiSquareScores(d, cfg.chi_bins);
    r.selected = SelectKBest(r.scores, std::min(cfg.skb_k, d.cols()));
    out.push_back(std::move(r));
  }
  auto rfe = [&](SelectionMethod m, Ranker ranker, size_t keep) {
    SelectionResult r = Rfe(d, ranker, std::min(keep, d.cols()), cfg.rfe_step,
                            sub_cfg(SelectionMethodName(m)));
    r.method = m;
    out.push_back(std::move(r));
  };
  rfe(SelectionMethod::kDtRfe, Ranker::kDt, cfg.dt_rfe_keep);
  rfe(SelectionMethod::kRfRfe, Ranker::kRf, cfg.rf_rfe_keep);
  rfe(SelectionMethod::kLassoRfe, Ranker::kLasso, cfg.lasso_rfe_keep);
  out.push_back(VotingGroup(out, cfg.vote_threshold));
  SelectionResult all;
  all.method = SelectionMethod::kAll;
  all.selected = AllIndices(d.cols());
  all.scores.assign(d.cols(), 1.0);
  out.push_back(std::move(all));
  return out;
}

}  // namespace tabutune
