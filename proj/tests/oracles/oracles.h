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


// Reference implementations used only by the tests. Each one is written the
// slow, obvious way and shares no code with the library.

#ifndef TABUTUNE_TESTS_ORACLES_ORACLES_H_
#define TABUTUNE_TESTS_ORACLES_ORACLES_H_

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

// P(score+ > score-) + 0.5 * P(tie) over every positive/negative pair.
inline double PairCountAuc(const std::vector<int>& labels, const std::vector<double>& scores) {
  double wins = 0.0;
  double pairs = 0.0;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1) continue;
    for (size_t j = 0; j < labels.size(); ++j) {
      if (labels[j] != 0) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) {
        wins += 1.0;
      } else if (scores[i] == scores[j]) {
        wins += 0.5;
      }
    }
  }
  return wins / pairs;
}

struct HandMetrics {
  double accuracy, sensitivity, specificity, precision, f1;
};

inline double Ratio(double a, double b) { return b == 0 ? 0.0 : a / b; }

inline HandMetrics Metrics(double tp, double fp, double tn, double fn) {
  HandMetrics m;
  m.accuracy = (tp + tn) / (tp + tn + fp + fn);
  m.sensitivity = Ratio(tp, tp + fn);
  m.specificity = Ratio(tn, tn + fp);
  m.precision = Ratio(tp, tp + fp);
  m.f1 = Ratio(2 * m.precision * m.sensitivity, m.precision + m.sensitivity);
  return m;
}

// Largest f over the integer box, first hit in row-major order.
inline std::vector<double> ExhaustiveArgmax(const std::function<double(const std::vector<double>&)>& f,
                                            const std::vector<int>& lower,
                                            const std::vector<int>& upper) {
  std::vector<double> best;
  double best_value = -INFINITY;
  std::vector<int> x(lower);
  for (;;) {
    std::vector<double> v(x.begin(), x.end());
    const double value = f(v);
    if (value > best_value) {
      best_value = value;
      best = v;
    }
    bool carry = true;
    for (size_t i = x.size(); carry && i-- > 0;) {
      if (++x[i] <= upper[i]) {
        carry = false;
      } else {
        x[i] = lower[i];
      }
    }
    if (carry) return best;
  }
}

// Unpenalised logistic regression by Newton-Raphson. Returns the slopes
// followed by the intercept.
inline std::vector<double> NewtonLogistic(const std::vector<std::vector<double>>& x,
                                          const std::vector<int>& y, int iterations = 50) {
  const size_t n = x.size();
  const size_t p = x[0].size() + 1;
  std::vector<double> w(p, 0.0);
  auto feature = [&](size_t r, size_t c) { return c + 1 == p ? 1.0 : x[r][c]; };
  for (int it = 0; it < iterations; ++it) {
    std::vector<double> g(p, 0.0);
    std::vector<std::vector<double>> h(p, std::vector<double>(p, 0.0));
    for (size_t r = 0; r < n; ++r) {
      double z = 0.0;
      for (size_t c = 0; c < p; ++c) z += w[c] * feature(r, c);
      const double mu = 1.0 / (1.0 + std::exp(-z));
      for (size_t a = 0; a < p; ++a) {
        g[a] += (mu - y[r]) * feature(r, a);
        for (size_t b = 0; b < p; ++b) h[a][b] += mu * (1 - mu) * feature(r, a) * feature(r, b);
      }
    }
    // Solve h * step = g by Gaussian elimination with partial pivoting.
    std::vector<std::vector<double>> m = h;
    std::vector<double> rhs = g;
    for (size_t col = 0; col < p; ++col) {
      size_t pivot = col;
      for (size_t r = col + 1; r < p; ++r) {
        if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
      }
      std::swap(m[col], m[pivot]);
      std::swap(rhs[col], rhs[pivot]);
      for (size_t r = col + 1; r < p; ++r) {
        const double factor = m[r][col] / m[col][col];
        for (size_t c = col; c < p; ++c) m[r][c] -= factor * m[col][c];
        rhs[r] -= factor * rhs[col];
      }
    }
    std::vector<double> step(p, 0.0);
    for (size_t i = p; i-- > 0;) {
      double s = rhs[i];
      for (size_t c = i + 1; c < p; ++c) s -= m[i][c] * step[c];
      step[i] = s / m[i][i];
    }
    for (size_t c = 0; c < p; ++c) w[c] -= step[c];
  }
  return w;
}

inline double CentralDifference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Pearson statistic of a contingency table, straight from the definition.
inline double ChiSquare(const std::vector<std::vector<double>>& t) {
  double total = 0.0;
  std::vector<double> rows(t.size(), 0.0), cols(t[0].size(), 0.0);
  for (size_t i = 0; i < t.size(); ++i) {
    for (size_t j = 0; j < t[i].size(); ++j) {
      rows[i] += t[i][j];
      cols[j] += t[i][j];
      total += t[i][j];
    }
  }
  double chi = 0.0;
  for (size_t i = 0; i < t.size(); ++i) {
    for (size_t j = 0; j < t[i].size(); ++j) {
      const double mu = rows[i] * cols[j] / total;
      if (mu > 0) chi += (t[i][j] - mu) * (t[i][j] - mu) / mu;
    }
  }
  return chi;
}

inline double Gini(const std::vector<double>& counts) {
  double total = 0.0;
  for (double c : counts) total += c;
  double g = 1.0;
  for (double c : counts) g -= (c / total) * (c / total);
  return g;
}

}  // namespace oracle

#endif  // TABUTUNE_TESTS_ORACLES_ORACLES_H_
