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

#include "core/mlp.h"

#include <algorithm>
#include <cmath>

#include "core/common.h"

namespace tabutune {
namespace {

// Vectorised logistic. exp(-z) overflowing to inf still yields exactly 0.
void SigmoidInPlace(Eigen::MatrixXd& z) {
  z = (1.0 + (-z.array()).exp()).inverse().matrix();
}

}  // namespace

Eigen::MatrixXd ToEigen(const Dataset& d) {
  Eigen::MatrixXd x(d.rows(), d.cols());
  for (size_t r = 0; r < d.rows(); ++r) {
    for (size_t c = 0; c < d.cols(); ++c) x(r, c) = d.at(r, c);
  }
  return x;
}

MlpNetwork MlpNetwork::Initialize(size_t inputs, const std::array<int, 3>& hidden,
                                  uint64_t seed) {
  Rng rng(seed);
  std::vector<Layer> layers;
  size_t fan_in = inputs;
  std::array<size_t, 4> widths = {static_cast<size_t>(hidden[0]),
                                  static_cast<size_t>(hidden[1]),
                                  static_cast<size_t>(hidden[2]), 1};
  for (size_t width : widths) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(std::max<size_t>(fan_in, 1)));
    std::uniform_real_distribution<double> dist(-bound, bound);
    Layer l{Eigen::MatrixXd(fan_in, width), Eigen::RowVectorXd(width)};
    for (Eigen::Index j = 0; j < l.weights.cols(); ++j) {
      for (Eigen::Index i = 0; i < l.weights.rows(); ++i) l.weights(i, j) = dist(rng);
    }
    for (Eigen::Index j = 0; j < l.bias.size(); ++j) l.bias(j) = dist(rng);
    layers.push_back(std::move(l));
    fan_in = width;
  }
  return MlpNetwork(std::move(layers));
}

Eigen::VectorXd MlpNetwork::Forward(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd a = x;
  for (const Layer& l : layers_) {
    Eigen::MatrixXd z = a * l.weights;
    z.rowwise() += l.bias;
    SigmoidInPlace(z);
    a = std::move(z);
  }
  return a.col(0);
}

double MlpNetwork::LossAndGradient(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                   double alpha, std::vector<Layer>* gradient) const {
  std::vector<Eigen::MatrixXd> act;
  return Pass(x, y, alpha, gradient, act, true);
}

double MlpNetwork::Pass(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double alpha,
                        std::vector<Layer>* gradient, std::vector<Eigen::MatrixXd>& act,
                        bool want_loss) const {
  const auto n = static_cast<double>(x.rows());
  const size_t depth = layers_.size();
  // act[l] holds the output of layer l; the input is read from x directly.
  act.resize(depth);
  for (size_t l = 0; l < depth; ++l) {
    Eigen::MatrixXd& a = act[l];
    a.noalias() = (l == 0 ? x : act[l - 1]) * layers_[l].weights;
    a.rowwise() += layers_[l].bias;
    SigmoidInPlace(a);
  }
  const auto out = act[depth - 1].col(0);
  double loss = 0.0;
  if (want_loss) {
    double ce = 0.0;
    constexpr double kEps = 1e-15;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      const double pr = std::clamp(out(i), kEps, 1.0 - kEps);
      ce -= y(i) * std::log(pr) + (1.0 - y(i)) * std::log(1.0 - pr);
    }
    double penalty = 0.0;
    for (const Layer& l : layers_) penalty += l.weights.squaredNorm();
    loss = (ce + 0.5 * alpha * penalty) / n;
  }
  if (gradient == nullptr) return loss;

  gradient->resize(depth);
  // Output delta of cross-entropy composed with the sigmoid.
  Eigen::MatrixXd delta = (out - y) / n;
  Eigen::MatrixXd next;
  for (size_t l = depth; l-- > 0;) {
    Layer& g = (*gradient)[l];
    const Eigen::MatrixXd& input = l == 0 ? x : act[l - 1];
    g.weights.noalias() = input.transpose() * delta;
    g.weights += (alpha / n) * layers_[l].weights;
    g.bias = delta.colwise().sum();
    if (l > 0) {
      next.noalias() = delta * layers_[l].weights.transpose();
      delta = (next.array() * input.array() * (1.0 - input.array())).matrix();
    }
  }
  return loss;
}

void MlpNetwork::Train(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                       double learning_rate, double momentum, double alpha, int epochs) {
  std::vector<Layer> velocity(layers_.size());
  for (size_t l = 0; l < layers_.size(); ++l) {
    velocity[l].weights = Eigen::MatrixXd::Zero(layers_[l].weights.rows(),
                                                layers_[l].weights.cols());
    velocity[l].bias = Eigen::RowVectorXd::Zero(layers_[l].bias.size());
  }
  std::vector<Layer> grad;
  std::vector<Eigen::MatrixXd> act;
  for (int e = 0; e < epochs; ++e) {
    Pass(x, y, alpha, &grad, act, false);
    for (size_t l = 0; l < layers_.size(); ++l) {
      velocity[l].weights = momentum * velocity[l].weights - learning_rate * grad[l].weights;
      velocity[l].bias = momentum * velocity[l].bias - learning_rate * grad[l].bias;
      layers_[l].weights += velocity[l].weights;
      layers_[l].bias += velocity[l].bias;
    }
  }
}

std::vector<double> MlpNetwork::Flatten() const {
  std::vector<double> flat;
  for (const Layer& l : layers_) {
    flat.insert(flat.end(), l.weights.data(), l.weights.data() + l.weights.size());
    flat.insert(flat.end(), l.bias.data(), l.bias.data() + l.bias.size());
  }
  return flat;
}

void MlpNetwork::Assign(std::span<const double> flat) {
  size_t k = 0;
  for (Layer& l : layers_) {
    for (Eigen::Index i = 0; i < l.weights.size(); ++i) l.weights.data()[i] = flat[k++];
    for (Eigen::Index i = 0; i < l.bias.size(); ++i) l.bias.data()[i] = flat[k++];
  }
  if (k != flat.size()) throw Error(ErrorCode::kShape, "flat parameter size mismatch");
}

size_t MlpModel::arity() const {
  return net_.layers().empty() ? 0 : static_cast<size_t>(net_.layers()[0].weights.rows());
}

double MlpModel::ScoreRow(std::span<const double> row) const {
  Eigen::MatrixXd x(1, row.size());
  for (size_t c = 0; c < row.size(); ++c) x(0, c) = row[c];
  return net_.Forward(x)(0);
}

std::vector<double> MlpModel::Score(const Dataset& rows) const {
  if (rows.cols() != arity()) {
    throw Error(ErrorCode::kSchema, "model expects " + std::to_string(arity()) +
                                        " features, got " + std::to_string(rows.cols()));
  }
  const Eigen::VectorXd out = net_.Forward(ToEigen(rows));
  return {out.data(), out.data() + out.size()};
}

nlohmann::json MlpModel::ToJson() const {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : net_.layers()) {
    layers.push_back({{"rows", l.weights.rows()},
                      {"cols", l.weights.cols()},
                      {"weights", std::vector<double>(l.weights.data(),
                                                      l.weights.data() + l.weights.size())},
                      {"bias", std::vector<double>(l.bias.data(),
                                                   l.bias.data() + l.bias.size())}});
  }
  return {
      {"learner", "mlp"},
      {"params",
       {{"hidden", params_.hidden},
        {"learning_rate", params_.learning_rate},
        {"momentum", params_.momentum},
        {"alpha", params_.alpha},
        {"epochs", params_.epochs}}},
      {"layers", layers},
  };
}

std::unique_ptr<MlpModel> MlpModel::FromJson(const nlohmann::json& j) {
  MlpParams p;
  const auto& jp = j.at("params");
  p.hidden = jp.at("hidden").get<std::array<int, 3>>();
  p.learning_rate = jp.at("learning_rate").get<double>();
  p.momentum = jp.at("momentum").get<double>();
  p.alpha = jp.at("alpha").get<double>();
  p.epochs = jp.at("epochs").get<int>();
  std::vector<MlpNetwork::Layer> layers;
  for (const auto& jl : j.at("layers")) {
    MlpNetwork::Layer l{Eigen::MatrixXd(jl.at("rows").get<Eigen::Index>(),
                                        jl.at("cols").get<Eigen::Index>()),
                        Eigen::RowVectorXd()};
    const auto w = jl.at("weights").get<std::vector<double>>();
    const auto b = jl.at("bias").get<std::vector<double>>();
    std::copy(w.begin(), w.end(), l.weights.data());
    l.bias = Eigen::Map<const Eigen::RowVectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
    layers.push_back(std::move(l));
  }
  return std::make_unique<MlpModel>(p, MlpNetwork(std::move(layers)));
}

std::unique_ptr<MlpModel> FitMlp(const TrainingData& train, const MlpParams& p,
                                 uint64_t seed) {
  RequireBothClasses(train.labels(), "mlp");
  for (int h : p.hidden) {
    if (h < 1) throw Error(ErrorCode::kFit, "hidden layer sizes must be >= 1");
  }
  if (p.epochs < 0) throw Error(ErrorCode::kFit, "negative epoch count");
  const Dataset& d = train.dataset();
  for (double v : d.values()) {
    if (!(std::abs(v) <= kMlpMaxInput)) {
      throw Error(ErrorCode::kFit, "MLP inputs look unnormalized (|x| > 10 or missing)");
    }
  }
  const Eigen::MatrixXd x = ToEigen(d);
  Eigen::VectorXd y(d.rows());
  for (size_t i = 0; i < d.rows(); ++i) y(i) = d.labels()[i];
  MlpNetwork net = MlpNetwork::Initialize(d.cols(), p.hidden, seed);
  net.Train(x, y, p.learning_rate, p.momentum, p.alpha, p.epochs);
  return std::make_unique<MlpModel>(p, std::move(net));
}

}  // namespace tabutune
