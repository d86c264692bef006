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

#ifndef TABUTUNE_CORE_MLP_H_
#define TABUTUNE_CORE_MLP_H_

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "core/model.h"

namespace tabutune {

struct MlpParams {
  std::array<int, 3> hidden = {8, 8, 8};
  double learning_rate = 0.1;
  double momentum = 0.9;
  double alpha = 1e-4;  // L2 penalty
  int epochs = 200;
};

// Inputs whose magnitude exceeds this are taken as unnormalized.
constexpr double kMlpMaxInput = 10.0;

// Fully connected sigmoid network: input -> h1 -> h2 -> h3 -> 1.
class MlpNetwork {
 public:
  struct Layer {
    Eigen::MatrixXd weights;  // fan_in x fan_out
    Eigen::RowVectorXd bias;
  };

  MlpNetwork() = default;
  explicit MlpNetwork(std::vector<Layer> layers) : layers_(std::move(layers)) {}

  // Weights and biases drawn uniformly from +-1/sqrt(fan_in).
  static MlpNetwork Initialize(size_t inputs, const std::array<int, 3>& hidden,
                               uint64_t seed);

  // Objective (1/n) * [sum_i CE_i + (alpha/2) * ||W||^2] over the batch;
  // biases are not penalized. Fills `gradient` (same shape as layers) when
  // non-null.
  double LossAndGradient(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double alpha,
                         std::vector<Layer>* gradient) const;

  // Full-batch gradient descent with classical momentum.
  void Train(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double learning_rate,
             double momentum, double alpha, int epochs);

  Eigen::VectorXd Forward(const Eigen::MatrixXd& x) const;

  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<Layer>& mutable_layers() { return layers_; }

  // Flat view, layer by layer: weights (column-major) then bias.
  std::vector<double> Flatten() const;
  void Assign(std::span<const double> flat);

 private:
  double Pass(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double alpha,
              std::vector<Layer>* gradient, std::vector<Eigen::MatrixXd>& act,
              bool want_loss) const;

  std::vector<Layer> layers_;
};

class MlpModel : public Model {
 public:
  MlpModel(MlpParams params, MlpNetwork net) : params_(params), net_(std::move(net)) {}

  Algorithm algorithm() const override { return Algorithm::kMlp; }
  size_t arity() const override;
  double ScoreRow(std::span<const double> row) const override;
  std::vector<double> Score(const Dataset& rows) const override;
  nlohmann::json ToJson() const override;
  static std::unique_ptr<MlpModel> FromJson(const nlohmann::json& j);

  const MlpNetwork& network() const { return net_; }

 private:
  MlpParams params_;
  MlpNetwork net_;
};

Eigen::MatrixXd ToEigen(const Dataset& d);

std::unique_ptr<MlpModel> FitMlp(const TrainingData& train, const MlpParams& p,
                                 uint64_t seed);

}  // namespace tabutune

#endif  // TABUTUNE_CORE_MLP_H_
