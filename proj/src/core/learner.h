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

#ifndef TABUTUNE_CORE_LEARNER_H_
#define TABUTUNE_CORE_LEARNER_H_

#include <cstdint>
#include <memory>

#include "core/adaboost.h"
#include "core/gbt.h"
#include "core/mlp.h"
#include "core/model.h"
#include "core/param_space.h"

namespace tabutune {

struct LearnerOptions {
  int mlp_epochs = 200;
};

// Tunable parameters per algorithm, in vector order:
//   gbt:  n_estimators, max_depth, learning_rate, gamma, max_delta_step,
//         n_parallel_trees
//   adab: n_estimators, learning_rate, base_max_depth,
//         base_min_samples_split, base_min_samples_leaf
//   mlp:  hidden_1, hidden_2, hidden_3, learning_rate, momentum, alpha
ParamSpace DefaultSpace(Algorithm a);

GbtParams DecodeGbt(const ParamVector& v);
AdabParams DecodeAdab(const ParamVector& v);
MlpParams DecodeMlp(const ParamVector& v, int epochs);

// Whether the algorithm trains on min-max normalized inputs.
bool UsesNormalizedInputs(Algorithm a);

// The learner interface the optimizer tunes: decode, fit, return the model.
std::unique_ptr<Model> FitModel(Algorithm a, const TrainingData& train,
                                const ParamVector& params, uint64_t seed,
                                const LearnerOptions& options = {});

}  // namespace tabutune

#endif  // TABUTUNE_CORE_LEARNER_H_
