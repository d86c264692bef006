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

#ifndef TABUTUNE_CORE_RESAMPLING_H_
#define TABUTUNE_CORE_RESAMPLING_H_

#include <cstdint>

#include "core/dataset.h"

namespace tabutune {

struct SmoteConfig {
  size_t k_neighbors = 5;
  // Desired minority/majority count ratio after oversampling.
  double target_ratio = 1.0;
  uint64_t seed = 0;
};

// Synthetic minority oversampling. Appends interpolated minority rows after
// the original rows, which are kept verbatim. Numeric coordinates are
// interpolated toward a random one of the k nearest minority neighbours;
// categorical coordinates are copied from the seed row.
Dataset Smote(const Dataset& train, const SmoteConfig& cfg);

}  // namespace tabutune

#endif  // TABUTUNE_CORE_RESAMPLING_H_
