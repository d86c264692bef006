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

#ifndef TABUTUNE_CORE_PARAM_SPACE_H_
#define TABUTUNE_CORE_PARAM_SPACE_H_

#include <string>
#include <vector>

#include "json.hpp"

namespace tabutune {

enum class ParamKind { kInteger, kFloat };

// One tunable hyperparameter. [lower, upper] is the feasible box used by
// repair and diversification; [init_lower, init_upper] is the narrower range
// the first solution is drawn from.
struct ParamSpec {
  std::string name;
  ParamKind kind = ParamKind::kFloat;
  double lower = 0.0;
  double upper = 1.0;
  double init_lower = 0.0;
  double init_upper = 1.0;
};

using ParamSpace = std::vector<ParamSpec>;
// One value per spec, in space order. Integers are stored as integral doubles.
using ParamVector = std::vector<double>;

// Throws kInvalidArgument unless lower <= init_lower <= init_upper <= upper
// and integer specs have integral bounds.
void ValidateSpace(const ParamSpace& space);
bool InBounds(const ParamVector& v, const ParamSpace& space);

nlohmann::json ParamsToJson(const ParamVector& v, const ParamSpace& space);
ParamVector ParamsFromJson(const nlohmann::json& j, const ParamSpace& space);

}  // namespace tabutune

#endif  // TABUTUNE_CORE_PARAM_SPACE_H_
