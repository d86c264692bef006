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

#ifndef TABUTUNE_CORE_COMMON_H_
#define TABUTUNE_CORE_COMMON_H_

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tabutune {

// Error categories. They map one-to-one onto the status codes of the C API.
enum class ErrorCode {
  kInvalidArgument = 1,
  kParse,
  kLabel,
  kIo,
  kSize,
  kDomain,
  kShape,
  kSchema,
  kImpute,
  kStratification,
  kResample,
  kFit,
  kBudget,
  kEvaluation,
  kSelection,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent child seeds.
inline uint64_t MixSeed(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t DeriveSeed(uint64_t seed, uint64_t stream) {
  return MixSeed(seed ^ MixSeed(stream));
}

// FNV-1a, stable across platforms (std::hash is not).
inline uint64_t HashName(std::string_view name) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline uint64_t DeriveSeed(uint64_t seed, std::string_view name) {
  return DeriveSeed(seed, HashName(name));
}

inline double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace tabutune

#endif  // TABUTUNE_CORE_COMMON_H_
