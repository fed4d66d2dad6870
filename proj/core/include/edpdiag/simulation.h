/*
 * Copyright 2026 The edpdiag Authors.
 *
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
// Seeded data-generating processes.
//
// Sparsity scenarios: L ~ Bernoulli(p_L), A | L ~ Normal(b0 + b1 L, sd^2),
// with three named presets of increasing separation between the L groups.
// Dimensionality study: A ~ N(0, 1) and L_1..L_P ~ N(0, 1) independent,
// nested over P so every column is shared by all larger studies.

#ifndef EDPDIAG_SIMULATION_H_
#define EDPDIAG_SIMULATION_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "edpdiag/dataset.h"

namespace edpdiag {

struct ScenarioSpec {
  std::string name = "custom";
  double intercept = 0.0;  // b0
  double slope = 0.0;      // b1
  double a_sd = 1.0;       // standard deviation of A given L
  double p_l = 0.3;
  std::size_t n = 350;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kScenarioSampleSize = 350;
// Treatment half-distance used with the scenario presets.
inline constexpr double kScenarioTreatmentHalfDistance = 0.15;

// "overlapping": 0.45 + 0.21 L, sd 0.14; "adjacent": 0.26 + 0.55 L, sd 0.08;
// "divided": 0.18 + 0.64 L, sd 0.05. All with p_L = 0.3. Throws ConfigError
// for other names.
ScenarioSpec ScenarioPreset(std::string_view name, std::uint64_t seed,
                            std::size_t n = kScenarioSampleSize);

// Dataset with columns L (binary, adjustment) and A (continuous, treatment).
// Throws ConfigError for an invalid spec (sd <= 0, p_L outside [0, 1], n = 0).
Dataset GenerateScenario(const ScenarioSpec& spec);

struct DimStudySpec {
  std::size_t n = 1000;
  std::size_t max_dims = 10;
  std::uint64_t seed = 0;
};

// One dataset per P = 1..max_dims with columns A, L1..LP (all continuous).
std::vector<std::pair<std::size_t, Dataset>> GenerateDimStudy(
    const DimStudySpec& spec);

}  // namespace edpdiag

#endif  // EDPDIAG_SIMULATION_H_
