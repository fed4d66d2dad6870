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
#include "edpdiag/simulation.h"

#include <cmath>

#include "edpdiag/error.h"
#include "edpdiag/random.h"

namespace edpdiag {

namespace {

constexpr std::uint32_t kStreamL = 1;
constexpr std::uint32_t kStreamA = 2;
// Dimension study: A uses stream kDimStudyBase, L_p uses kDimStudyBase + p.
constexpr std::uint32_t kDimStudyBase = 100;

}  // namespace

ScenarioSpec ScenarioPreset(std::string_view name, std::uint64_t seed,
                            std::size_t n) {
  ScenarioSpec spec;
  spec.name = std::string(name);
  spec.p_l = 0.3;
  spec.n = n;
  spec.seed = seed;
  if (name == "overlapping") {
    spec.intercept = 0.45;
    spec.slope = 0.21;
    spec.a_sd = 0.14;
  } else if (name == "adjacent") {
    spec.intercept = 0.26;
    spec.slope = 0.55;
    spec.a_sd = 0.08;
  } else if (name == "divided") {
    spec.intercept = 0.18;
    spec.slope = 0.64;
    spec.a_sd = 0.05;
  } else {
    throw ConfigError("unknown scenario preset '" + std::string(name) +
                      "' (expected overlapping, adjacent or divided)");
  }
  return spec;
}

Dataset GenerateScenario(const ScenarioSpec& spec) {
  if (!(spec.a_sd > 0.0) || !std::isfinite(spec.a_sd)) {
    throw ConfigError("scenario standard deviation of A must be > 0");
  }
  if (!(spec.p_l >= 0.0 && spec.p_l <= 1.0)) {
    throw ConfigError("scenario p_L must be in [0, 1]");
  }
  if (spec.n == 0) throw ConfigError("scenario n must be >= 1");

  const CounterRng rng(spec.seed);
  std::vector<double> l(spec.n);
  std::vector<double> a(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    l[i] = rng.Uniform(kStreamL, i) < spec.p_l ? 1.0 : 0.0;
    a[i] = spec.intercept + spec.slope * l[i] +
           spec.a_sd * rng.Normal(kStreamA, i);
  }
  return Dataset(
      {{"L", VariableKind::kBinary, VariableRole::kAdjustment},
       {"A", VariableKind::kContinuous, VariableRole::kTreatment}},
      {std::move(l), std::move(a)});
}

std::vector<std::pair<std::size_t, Dataset>> GenerateDimStudy(
    const DimStudySpec& spec) {
  if (spec.n == 0) throw ConfigError("dimension study n must be >= 1");
  if (spec.max_dims == 0) {
    throw ConfigError("dimension study P_max must be >= 1");
  }
  const CounterRng rng(spec.seed);
  auto draw_column = [&](std::uint32_t stream) {
    std::vector<double> col(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) col[i] = rng.Normal(stream, i);
    return col;
  };

  std::vector<VariableSpec> specs = {
      {"A", VariableKind::kContinuous, VariableRole::kTreatment}};
  std::vector<std::vector<double>> columns = {draw_column(kDimStudyBase)};
  std::vector<std::pair<std::size_t, Dataset>> out;
  for (std::size_t p = 1; p <= spec.max_dims; ++p) {
    specs.push_back({"L" + std::to_string(p), VariableKind::kContinuous,
                     VariableRole::kAdjustment});
    columns.push_back(
        draw_column(kDimStudyBase + static_cast<std::uint32_t>(p)));
    out.emplace_back(p, Dataset(specs, columns));
  }
  return out;
}

}  // namespace edpdiag
