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
// Run configuration: a JSON document whose keys mirror the engine's types.
// Parsing is strict; every error message starts with the offending field
// path, e.g. "kernel.dims[1].half_distance: must be >= 0".

#ifndef EDPDIAG_TOOLS_CONFIG_H_
#define EDPDIAG_TOOLS_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "edpdiag/dataset.h"
#include "edpdiag/engine.h"
#include "edpdiag/intervention.h"
#include "edpdiag/kernel.h"
#include "edpdiag/spread.h"
#include "json_writer.h"

namespace edpdiag::cli {

struct DataConfig {
  std::filesystem::path path;
  std::vector<VariableSpec> schema;
};

struct DimConfig {
  std::string column;
  KernelFamily family = KernelFamily::kGaussian;
  double param = 0.0;  // half-distance (may be inf) or c
};

struct KernelConfig {
  std::optional<BandwidthScenario> rule_of_thumb;
  SpreadMeasure spread = SpreadMeasure::kSd;
  KernelFamily family = KernelFamily::kGaussian;  // for rule-of-thumb dims
  Combiner combiner = Combiner::kProduct;
  std::vector<DimConfig> dims;  // explicit overrides
  std::map<std::string, double> minvals;
  bool has_minvals = false;
};

struct SweepConfig {
  SchemeFamily family = SchemeFamily::kStatic;
  std::vector<double> grid;
  InterventionScheme base;  // non-x parameters of the family
};

enum class RunMode { kDataCentric, kEstimatorFocused };

struct EstimatorConfig {
  std::optional<KernelConfig> g_kernel;
  std::optional<KernelConfig> w_kernel;
  double w_max = kDefaultMaxWeight;
};

enum class OutputFormat { kJson, kCsv };

struct OutputConfig {
  OutputFormat format = OutputFormat::kJson;
  std::optional<std::filesystem::path> path;
  bool timing = true;
};

struct SimulateConfig {
  std::string preset;  // overlapping | adjacent | divided | custom | dimstudy
  std::optional<std::size_t> n;
  std::optional<std::uint64_t> seed;
  double intercept = 0.0;
  double slope = 0.0;
  std::optional<double> a_sd;
  double p_l = 0.3;
  std::size_t max_dims = 10;
};

struct RunConfig {
  std::optional<DataConfig> data;
  std::optional<KernelConfig> kernel;
  std::optional<InterventionScheme> scheme;
  std::optional<SweepConfig> sweep;
  RunMode mode = RunMode::kDataCentric;
  EstimatorConfig estimator;
  OutputConfig output;
  std::optional<double> flags_threshold;
  std::uint64_t seed = 1;
  std::map<std::string, Json> probe;  // kernel-info query point
  std::optional<SimulateConfig> simulate;
};

// `base_dir` resolves relative data paths. Throws ConfigError.
RunConfig ParseRunConfig(const Json& doc, const std::filesystem::path& base_dir);
RunConfig LoadRunConfig(const std::filesystem::path& path);

struct ResolvedKernel {
  KernelSpec spec;
  std::vector<DimConfig> dims;  // one per active column, in order
  std::vector<double> minvals;  // aligned with dims (min_variant only)
};

// Builds a kernel spec over the active columns of `data` (minus the treatment
// unless `include_treatment`): explicit dims win, remaining columns take
// rule-of-thumb values. Throws ConfigError naming `path` on any inconsistency.
ResolvedKernel ResolveKernel(const KernelConfig& config, const Dataset& data,
                             const std::string& path,
                             bool include_treatment = true);

// Config documents, used for the envelope's echo of the resolved run.
Json KernelToJson(const KernelConfig& config, const ResolvedKernel* resolved);
Json SchemeToJson(const InterventionScheme& scheme);
Json RunConfigToJson(const RunConfig& config);

std::string_view ToString(RunMode mode);
std::string_view ToString(OutputFormat format);

}  // namespace edpdiag::cli

#endif  // EDPDIAG_TOOLS_CONFIG_H_
