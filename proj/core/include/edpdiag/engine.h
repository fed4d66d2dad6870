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
// Effective data points (EDP). For every intervened observation i,
//
//   EDP_i = sum_{j = 1..n} k(o_j^obs - o_i^int)
//
// is the kernel-weighted count of observed rows supporting the intervened
// point. Values lie in [0, n]. The sum over j always runs in index order and
// work is split only over i, so results are bit-identical for any thread
// count.

#ifndef EDPDIAG_ENGINE_H_
#define EDPDIAG_ENGINE_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "edpdiag/dataset.h"
#include "edpdiag/intervention.h"
#include "edpdiag/kernel.h"

namespace edpdiag {

enum class EdpMode { kDataCentric, kQSupport, kGSupport, kWeightProxy };
std::string_view ToString(EdpMode mode);

struct PercentileSummary {
  double min = 0.0;
  double p5 = 0.0;
  double p25 = 0.0;
  double p50 = 0.0;
  double p75 = 0.0;
  double p95 = 0.0;
  double max = 0.0;
};

// Type-7 quantiles at 5/25/50/75/95 % plus the extremes. Throws ComputeError
// on empty input.
PercentileSummary Summarize(std::span<const double> values);

struct EdpReport {
  EdpMode mode = EdpMode::kDataCentric;
  std::vector<double> values;  // one per observation
  PercentileSummary summary;
  std::optional<double> flag_threshold;
  std::vector<std::size_t> flagged;  // indices with value < threshold
  // Per-replicate values for stochastic schemes with more than one draw.
  std::vector<std::vector<double>> replicate_values;
};

struct EngineOptions {
  int threads = 1;
  std::optional<double> flag_threshold;
};

// Kernel sums at arbitrary query points. `columns` selects the dataset
// columns the spec's dimensions refer to, in order; `points` is row-major with
// columns.size() values per point. Returns one sum per point. Identical
// query points are evaluated once.
std::vector<double> KernelSums(const Dataset& observed,
                               std::span<const std::size_t> columns,
                               const KernelSpec& spec,
                               std::span<const double> points,
                               std::size_t num_points, int threads = 1);

// Data-centric EDP. `spec` has one dimension per active column of
// `observed`. Throws ComputeError on a dimension mismatch or when
// `intervened` was not produced from `observed`.
EdpReport ComputeEdp(const Dataset& observed,
                     const IntervenedDataset& intervened,
                     const KernelSpec& spec, const EngineOptions& options = {});

inline constexpr double kDefaultMaxWeight = 1000.0;
inline constexpr double kWeightProxyFloor = 1e-12;
inline constexpr double kSteepKernelFactor = 0.25;

struct EstimatorKernels {
  KernelSpec q;  // (A, L): extrapolation for the outcome regression
  KernelSpec g;  // L only: all active dims (treatment dropped) or adjustment dims
  KernelSpec w;  // (A, L), steep: density at the intervened point
  double max_weight = kDefaultMaxWeight;
};

// Defaults derived from a data-centric spec: q = spec, g = spec without the
// treatment dimension, w = spec with half-distances divided by 4.
EstimatorKernels DefaultEstimatorKernels(const Dataset& observed,
                                         const KernelSpec& spec);

struct EdpTrio {
  EdpReport q_support;
  EdpReport g_support;
  EdpReport weight_proxy;  // min(W_max, n / max(EDP_w, 1e-12))
};

EdpTrio ComputeEdpTrio(const Dataset& observed,
                       const IntervenedDataset& intervened,
                       const EstimatorKernels& kernels,
                       const EngineOptions& options = {});

struct SweepPoint {
  double x = 0.0;
  std::vector<EdpReport> reports;  // one (data-centric) or three (trio)
  std::optional<double> sigma;     // stochastic shift only
};

struct SweepResult {
  SchemeFamily family = SchemeFamily::kStatic;
  std::vector<double> grid;
  std::vector<SweepPoint> points;
};

// Applies `family` at every grid value (strictly increasing) and computes the
// data-centric EDP, or the estimator trio when `estimator` is set. `base`
// carries the family's non-x parameters.
SweepResult Sweep(const Dataset& observed, SchemeFamily family,
                  std::span<const double> grid, const InterventionScheme& base,
                  const KernelSpec& spec,
                  const std::optional<EstimatorKernels>& estimator,
                  const EngineOptions& options = {});

}  // namespace edpdiag

#endif  // EDPDIAG_ENGINE_H_
