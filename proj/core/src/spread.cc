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
#include "edpdiag/spread.h"

#include <algorithm>
#include <cmath>

#include "edpdiag/error.h"
#include "edpdiag/quantile.h"

namespace edpdiag {

const ColumnSpread& SpreadStats::Get(std::string_view name) const {
  for (const auto& c : columns) {
    if (c.name == name) return c;
  }
  throw DataError("no spread statistics for column '" + std::string(name) +
                  "'");
}

ColumnSpread ComputeColumnSpread(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) {
    throw DataError("spread statistics need at least 2 rows, got " +
                    std::to_string(n));
  }
  ColumnSpread out;

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  out.constant = sorted.front() == sorted.back();

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  out.sd = out.constant ? 0.0 : std::sqrt(ss / static_cast<double>(n - 1));

  const double median = SortedQuantile(sorted, 0.5);
  std::vector<double> deviations(n);
  for (std::size_t i = 0; i < n; ++i) {
    deviations[i] = std::fabs(sorted[i] - median);
  }
  std::sort(deviations.begin(), deviations.end());
  out.mad = SortedQuantile(deviations, 0.5);
  out.iqr = SortedQuantile(sorted, 0.75) - SortedQuantile(sorted, 0.25);

  // sum_{i<j} (x_(j) - x_(i)) = sum_k x_(k) * (2k - n + 1), k zero-based
  double pair_sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    pair_sum += sorted[k] * (2.0 * static_cast<double>(k) -
                             static_cast<double>(n) + 1.0);
  }
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2;
  out.mean_pairwise_distance = std::max(0.0, pair_sum / pairs);
  return out;
}

SpreadStats ComputeSpreadStats(const Dataset& data) {
  SpreadStats stats;
  for (std::size_t c = 0; c < data.cols(); ++c) {
    if (data.spec(c).kind != VariableKind::kContinuous) continue;
    ColumnSpread s = ComputeColumnSpread(data.column(c));
    s.column = c;
    s.name = data.spec(c).name;
    stats.columns.push_back(std::move(s));
  }
  return stats;
}

std::string_view ToString(BandwidthScenario scenario) {
  switch (scenario) {
    case BandwidthScenario::kMedian:
      return "median";
    case BandwidthScenario::kWorst:
      return "worst";
    case BandwidthScenario::kBest:
      return "best";
  }
  return "unknown";
}

std::string_view ToString(SpreadMeasure measure) {
  switch (measure) {
    case SpreadMeasure::kSd:
      return "sd";
    case SpreadMeasure::kMad:
      return "mad";
    case SpreadMeasure::kIqr:
      return "iqr";
    case SpreadMeasure::kMeanPairwise:
      return "pairwise";
  }
  return "unknown";
}

BandwidthScenario ParseBandwidthScenario(std::string_view name) {
  if (name == "median") return BandwidthScenario::kMedian;
  if (name == "worst") return BandwidthScenario::kWorst;
  if (name == "best") return BandwidthScenario::kBest;
  throw ConfigError("unknown rule-of-thumb scenario '" + std::string(name) +
                    "' (expected median, worst or best)");
}

SpreadMeasure ParseSpreadMeasure(std::string_view name) {
  if (name == "sd") return SpreadMeasure::kSd;
  if (name == "mad") return SpreadMeasure::kMad;
  if (name == "iqr") return SpreadMeasure::kIqr;
  if (name == "pairwise") return SpreadMeasure::kMeanPairwise;
  throw ConfigError("unknown spread measure '" + std::string(name) +
                    "' (expected sd, mad, iqr or pairwise)");
}

std::vector<Bandwidth> RuleOfThumbBandwidths(const Dataset& data,
                                             BandwidthScenario scenario,
                                             SpreadMeasure measure) {
  double scale = 1.0;
  if (scenario == BandwidthScenario::kWorst) scale = 0.5;
  if (scenario == BandwidthScenario::kBest) scale = 2.0;

  std::vector<Bandwidth> out;
  for (std::size_t c : data.active_columns()) {
    const auto& spec = data.spec(c);
    Bandwidth bw;
    bw.column = c;
    bw.name = spec.name;
    if (spec.kind != VariableKind::kContinuous) {
      bw.continuous = false;
      bw.value = 0.0;
      out.push_back(std::move(bw));
      continue;
    }
    const ColumnSpread s = ComputeColumnSpread(data.column(c));
    double unit = s.sd;
    switch (measure) {
      case SpreadMeasure::kSd:
        break;
      case SpreadMeasure::kMad:
        unit = s.mad;
        break;
      case SpreadMeasure::kIqr:
        unit = s.iqr;
        break;
      case SpreadMeasure::kMeanPairwise:
        unit = s.mean_pairwise_distance;
        break;
    }
    const double role_factor =
        spec.role == VariableRole::kTreatment ? 0.5 : 1.0;
    bw.value = unit * role_factor * scale;
    bw.warning = s.constant || unit == 0.0;
    out.push_back(std::move(bw));
  }
  return out;
}

}  // namespace edpdiag
