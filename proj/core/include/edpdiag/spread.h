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
// Spread statistics of continuous columns and the rule-of-thumb half-distances
// derived from them.

#ifndef EDPDIAG_SPREAD_H_
#define EDPDIAG_SPREAD_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edpdiag/dataset.h"

namespace edpdiag {

struct ColumnSpread {
  std::size_t column = 0;
  std::string name;
  double sd = 0.0;   // sample standard deviation, n - 1 denominator
  double mad = 0.0;  // median absolute deviation, unscaled
  double iqr = 0.0;  // q75 - q25, type-7 quantiles
  double mean_pairwise_distance = 0.0;  // mean |x_i - x_j| over i < j
  bool constant = false;                // every value identical
};

struct SpreadStats {
  std::vector<ColumnSpread> columns;  // continuous columns, schema order

  // Throws DataError if `name` is not a continuous column of the stats.
  const ColumnSpread& Get(std::string_view name) const;
};

ColumnSpread ComputeColumnSpread(std::span<const double> values);

// Statistics for every continuous column (ignored columns included). Throws
// DataError when the dataset has continuous columns but fewer than 2 rows.
SpreadStats ComputeSpreadStats(const Dataset& data);

enum class BandwidthScenario { kMedian, kWorst, kBest };
enum class SpreadMeasure { kSd, kMad, kIqr, kMeanPairwise };

std::string_view ToString(BandwidthScenario scenario);
std::string_view ToString(SpreadMeasure measure);
BandwidthScenario ParseBandwidthScenario(std::string_view name);
SpreadMeasure ParseSpreadMeasure(std::string_view name);

struct Bandwidth {
  std::size_t column = 0;
  std::string name;
  bool continuous = true;
  // Half-distance for continuous columns; categorical mismatch value c for
  // binary and categorical ones.
  double value = 0.0;
  bool warning = false;  // constant column: h = 0, exact-match semantics
};

// Rule-of-thumb kernel parameters for every active column: one spread unit
// for adjustment variables, half a unit for the treatment, then halved
// (worst) or doubled (best). Binary and categorical columns get c = 0.
std::vector<Bandwidth> RuleOfThumbBandwidths(
    const Dataset& data, BandwidthScenario scenario,
    SpreadMeasure measure = SpreadMeasure::kSd);

}  // namespace edpdiag

#endif  // EDPDIAG_SPREAD_H_
