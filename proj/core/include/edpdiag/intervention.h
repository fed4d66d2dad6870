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
// Intervention schemes. Applying a scheme to an observed dataset yields the
// intervened treatment values a_int; the adjustment set is never touched.
//
//   natural            a_int = a_obs
//   static(x)          a_int = x
//   naive_shift(x)     a_int = a_obs + x
//   stochastic_shift   a_int = a_obs + x + eps, eps ~ N(0, sigma^2), m draws
//   threshold(x)       a_int = max(x, a_obs)
//   conditional_shift  a_int = a_obs + x if lower_i <= a_obs + x <= upper_i,
//                      else a_obs
//   dynamic(rule)      a_int = rule(l)
//   mtp(rule)          a_int = rule(a_obs, l)

#ifndef EDPDIAG_INTERVENTION_H_
#define EDPDIAG_INTERVENTION_H_

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "edpdiag/dataset.h"
#include "edpdiag/expression.h"

namespace edpdiag {

struct Interval {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  bool Contains(double v) const { return lower <= v && v <= upper; }
  bool operator==(const Interval&) const = default;
};

// The same bounds for every row.
struct GlobalBounds {
  Interval bounds;
};
// Bounds per level of a grouping column; keys are level codes.
struct GroupBounds {
  std::string group;
  std::map<double, Interval> bounds;
};
// Bounds are the observed [min, max] of the treatment within each level of
// `group` (the whole sample when `group` is empty).
struct BoundsFromData {
  std::string group;
};
using ShiftBounds = std::variant<GlobalBounds, GroupBounds, BoundsFromData>;

namespace scheme {

struct Natural {};
struct Static {
  double x = 0.0;
};
struct NaiveShift {
  double x = 0.0;
};
struct StochasticShift {
  double x = 0.0;
  std::optional<double> sigma;  // nullopt: estimate by OLS of A on L
  std::uint64_t seed = 0;
  int replicates = 1;
};
struct Threshold {
  double x = 0.0;
};
struct ConditionalShift {
  double x = 0.0;
  ShiftBounds bounds = BoundsFromData{};
};
struct Dynamic {
  Expression rule;
};
struct Mtp {
  Expression rule;
};

}  // namespace scheme

using InterventionScheme =
    std::variant<scheme::Natural, scheme::Static, scheme::NaiveShift,
                 scheme::StochasticShift, scheme::Threshold,
                 scheme::ConditionalShift, scheme::Dynamic, scheme::Mtp>;

std::string_view SchemeName(const InterventionScheme& scheme);
// The scalar parameter x, for the schemes that have one.
std::optional<double> SchemeParameter(const InterventionScheme& scheme);

// Schemes parameterized by a scalar x; the axis of a response-curve sweep.
enum class SchemeFamily {
  kStatic,
  kNaiveShift,
  kStochasticShift,
  kThreshold,
  kConditionalShift
};

std::string_view ToString(SchemeFamily family);
SchemeFamily ParseSchemeFamily(std::string_view name);

// `base` is a scheme of the family whose non-x parameters are reused; its x
// is replaced. Throws ConfigError if base does not belong to the family.
InterventionScheme MakeScheme(SchemeFamily family, double x,
                              const InterventionScheme& base);

struct IntervenedDataset {
  const Dataset* base = nullptr;
  // One length-n vector of intervened treatment values per replicate.
  std::vector<std::vector<double>> treatment;
  // Standard deviation actually used by a stochastic shift.
  std::optional<double> sigma;

  std::size_t replicates() const { return treatment.size(); }
};

// Throws ConfigError for invalid scheme parameters and ComputeError when a
// rule yields a non-finite value or sigma cannot be estimated. The returned
// object refers to `data`, which must outlive it.
IntervenedDataset Apply(const InterventionScheme& scheme, const Dataset& data);

// Residual variance (n - p denominator) of the ordinary least squares fit of
// the treatment on an intercept plus every adjustment column. Throws
// ComputeError if n < p + 1 or the design is rank deficient.
double EstimateResidualVariance(const Dataset& data);

}  // namespace edpdiag

#endif  // EDPDIAG_INTERVENTION_H_
