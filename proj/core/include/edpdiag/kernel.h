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
// Proximity kernels. Every kernel maps a pair of rows to a weight in [0, 1]
// that equals 1 for identical rows. Continuous kernels are parameterized by
// their half-distance h: the one-dimensional offset at which the weight is
// exactly 0.5 (gaussian) or beyond which it drops to 0 (uniform).

#ifndef EDPDIAG_KERNEL_H_
#define EDPDIAG_KERNEL_H_

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace edpdiag {

enum class KernelFamily { kGaussian, kUniform, kCategorical };
enum class Combiner { kProduct, kMinVariant, kHarmonicMean };

std::string_view ToString(KernelFamily family);
std::string_view ToString(Combiner combiner);
KernelFamily ParseKernelFamily(std::string_view name);
Combiner ParseCombiner(std::string_view name);

inline constexpr double kInfiniteHalfDistance =
    std::numeric_limits<double>::infinity();

class DimKernel {
 public:
  // Throw ConfigError if h < 0 or NaN.
  static DimKernel Gaussian(double half_distance);
  static DimKernel Uniform(double half_distance);
  // Throws ConfigError unless c is in [0, 1].
  static DimKernel Categorical(double mismatch_value);

  KernelFamily family() const { return family_; }
  double half_distance() const { return param_; }
  double mismatch_value() const { return param_; }
  bool continuous() const { return family_ != KernelFamily::kCategorical; }

  // Same family with the half-distance multiplied by `factor`; categorical
  // kernels are returned unchanged.
  DimKernel Scaled(double factor) const;

  bool operator==(const DimKernel&) const = default;

 private:
  DimKernel(KernelFamily family, double param)
      : family_(family), param_(param) {}

  KernelFamily family_;
  double param_;  // half-distance, or c for categorical
};

// Weight for one dimension. `observed` and `intervened` are the two values
// (codes for categorical kernels).
//   gaussian:    2^-((x - y) / h)^2
//   uniform:     1 if |x - y| <= h else 0
//   categorical: 1 if codes are equal else c
// h = +inf gives 1 everywhere; h = 0 gives 1 only on exact equality.
double EvalDim(const DimKernel& kernel, double observed, double intervened);

class KernelSpec {
 public:
  KernelSpec() = default;
  // `minvals` must be empty unless the combiner is min_variant, in which case
  // it needs one floor in [0, 1] per dimension. Throws ConfigError.
  KernelSpec(std::vector<DimKernel> dims, Combiner combiner,
             std::vector<double> minvals = {});

  const std::vector<DimKernel>& dims() const { return dims_; }
  Combiner combiner() const { return combiner_; }
  const std::vector<double>& minvals() const { return minvals_; }
  std::size_t size() const { return dims_.size(); }

  // Every continuous half-distance multiplied by `factor`.
  KernelSpec Scaled(double factor) const;
  // Spec restricted to the listed dimensions (in the given order).
  KernelSpec Subset(std::span<const std::size_t> dims) const;

  bool operator==(const KernelSpec&) const = default;

 private:
  std::vector<DimKernel> dims_;
  Combiner combiner_ = Combiner::kProduct;
  std::vector<double> minvals_;
};

// Combines per-dimension weights into one pair weight.
//   product:       prod_p v_p
//   min_variant:   prod_p max(v_p, minval_p)
//   harmonic_mean: P / sum_p 1 / v_p, and 0 if any v_p is 0
// An empty dimension list combines to 1.
double Combine(const KernelSpec& spec, std::span<const double> per_dim);

// Pair weight between an observed and an intervened row, both given as the
// spec's dimension values in order.
double PairWeight(const KernelSpec& spec, std::span<const double> observed,
                  std::span<const double> intervened);

}  // namespace edpdiag

#endif  // EDPDIAG_KERNEL_H_
