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
#include "edpdiag/kernel.h"

#include <algorithm>
#include <cmath>

#include "edpdiag/error.h"

namespace edpdiag {

std::string_view ToString(KernelFamily family) {
  switch (family) {
    case KernelFamily::kGaussian:
      return "gaussian";
    case KernelFamily::kUniform:
      return "uniform";
    case KernelFamily::kCategorical:
      return "categorical";
  }
  return "unknown";
}

std::string_view ToString(Combiner combiner) {
  switch (combiner) {
    case Combiner::kProduct:
      return "product";
    case Combiner::kMinVariant:
      return "min_variant";
    case Combiner::kHarmonicMean:
      return "harmonic_mean";
  }
  return "unknown";
}

KernelFamily ParseKernelFamily(std::string_view name) {
  if (name == "gaussian") return KernelFamily::kGaussian;
  if (name == "uniform") return KernelFamily::kUniform;
  if (name == "categorical") return KernelFamily::kCategorical;
  throw ConfigError("unknown kernel family '" + std::string(name) +
                    "' (expected gaussian, uniform or categorical)");
}

Combiner ParseCombiner(std::string_view name) {
  if (name == "product") return Combiner::kProduct;
  if (name == "min_variant") return Combiner::kMinVariant;
  if (name == "harmonic_mean") return Combiner::kHarmonicMean;
  throw ConfigError("unknown combiner '" + std::string(name) +
                    "' (expected product, min_variant or harmonic_mean)");
}

namespace {

void CheckHalfDistance(double h) {
  if (std::isnan(h) || h < 0.0) {
    throw ConfigError("half-distance must be >= 0 (or inf), got " +
                      std::to_string(h));
  }
}

}  // namespace

DimKernel DimKernel::Gaussian(double half_distance) {
  CheckHalfDistance(half_distance);
  return DimKernel(KernelFamily::kGaussian, half_distance);
}

DimKernel DimKernel::Uniform(double half_distance) {
  CheckHalfDistance(half_distance);
  return DimKernel(KernelFamily::kUniform, half_distance);
}

DimKernel DimKernel::Categorical(double mismatch_value) {
  if (!(mismatch_value >= 0.0 && mismatch_value <= 1.0)) {
    throw ConfigError("categorical mismatch value c must be in [0, 1], got " +
                      std::to_string(mismatch_value));
  }
  return DimKernel(KernelFamily::kCategorical, mismatch_value);
}

DimKernel DimKernel::Scaled(double factor) const {
  if (!continuous()) return *this;
  return DimKernel(family_, param_ * factor);
}

double EvalDim(const DimKernel& kernel, double observed, double intervened) {
  const double h = kernel.half_distance();
  switch (kernel.family()) {
    case KernelFamily::kCategorical:
      return observed == intervened ? 1.0 : kernel.mismatch_value();
    case KernelFamily::kGaussian: {
      if (std::isinf(h)) return 1.0;
      const double delta = observed - intervened;
      if (h == 0.0) return delta == 0.0 ? 1.0 : 0.0;
      const double z = delta / h;
      return std::exp2(-(z * z));
    }
    case KernelFamily::kUniform:
      if (std::isinf(h)) return 1.0;
      return std::fabs(observed - intervened) <= h ? 1.0 : 0.0;
  }
  return 0.0;
}

KernelSpec::KernelSpec(std::vector<DimKernel> dims, Combiner combiner,
                       std::vector<double> minvals)
    : dims_(std::move(dims)), combiner_(combiner), minvals_(std::move(minvals)) {
  if (combiner_ == Combiner::kMinVariant) {
    if (minvals_.size() != dims_.size()) {
      throw ConfigError("min_variant combiner needs one minval per dimension (" +
                        std::to_string(dims_.size()) + "), got " +
                        std::to_string(minvals_.size()));
    }
    for (double m : minvals_) {
      if (!(m >= 0.0 && m <= 1.0)) {
        throw ConfigError("minval must be in [0, 1], got " + std::to_string(m));
      }
    }
  } else if (!minvals_.empty()) {
    throw ConfigError("minvals are only allowed with the min_variant combiner");
  }
}

KernelSpec KernelSpec::Scaled(double factor) const {
  KernelSpec out = *this;
  for (auto& d : out.dims_) d = d.Scaled(factor);
  return out;
}

KernelSpec KernelSpec::Subset(std::span<const std::size_t> dims) const {
  std::vector<DimKernel> kept;
  std::vector<double> minvals;
  for (std::size_t p : dims) {
    kept.push_back(dims_.at(p));
    if (combiner_ == Combiner::kMinVariant) minvals.push_back(minvals_.at(p));
  }
  return KernelSpec(std::move(kept), combiner_, std::move(minvals));
}

double Combine(const KernelSpec& spec, std::span<const double> per_dim) {
  switch (spec.combiner()) {
    case Combiner::kProduct: {
      double w = 1.0;
      for (double v : per_dim) w *= v;
      return w;
    }
    case Combiner::kMinVariant: {
      double w = 1.0;
      for (std::size_t p = 0; p < per_dim.size(); ++p) {
        w *= std::max(per_dim[p], spec.minvals()[p]);
      }
      return w;
    }
    case Combiner::kHarmonicMean: {
      if (per_dim.empty()) return 1.0;
      double inv_sum = 0.0;
      double lo = per_dim[0], hi = per_dim[0];
      for (double v : per_dim) {
        if (v <= 0.0) return 0.0;
        inv_sum += 1.0 / v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      // A mean lies in [min, max]; clamping stops rounding from dipping below
      // the product (which never exceeds the min).
      return std::clamp(static_cast<double>(per_dim.size()) / inv_sum, lo, hi);
    }
  }
  return 0.0;
}

double PairWeight(const KernelSpec& spec, std::span<const double> observed,
                  std::span<const double> intervened) {
  const std::size_t dims = spec.size();
  double stack[16];
  std::vector<double> heap;
  std::span<double> per_dim;
  if (dims <= 16) {
    per_dim = std::span<double>(stack, dims);
  } else {
    heap.resize(dims);
    per_dim = heap;
  }
  for (std::size_t p = 0; p < dims; ++p) {
    per_dim[p] = EvalDim(spec.dims()[p], observed[p], intervened[p]);
  }
  return Combine(spec, per_dim);
}

}  // namespace edpdiag
