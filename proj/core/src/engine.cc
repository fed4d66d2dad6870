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
#include "edpdiag/engine.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>
#include <thread>
#include <unordered_map>

#include "edpdiag/error.h"
#include "edpdiag/quantile.h"

namespace edpdiag {

namespace {

enum class DimOp { kSkip, kGaussian, kExact, kUniform, kCategorical };

struct PreparedDim {
  DimOp op = DimOp::kSkip;
  std::span<const double> observed;
  double param = 0.0;   // h for gaussian/uniform, c for categorical
  double minval = 0.0;  // min_variant floor
};

// The kernel spec bound to observed columns, with each dimension reduced to
// the cheapest equivalent operation.
class PreparedKernel {
 public:
  PreparedKernel(const Dataset& observed, std::span<const std::size_t> columns,
                 const KernelSpec& spec)
      : n_(observed.rows()), combiner_(spec.combiner()) {
    if (spec.size() != columns.size()) {
      throw ComputeError("kernel spec has " + std::to_string(spec.size()) +
                         " dimensions but " + std::to_string(columns.size()) +
                         " columns were selected");
    }
    for (std::size_t p = 0; p < columns.size(); ++p) {
      const DimKernel& k = spec.dims()[p];
      PreparedDim d;
      d.observed = observed.column(columns[p]);
      if (combiner_ == Combiner::kMinVariant) d.minval = spec.minvals()[p];
      if (k.family() == KernelFamily::kCategorical) {
        d.op = DimOp::kCategorical;
        d.param = k.mismatch_value();
      } else if (std::isinf(k.half_distance())) {
        d.op = DimOp::kSkip;
      } else if (k.half_distance() == 0.0) {
        d.op = DimOp::kExact;
      } else {
        d.op = k.family() == KernelFamily::kGaussian ? DimOp::kGaussian
                                                      : DimOp::kUniform;
        d.param = k.half_distance();
      }
      // A skipped dimension contributes exactly 1 under every combiner, except
      // that harmonic_mean still counts it in P.
      dims_.push_back(d);
    }
  }

  std::size_t dims() const { return dims_.size(); }

  // Buffers reused across points by one worker.
  struct Scratch {
    std::vector<double> a;
    std::vector<double> b;
    std::vector<double> c;
  };

  double Sum(const double* point, Scratch& s) const {
    switch (combiner_) {
      case Combiner::kProduct:
        return SumProduct(point, s);
      case Combiner::kMinVariant:
        return SumMinVariant(point, s);
      case Combiner::kHarmonicMean:
        return SumHarmonic(point, s);
    }
    return 0.0;
  }

 private:
  double SumProduct(const double* y, Scratch& s) const {
    ProductWeights(y, s);
    double sum = 0.0;
    for (std::size_t j = 0; j < n_; ++j) sum += s.b[j];
    return sum;
  }

  // Leaves the product-combiner pair weights in s.b:
  // mult_j * 2^-(sum of squared scaled gaussian offsets).
  void ProductWeights(const double* y, Scratch& s) const {
    auto& expo = s.a;
    auto& mult = s.b;
    expo.assign(n_, 0.0);
    mult.assign(n_, 1.0);
    bool any_gaussian = false;
    for (std::size_t p = 0; p < dims_.size(); ++p) {
      const PreparedDim& d = dims_[p];
      const double* x = d.observed.data();
      const double yp = y[p];
      switch (d.op) {
        case DimOp::kSkip:
          break;
        case DimOp::kGaussian: {
          any_gaussian = true;
          const double h = d.param;
          for (std::size_t j = 0; j < n_; ++j) {
            const double z = (x[j] - yp) / h;
            expo[j] += z * z;
          }
          break;
        }
        case DimOp::kExact:
          for (std::size_t j = 0; j < n_; ++j) {
            mult[j] = x[j] == yp ? mult[j] : 0.0;
          }
          break;
        case DimOp::kUniform: {
          const double h = d.param;
          for (std::size_t j = 0; j < n_; ++j) {
            mult[j] = std::fabs(x[j] - yp) <= h ? mult[j] : 0.0;
          }
          break;
        }
        case DimOp::kCategorical: {
          const double c = d.param;
          for (std::size_t j = 0; j < n_; ++j) {
            mult[j] = x[j] == yp ? mult[j] : mult[j] * c;
          }
          break;
        }
      }
    }
    if (!any_gaussian) return;
    for (std::size_t j = 0; j < n_; ++j) {
      if (mult[j] != 0.0) mult[j] *= std::exp2(-expo[j]);
    }
  }

  static double DimValue(const PreparedDim& d, double x, double y) {
    switch (d.op) {
      case DimOp::kSkip:
        return 1.0;
      case DimOp::kGaussian: {
        const double z = (x - y) / d.param;
        return std::exp2(-(z * z));
      }
      case DimOp::kExact:
        return x == y ? 1.0 : 0.0;
      case DimOp::kUniform:
        return std::fabs(x - y) <= d.param ? 1.0 : 0.0;
      case DimOp::kCategorical:
        return x == y ? 1.0 : d.param;
    }
    return 0.0;
  }

  // min_variant and harmonic_mean never fall below the product weight. The
  // product path folds gaussian dimensions into one exp2, so its rounding can
  // differ from a per-dimension product; the max keeps the ordering exact.
  double SumMinVariant(const double* y, Scratch& s) const {
    ProductWeights(y, s);
    auto& prod = s.c;
    prod.assign(n_, 1.0);
    for (std::size_t p = 0; p < dims_.size(); ++p) {
      const PreparedDim& d = dims_[p];
      if (d.op == DimOp::kSkip) continue;
      const double* x = d.observed.data();
      for (std::size_t j = 0; j < n_; ++j) {
        prod[j] *= std::max(DimValue(d, x[j], y[p]), d.minval);
      }
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < n_; ++j) sum += std::max(prod[j], s.b[j]);
    return sum;
  }

  double SumHarmonic(const double* y, Scratch& s) const {
    if (dims_.empty()) return static_cast<double>(n_);
    ProductWeights(y, s);
    auto& inv = s.c;
    inv.assign(n_, 0.0);
    for (std::size_t p = 0; p < dims_.size(); ++p) {
      const PreparedDim& d = dims_[p];
      const double* x = d.observed.data();
      for (std::size_t j = 0; j < n_; ++j) {
        const double v = DimValue(d, x[j], y[p]);
        // 1/0 = inf marks the pair as unsupported.
        inv[j] += 1.0 / v;
      }
    }
    const double dims = static_cast<double>(dims_.size());
    double sum = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      if (std::isfinite(inv[j])) sum += std::max(std::min(1.0, dims / inv[j]), s.b[j]);
    }
    return sum;
  }

  std::size_t n_;
  Combiner combiner_;
  std::vector<PreparedDim> dims_;
};

std::string PointKey(const double* point, std::size_t dims) {
  std::string key(dims * sizeof(double), '\0');
  for (std::size_t p = 0; p < dims; ++p) {
    // +0.0 and -0.0 give identical kernel values; fold them together.
    const double v = point[p] == 0.0 ? 0.0 : point[p];
    std::memcpy(key.data() + p * sizeof(double), &v, sizeof(double));
  }
  return key;
}

void ApplyFlags(EdpReport& report, const std::optional<double>& threshold) {
  report.flag_threshold = threshold;
  report.flagged.clear();
  if (!threshold) return;
  for (std::size_t i = 0; i < report.values.size(); ++i) {
    if (report.values[i] < *threshold) report.flagged.push_back(i);
  }
}

// Intervened query points over the active columns, replicate-major.
std::vector<double> IntervenedPoints(const Dataset& observed,
                                     const IntervenedDataset& intervened) {
  const auto& active = observed.active_columns();
  const std::size_t n = observed.rows();
  const std::size_t dims = active.size();
  std::vector<double> points(intervened.replicates() * n * dims);
  for (std::size_t r = 0; r < intervened.replicates(); ++r) {
    const auto& a_int = intervened.treatment[r];
    for (std::size_t i = 0; i < n; ++i) {
      double* out = &points[(r * n + i) * dims];
      for (std::size_t p = 0; p < dims; ++p) {
        const std::size_t c = active[p];
        out[p] = c == observed.treatment_index() ? a_int[i] : observed.at(i, c);
      }
    }
  }
  return points;
}

void CheckIntervened(const Dataset& observed,
                     const IntervenedDataset& intervened) {
  if (intervened.base != &observed) {
    throw ComputeError(
        "intervened dataset was not produced from this observed dataset");
  }
  if (intervened.treatment.empty()) {
    throw ComputeError("intervened dataset has no treatment replicates");
  }
  for (const auto& a : intervened.treatment) {
    if (a.size() != observed.rows()) {
      throw ComputeError("intervened treatment has " +
                         std::to_string(a.size()) + " rows, expected " +
                         std::to_string(observed.rows()));
    }
  }
}

// Splits the replicate-major sums into per-observation means.
EdpReport AssembleReport(EdpMode mode, std::vector<double> sums, std::size_t n,
                         std::size_t replicates) {
  EdpReport report;
  report.mode = mode;
  if (replicates == 1) {
    report.values = std::move(sums);
    return report;
  }
  report.values.assign(n, 0.0);
  for (std::size_t r = 0; r < replicates; ++r) {
    std::vector<double> rep(sums.begin() + static_cast<std::ptrdiff_t>(r * n),
                            sums.begin() + static_cast<std::ptrdiff_t>((r + 1) * n));
    for (std::size_t i = 0; i < n; ++i) report.values[i] += rep[i];
    report.replicate_values.push_back(std::move(rep));
  }
  for (double& v : report.values) v /= static_cast<double>(replicates);
  return report;
}

std::vector<double> IntervenedSums(const Dataset& observed,
                                   const IntervenedDataset& intervened,
                                   const KernelSpec& spec, int threads) {
  const auto& active = observed.active_columns();
  if (spec.size() != active.size()) {
    throw ComputeError("kernel spec has " + std::to_string(spec.size()) +
                       " dimensions but the dataset has " +
                       std::to_string(active.size()) +
                       " treatment/adjustment columns");
  }
  const auto points = IntervenedPoints(observed, intervened);
  return KernelSums(observed, active, spec, points,
                    intervened.replicates() * observed.rows(), threads);
}

}  // namespace

std::string_view ToString(EdpMode mode) {
  switch (mode) {
    case EdpMode::kDataCentric:
      return "data_centric";
    case EdpMode::kQSupport:
      return "q_support";
    case EdpMode::kGSupport:
      return "g_support";
    case EdpMode::kWeightProxy:
      return "weight_proxy";
  }
  return "unknown";
}

PercentileSummary Summarize(std::span<const double> values) {
  if (values.empty()) throw ComputeError("cannot summarize an empty vector");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  PercentileSummary s;
  s.min = sorted.front();
  s.p5 = SortedQuantile(sorted, 0.05);
  s.p25 = SortedQuantile(sorted, 0.25);
  s.p50 = SortedQuantile(sorted, 0.50);
  s.p75 = SortedQuantile(sorted, 0.75);
  s.p95 = SortedQuantile(sorted, 0.95);
  s.max = sorted.back();
  return s;
}

std::vector<double> KernelSums(const Dataset& observed,
                               std::span<const std::size_t> columns,
                               const KernelSpec& spec,
                               std::span<const double> points,
                               std::size_t num_points, int threads) {
  const PreparedKernel kernel(observed, columns, spec);
  const std::size_t dims = kernel.dims();
  if (points.size() != num_points * dims) {
    throw ComputeError("query points have " + std::to_string(points.size()) +
                       " values, expected " +
                       std::to_string(num_points * dims));
  }

  // Unique query points; the intervened data often repeats them (a static
  // scheme with discrete covariates has few distinct rows).
  std::vector<std::size_t> slot(num_points);
  std::vector<std::size_t> unique;
  {
    std::unordered_map<std::string, std::size_t> seen;
    seen.reserve(num_points);
    for (std::size_t i = 0; i < num_points; ++i) {
      auto [it, inserted] =
          seen.try_emplace(PointKey(points.data() + i * dims, dims),
                           unique.size());
      if (inserted) unique.push_back(i);
      slot[i] = it->second;
    }
  }

  std::vector<double> unique_sums(unique.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    PreparedKernel::Scratch scratch;
    for (std::size_t u = begin; u < end; ++u) {
      unique_sums[u] = kernel.Sum(points.data() + unique[u] * dims, scratch);
    }
  };

  const std::size_t workers = std::min<std::size_t>(
      static_cast<std::size_t>(std::max(threads, 1)), unique.size());
  if (workers <= 1) {
    work(0, unique.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (unique.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(unique.size(), begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(work, begin, end);
    }
  }

  std::vector<double> sums(num_points);
  for (std::size_t i = 0; i < num_points; ++i) sums[i] = unique_sums[slot[i]];
  return sums;
}

EdpReport ComputeEdp(const Dataset& observed,
                     const IntervenedDataset& intervened,
                     const KernelSpec& spec, const EngineOptions& options) {
  CheckIntervened(observed, intervened);
  auto sums = IntervenedSums(observed, intervened, spec, options.threads);
  EdpReport report = AssembleReport(EdpMode::kDataCentric, std::move(sums),
                                    observed.rows(), intervened.replicates());
  report.summary = Summarize(report.values);
  ApplyFlags(report, options.flag_threshold);
  return report;
}

EstimatorKernels DefaultEstimatorKernels(const Dataset& observed,
                                         const KernelSpec& spec) {
  const auto& active = observed.active_columns();
  if (spec.size() != active.size()) {
    throw ComputeError("kernel spec has " + std::to_string(spec.size()) +
                       " dimensions but the dataset has " +
                       std::to_string(active.size()) +
                       " treatment/adjustment columns");
  }
  std::vector<std::size_t> adjustment_dims;
  for (std::size_t p = 0; p < active.size(); ++p) {
    if (active[p] != observed.treatment_index()) adjustment_dims.push_back(p);
  }
  EstimatorKernels k;
  k.q = spec;
  k.g = spec.Subset(adjustment_dims);
  k.w = spec.Scaled(kSteepKernelFactor);
  return k;
}

EdpTrio ComputeEdpTrio(const Dataset& observed,
                       const IntervenedDataset& intervened,
                       const EstimatorKernels& kernels,
                       const EngineOptions& options) {
  CheckIntervened(observed, intervened);
  if (!(kernels.max_weight > 0.0)) {
    throw ConfigError("maximum weight W_max must be positive");
  }
  const std::size_t n = observed.rows();
  const std::size_t replicates = intervened.replicates();
  EdpTrio trio;

  trio.q_support =
      AssembleReport(EdpMode::kQSupport,
                     IntervenedSums(observed, intervened, kernels.q,
                                    options.threads),
                     n, replicates);

  // g support: adjustment columns only, at l_i, which no scheme changes.
  const auto& active = observed.active_columns();
  const auto& adjustment = observed.adjustment_columns();
  KernelSpec g_spec = kernels.g;
  if (g_spec.size() == active.size() && active.size() != adjustment.size()) {
    std::vector<std::size_t> keep;
    for (std::size_t p = 0; p < active.size(); ++p) {
      if (active[p] != observed.treatment_index()) keep.push_back(p);
    }
    g_spec = g_spec.Subset(keep);
  } else if (g_spec.size() != adjustment.size()) {
    throw ComputeError("g kernel has " + std::to_string(g_spec.size()) +
                       " dimensions; expected " +
                       std::to_string(adjustment.size()) +
                       " (adjustment set) or " + std::to_string(active.size()) +
                       " (all active columns)");
  }
  std::vector<double> l_points(n * adjustment.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < adjustment.size(); ++p) {
      l_points[i * adjustment.size() + p] = observed.at(i, adjustment[p]);
    }
  }
  trio.g_support.mode = EdpMode::kGSupport;
  trio.g_support.values = KernelSums(observed, adjustment, g_spec, l_points, n,
                                     options.threads);

  // Ideal-weight proxy from a steep kernel, per replicate, then averaged.
  auto w_sums = IntervenedSums(observed, intervened, kernels.w, options.threads);
  for (double& v : w_sums) {
    v = std::min(kernels.max_weight,
                 static_cast<double>(n) / std::max(v, kWeightProxyFloor));
  }
  trio.weight_proxy =
      AssembleReport(EdpMode::kWeightProxy, std::move(w_sums), n, replicates);

  for (EdpReport* r : {&trio.q_support, &trio.g_support, &trio.weight_proxy}) {
    r->summary = Summarize(r->values);
  }
  ApplyFlags(trio.q_support, options.flag_threshold);
  ApplyFlags(trio.g_support, options.flag_threshold);
  // Low counts are the concern for supports; the weight proxy is not flagged.
  ApplyFlags(trio.weight_proxy, std::nullopt);
  return trio;
}

SweepResult Sweep(const Dataset& observed, SchemeFamily family,
                  std::span<const double> grid, const InterventionScheme& base,
                  const KernelSpec& spec,
                  const std::optional<EstimatorKernels>& estimator,
                  const EngineOptions& options) {
  if (grid.empty()) throw ConfigError("sweep grid is empty");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!std::isfinite(grid[k])) {
      throw ConfigError("sweep grid value " + std::to_string(k) +
                        " is not finite");
    }
    if (k > 0 && !(grid[k] > grid[k - 1])) {
      throw ConfigError("sweep grid must be strictly increasing");
    }
  }
  SweepResult result;
  result.family = family;
  result.grid.assign(grid.begin(), grid.end());
  for (double x : grid) {
    const auto scheme = MakeScheme(family, x, base);
    const auto intervened = Apply(scheme, observed);
    SweepPoint point;
    point.x = x;
    point.sigma = intervened.sigma;
    if (estimator) {
      auto trio = ComputeEdpTrio(observed, intervened, *estimator, options);
      point.reports.push_back(std::move(trio.q_support));
      point.reports.push_back(std::move(trio.g_support));
      point.reports.push_back(std::move(trio.weight_proxy));
    } else {
      point.reports.push_back(ComputeEdp(observed, intervened, spec, options));
    }
    result.points.push_back(std::move(point));
  }
  return result;
}

}  // namespace edpdiag
