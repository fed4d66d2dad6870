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
// Glue between library types and the oracle, plus random instance builders.

#ifndef EDPDIAG_TESTS_TEST_UTIL_H_
#define EDPDIAG_TESTS_TEST_UTIL_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "edpdiag/dataset.h"
#include "edpdiag/intervention.h"
#include "edpdiag/kernel.h"
#include "oracle.h"

namespace testutil {

inline oracle::Spec ToOracle(const edpdiag::KernelSpec& spec) {
  oracle::Spec out;
  for (const auto& d : spec.dims()) {
    switch (d.family()) {
      case edpdiag::KernelFamily::kGaussian:
        out.dims.push_back({oracle::Family::kGaussian, d.half_distance()});
        break;
      case edpdiag::KernelFamily::kUniform:
        out.dims.push_back({oracle::Family::kUniform, d.half_distance()});
        break;
      case edpdiag::KernelFamily::kCategorical:
        out.dims.push_back({oracle::Family::kCategorical, d.mismatch_value()});
        break;
    }
  }
  switch (spec.combiner()) {
    case edpdiag::Combiner::kProduct:
      out.combine = oracle::Combine::kProduct;
      break;
    case edpdiag::Combiner::kMinVariant:
      out.combine = oracle::Combine::kMinVariant;
      break;
    case edpdiag::Combiner::kHarmonicMean:
      out.combine = oracle::Combine::kHarmonic;
      break;
  }
  out.minvals = spec.minvals();
  return out;
}

// Active columns of `data`, row-major.
inline oracle::Rows ObservedRows(const edpdiag::Dataset& data) {
  oracle::Rows rows(data.rows());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t c : data.active_columns()) rows[i].push_back(data.at(i, c));
  }
  return rows;
}

// Observed rows with the treatment replaced by `treatment`.
inline oracle::Rows IntervenedRows(const edpdiag::Dataset& data,
                                   const std::vector<double>& treatment) {
  oracle::Rows rows(data.rows());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t c : data.active_columns()) {
      rows[i].push_back(c == data.treatment_index() ? treatment[i] : data.at(i, c));
    }
  }
  return rows;
}

// Mean over replicates of the oracle EDP.
inline std::vector<double> OracleEdp(const edpdiag::Dataset& data,
                                     const edpdiag::IntervenedDataset& intervened,
                                     const edpdiag::KernelSpec& spec) {
  const auto obs = ObservedRows(data);
  const auto ospec = ToOracle(spec);
  std::vector<double> mean(data.rows(), 0.0);
  for (const auto& t : intervened.treatment) {
    const auto v = oracle::Edp(ospec, obs, IntervenedRows(data, t));
    for (std::size_t i = 0; i < v.size(); ++i) mean[i] += v[i];
  }
  for (double& m : mean) m /= static_cast<double>(intervened.replicates());
  return mean;
}

struct RandomInstance {
  edpdiag::Dataset data;
  edpdiag::KernelSpec spec;
};

// Random dataset with a continuous treatment plus `p - 1` mixed adjustment
// columns, and a random kernel spec over them. Values are rounded to a coarse
// grid so that exact ties occur.
inline RandomInstance MakeRandomInstance(std::mt19937_64& rng, std::size_t n,
                                         std::size_t p) {
  using edpdiag::VariableKind;
  using edpdiag::VariableRole;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<edpdiag::VariableSpec> specs;
  std::vector<std::vector<double>> cols;
  std::vector<edpdiag::DimKernel> dims;
  auto rounded = [&](double scale) {
    return std::round(unit(rng) * scale * 20.0) / 20.0;
  };
  specs.push_back({"A", VariableKind::kContinuous, VariableRole::kTreatment});
  cols.emplace_back();
  for (std::size_t i = 0; i < n; ++i) cols.back().push_back(rounded(2.0));
  for (std::size_t k = 1; k < p; ++k) {
    const int kind = static_cast<int>(unit(rng) * 3.0);
    std::vector<double> col;
    VariableKind vk = VariableKind::kContinuous;
    if (kind == 0) {
      for (std::size_t i = 0; i < n; ++i) col.push_back(rounded(3.0) - 1.0);
    } else if (kind == 1) {
      vk = VariableKind::kBinary;
      for (std::size_t i = 0; i < n; ++i) col.push_back(unit(rng) < 0.4 ? 1.0 : 0.0);
    } else {
      vk = VariableKind::kCategorical;
      for (std::size_t i = 0; i < n; ++i) col.push_back(std::floor(unit(rng) * 3.0));
    }
    specs.push_back({"L" + std::to_string(k), vk, VariableRole::kAdjustment});
    cols.push_back(std::move(col));
  }
  if (unit(rng) < 0.3) {
    specs.push_back({"Z", VariableKind::kContinuous, VariableRole::kIgnored});
    cols.emplace_back(n, 0.25);
  }
  edpdiag::Dataset data(specs, cols);
  for (std::size_t c : data.active_columns()) {
    const double r = unit(rng);
    if (data.spec(c).kind != VariableKind::kContinuous) {
      dims.push_back(edpdiag::DimKernel::Categorical(r < 0.5 ? 0.0 : unit(rng)));
    } else if (r < 0.15) {
      dims.push_back(edpdiag::DimKernel::Uniform(0.05 + unit(rng)));
    } else if (r < 0.2) {
      dims.push_back(edpdiag::DimKernel::Gaussian(0.0));
    } else {
      dims.push_back(edpdiag::DimKernel::Gaussian(0.05 + unit(rng)));
    }
  }
  const double c = unit(rng);
  edpdiag::Combiner combiner = c < 0.6 ? edpdiag::Combiner::kProduct
                               : c < 0.8 ? edpdiag::Combiner::kMinVariant
                                         : edpdiag::Combiner::kHarmonicMean;
  std::vector<double> minvals;
  if (combiner == edpdiag::Combiner::kMinVariant) {
    for (std::size_t k = 0; k < dims.size(); ++k) minvals.push_back(0.3 * unit(rng));
  }
  return {std::move(data), edpdiag::KernelSpec(std::move(dims), combiner, minvals)};
}

// One scheme of every kind, parameterized by the draw.
inline edpdiag::InterventionScheme MakeRandomScheme(std::mt19937_64& rng,
                                                    int which,
                                                    const edpdiag::Dataset& data) {
  namespace sc = edpdiag::scheme;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double x = std::round((unit(rng) * 2.0 - 0.5) * 20.0) / 20.0;
  std::string group;
  for (std::size_t c : data.adjustment_columns()) {
    if (data.spec(c).kind != edpdiag::VariableKind::kContinuous) {
      group = data.spec(c).name;
    }
  }
  switch (which % 8) {
    case 0:
      return sc::Natural{};
    case 1:
      return sc::Static{x};
    case 2:
      return sc::NaiveShift{x - 0.5};
    case 3: {
      sc::StochasticShift s;
      s.x = x - 0.5;
      s.sigma = 0.1 * unit(rng);
      s.seed = rng();
      s.replicates = 1 + static_cast<int>(unit(rng) * 3.0);
      return s;
    }
    case 4:
      return sc::Threshold{x};
    case 5: {
      sc::ConditionalShift s;
      s.x = x - 0.5;
      s.bounds = edpdiag::BoundsFromData{group};
      return s;
    }
    case 6:
      return sc::Dynamic{edpdiag::Expression::Parse("0.5 + 0.25 * L1")};
    default:
      return sc::Mtp{edpdiag::Expression::Parse("a_obs > 1 ? a_obs - 0.2 : a_obs + 0.1")};
  }
}

}  // namespace testutil

#endif  // EDPDIAG_TESTS_TEST_UTIL_H_
