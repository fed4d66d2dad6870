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
// Kernel-summation throughput. Pairs per second is the figure to watch;
// the naive loop is the reference the engine has to beat.

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "edpdiag/engine.h"
#include "edpdiag/intervention.h"
#include "edpdiag/simulation.h"
#include "oracle.h"

namespace {

using namespace edpdiag;

// Treatment plus P-1 continuous covariates from the dimensionality study.
Dataset Study(std::size_t n, std::size_t p) {
  auto studies = GenerateDimStudy({.n = n, .max_dims = p, .seed = 5});
  return studies.back().second;
}

KernelSpec Spec(const Dataset& d, Combiner combiner) {
  const std::size_t dims = d.active_columns().size();
  std::vector<double> minvals;
  if (combiner == Combiner::kMinVariant) minvals.assign(dims, 0.1);
  return KernelSpec(std::vector<DimKernel>(dims, DimKernel::Gaussian(1.0)), combiner,
                    minvals);
}

void SetPairs(benchmark::State& state, std::size_t n, std::size_t replicates = 1) {
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * replicates));
}

template <Combiner C>
void BM_Engine(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = static_cast<std::size_t>(state.range(1));
  const Dataset d = Study(n, p);
  const auto iv = Apply(scheme::NaiveShift{0.1}, d);
  const KernelSpec spec = Spec(d, C);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ComputeEdp(d, iv, spec, {.threads = 1}).values.data());
  }
  SetPairs(state, n);
}
BENCHMARK_TEMPLATE(BM_Engine, Combiner::kProduct)
    ->ArgsProduct({{500, 2000, 8000}, {1, 4, 10}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK_TEMPLATE(BM_Engine, Combiner::kMinVariant)
    ->ArgsProduct({{2000}, {1, 4, 10}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK_TEMPLATE(BM_Engine, Combiner::kHarmonicMean)
    ->ArgsProduct({{2000}, {1, 4, 10}})
    ->Unit(benchmark::kMillisecond);

void BM_NaiveOracle(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = static_cast<std::size_t>(state.range(1));
  const Dataset d = Study(n, p);
  const auto iv = Apply(scheme::NaiveShift{0.1}, d);
  oracle::Spec spec;
  spec.combine = oracle::Combine::kProduct;
  spec.dims.assign(d.active_columns().size(), {oracle::Family::kGaussian, 1.0});
  oracle::Rows obs(n), query(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c : d.active_columns()) {
      obs[i].push_back(d.at(i, c));
      query[i].push_back(c == d.treatment_index() ? iv.treatment[0][i] : d.at(i, c));
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(oracle::Edp(spec, obs, query).data());
  SetPairs(state, n);
}
BENCHMARK(BM_NaiveOracle)->ArgsProduct({{500, 2000}, {1, 4, 10}})->Unit(benchmark::kMillisecond);

// Static schemes collapse to one query point per distinct covariate row.
void BM_StaticDedup(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Dataset d = GenerateScenario(ScenarioPreset("overlapping", 3, n));
  const auto iv = Apply(scheme::Static{0.5}, d);
  const KernelSpec spec({DimKernel::Categorical(0.0),
                         DimKernel::Gaussian(kScenarioTreatmentHalfDistance)},
                        Combiner::kProduct);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ComputeEdp(d, iv, spec, {.threads = 1}).values.data());
  }
  SetPairs(state, n);
}
BENCHMARK(BM_StaticDedup)->Arg(10000)->Arg(100000)->Unit(benchmark::kMicrosecond);

void BM_StochasticThreads(benchmark::State& state) {
  const Dataset d = Study(2000, 4);
  const auto iv = Apply(scheme::StochasticShift{.x = 0.1, .sigma = 0.05, .seed = 11, .replicates = 8}, d);
  const KernelSpec spec = Spec(d, Combiner::kProduct);
  const auto threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ComputeEdp(d, iv, spec, {.threads = threads}).values.data());
  }
  SetPairs(state, 2000, 8);
}
BENCHMARK(BM_StochasticThreads)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
