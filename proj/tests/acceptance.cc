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
// Acceptance suite. Each check prints one line:
//
//   PASS <name> (<elapsed> ms, limit <s> s)
//   FAIL <name> (<elapsed> ms, limit <s> s): <first violation>
//
// A check that exceeds its time limit fails. Exit status is the number of
// failed checks.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "commands.h"
#include "config.h"
#include "edpdiag/engine.h"
#include "edpdiag/intervention.h"
#include "edpdiag/kernel.h"
#include "edpdiag/simulation.h"
#include "oracle.h"
#include "test_util.h"

namespace {

using namespace edpdiag;

// Collects the first violation; later ones only bump the count.
class Check {
 public:
  void Expect(bool ok, const std::function<std::string()>& what) {
    if (ok) return;
    if (failures_++ == 0) first_ = what();
  }
  bool ok() const { return failures_ == 0; }
  std::string summary() const {
    return first_ + (failures_ > 1 ? " (+" + std::to_string(failures_ - 1) + " more)" : "");
  }

 private:
  int failures_ = 0;
  std::string first_;
};

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

KernelSpec ScenarioKernel() {
  return KernelSpec({DimKernel::Categorical(0.0),
                     DimKernel::Gaussian(kScenarioTreatmentHalfDistance)},
                    Combiner::kProduct);
}

double MedianEdp(const Dataset& d, const InterventionScheme& s, const KernelSpec& spec) {
  return ComputeEdp(d, Apply(s, d), spec).summary.p50;
}

void HalfDistanceIdentity(Check& check) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> logh(-8.0, 8.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int draw = 0; draw < 1000; ++draw) {
    const double h = std::pow(10.0, logh(rng));
    const double base = (unit(rng) - 0.5) * 10.0 * h;
    const DimKernel g = DimKernel::Gaussian(h);
    const double at_h = EvalDim(g, base + h, base);
    const double at_minus_h = EvalDim(g, base, base + h);
    check.Expect(std::fabs(at_h - 0.5) <= 1e-12 && std::fabs(at_minus_h - 0.5) <= 1e-12,
                 [&] { return "h=" + Num(h) + " gives " + Num(at_h); });
    check.Expect(EvalDim(g, base, base) == 1.0, [&] { return "k(0) != 1 at h=" + Num(h); });

    // The same identity inside a random multi-dimensional spec: one dimension
    // sits at its half-distance, the others match exactly.
    const std::size_t p = 1 + draw % 6;
    const std::size_t hot = static_cast<std::size_t>(unit(rng) * p) % p;
    std::vector<DimKernel> dims;
    std::vector<double> obs(p), query(p);
    double hot_h = 1.0;
    for (std::size_t k = 0; k < p; ++k) {
      const double hk = std::pow(10.0, logh(rng));
      dims.push_back(k == hot || unit(rng) < 0.7 ? DimKernel::Gaussian(hk)
                                                 : DimKernel::Categorical(unit(rng)));
      obs[k] = query[k] = std::round(unit(rng) * 3.0);
      if (k == hot) hot_h = hk;
    }
    // Put the hot dimension at the origin so the offset is exactly h.
    obs[hot] = 0.0;
    query[hot] = hot_h;
    const Combiner combiner = draw % 2 ? Combiner::kProduct : Combiner::kMinVariant;
    const std::vector<double> minvals =
        combiner == Combiner::kMinVariant ? std::vector<double>(p, 0.0) : std::vector<double>{};
    const KernelSpec spec(dims, combiner, minvals);
    const double w = PairWeight(spec, obs, query);
    check.Expect(std::fabs(w - 0.5) <= 1e-12,
                 [&] { return "spec draw " + std::to_string(draw) + " gives " + Num(w); });
    check.Expect(PairWeight(spec, obs, obs) == 1.0,
                 [&] { return "spec draw " + std::to_string(draw) + ": k(0) != 1"; });
  }
}

void OracleEquivalence(Check& check) {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng() % 200;
    std::size_t p = 1 + rng() % 6;
    if (trial % 8 == 6 && p == 1) p = 2;  // dynamic rules read L1
    auto inst = testutil::MakeRandomInstance(rng, n, p);
    const auto scheme = testutil::MakeRandomScheme(rng, trial, inst.data);
    const auto iv = Apply(scheme, inst.data);
    const auto got = ComputeEdp(inst.data, iv, inst.spec, {.threads = 1 + trial % 4});
    const auto want = testutil::OracleEdp(inst.data, iv, inst.spec);
    for (std::size_t i = 0; i < n; ++i) {
      check.Expect(std::fabs(got.values[i] - want[i]) <= 1e-9, [&] {
        return "instance " + std::to_string(trial) + " (" +
               std::string(SchemeName(scheme)) + ") row " + std::to_string(i) +
               ": engine " + Num(got.values[i]) + " oracle " + Num(want[i]);
      });
    }
  }
}

void RangeAndLimits(Check& check) {
  std::mt19937_64 rng(303);
  for (int trial = 0; trial < 24; ++trial) {
    const std::size_t n = 20 + rng() % 180;
    auto inst = testutil::MakeRandomInstance(rng, n, 1 + rng() % 6);
    const Dataset& d = inst.data;
    const double dn = static_cast<double>(n);
    std::vector<DimKernel> inf_dims, zero_dims;
    for (std::size_t c : d.active_columns()) {
      const bool cont = d.spec(c).kind == VariableKind::kContinuous;
      const bool uni = trial % 2 == 1;
      inf_dims.push_back(!cont ? DimKernel::Categorical(1.0)
                         : uni ? DimKernel::Uniform(kInfiniteHalfDistance)
                               : DimKernel::Gaussian(kInfiniteHalfDistance));
      zero_dims.push_back(!cont ? DimKernel::Categorical(0.0)
                          : uni ? DimKernel::Uniform(0.0)
                                : DimKernel::Gaussian(0.0));
    }
    const KernelSpec inf_spec(inf_dims, Combiner::kProduct);
    const KernelSpec zero_spec(zero_dims, trial % 3 == 2 ? Combiner::kHarmonicMean
                                                         : Combiner::kProduct);
    for (int which = 0; which < 8; ++which) {
      if (which == 6 && d.adjustment_columns().empty()) continue;
      if (which == 6 && !d.FindColumn("L1")) continue;
      const auto iv = Apply(testutil::MakeRandomScheme(rng, which, d), d);
      for (double v : ComputeEdp(d, iv, inst.spec).values) {
        check.Expect(v >= 0.0 && v <= dn, [&] { return "EDP " + Num(v) + " outside [0, n]"; });
      }
      for (double v : ComputeEdp(d, iv, inf_spec).values) {
        check.Expect(v == dn, [&] { return "h = inf gives " + Num(v) + " != n"; });
      }
      const auto got = ComputeEdp(d, iv, zero_spec).values;
      for (std::size_t r = 0; r < iv.replicates(); ++r) {
        if (iv.replicates() > 1) break;  // replicate means are not counts
        const auto counts = oracle::DuplicateCounts(
            testutil::ObservedRows(d), testutil::IntervenedRows(d, iv.treatment[r]));
        check.Expect(got == counts, [&] { return "h = 0 differs from duplicate counts"; });
      }
    }
  }
}

void BandwidthMonotonicity(Check& check) {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t p = 1 + rng() % 6;
    if (trial % 8 == 6 && p == 1) p = 2;
    auto inst = testutil::MakeRandomInstance(rng, 30 + rng() % 170, p);
    const auto iv = Apply(testutil::MakeRandomScheme(rng, trial, inst.data), inst.data);
    std::vector<double> prev;
    for (double f : {0.5, 1.0, 2.0, 4.0}) {
      const auto cur = ComputeEdp(inst.data, iv, inst.spec.Scaled(f)).values;
      for (std::size_t i = 0; i < prev.size(); ++i) {
        check.Expect(cur[i] >= prev[i], [&] {
          return "instance " + std::to_string(trial) + " factor " + Num(f) + " row " +
                 std::to_string(i) + ": " + Num(cur[i]) + " < " + Num(prev[i]);
        });
      }
      prev = cur;
    }
  }
}

void StaticCardinality(Check& check) {
  const std::vector<double> grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Dataset d = GenerateScenario(ScenarioPreset("overlapping", seed));
    for (double c : {0.0, 0.5}) {
      const KernelSpec spec({DimKernel::Categorical(c),
                             DimKernel::Gaussian(kScenarioTreatmentHalfDistance)},
                            Combiner::kProduct);
      const auto sweep = Sweep(d, SchemeFamily::kStatic, grid, scheme::Natural{}, spec,
                               std::nullopt);
      for (const auto& point : sweep.points) {
        const auto& v = point.reports[0].values;
        const std::set<double> distinct(v.begin(), v.end());
        check.Expect(distinct.size() <= 2, [&] {
          return "x=" + Num(point.x) + " has " + std::to_string(distinct.size()) +
                 " distinct values";
        });
      }
    }
  }
}

void SchemeDegeneracies(Check& check) {
  for (const char* preset : {"overlapping", "adjacent", "divided"}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const Dataset d = GenerateScenario(ScenarioPreset(preset, seed));
      const KernelSpec spec = ScenarioKernel();
      const auto natural = ComputeEdp(d, Apply(scheme::Natural{}, d), spec).values;
      double lo = INFINITY;
      for (double a : d.column(1)) lo = std::min(lo, a);
      for (double x : {lo, lo - 0.01, lo - 5.0}) {
        const auto t = ComputeEdp(d, Apply(scheme::Threshold{x}, d), spec).values;
        check.Expect(t == natural, [&] { return std::string(preset) + ": threshold " + Num(x) + " != natural"; });
      }
      const auto zero = ComputeEdp(d, Apply(scheme::NaiveShift{0.0}, d), spec).values;
      check.Expect(zero == natural, [&] { return std::string(preset) + ": naive_shift(0) != natural"; });

      double gmin[2] = {INFINITY, INFINITY}, gmax[2] = {-INFINITY, -INFINITY};
      for (std::size_t i = 0; i < d.rows(); ++i) {
        const int g = d.at(i, 0) == 1.0;
        gmin[g] = std::min(gmin[g], d.at(i, 1));
        gmax[g] = std::max(gmax[g], d.at(i, 1));
      }
      for (double x : {-0.5, -0.2, -0.05, 0.0, 0.05, 0.2, 0.5}) {
        const auto iv = Apply(scheme::ConditionalShift{x, BoundsFromData{"L"}}, d);
        for (std::size_t i = 0; i < d.rows(); ++i) {
          const int g = d.at(i, 0) == 1.0;
          const double a = iv.treatment[0][i];
          check.Expect(a >= gmin[g] && a <= gmax[g], [&] {
            return std::string(preset) + ": conditional_shift(" + Num(x) + ") moved row " +
                   std::to_string(i) + " to " + Num(a) + " outside its group range";
          });
        }
      }
    }
  }
}

void QualitativeReproduction(Check& check) {
  const KernelSpec spec = ScenarioKernel();
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const Dataset ov = GenerateScenario(ScenarioPreset("overlapping", seed));
    const Dataset ad = GenerateScenario(ScenarioPreset("adjacent", seed));
    const Dataset dv = GenerateScenario(ScenarioPreset("divided", seed));
    const double m_ov = MedianEdp(ov, scheme::NaiveShift{0.0}, spec);
    const double m_ad = MedianEdp(ad, scheme::NaiveShift{0.0}, spec);
    const double m_dv = MedianEdp(dv, scheme::NaiveShift{0.0}, spec);
    check.Expect(m_dv > m_ad && m_ad > m_ov, [&] {
      return "seed " + std::to_string(seed) + ": medians divided " + Num(m_dv) +
             ", adjacent " + Num(m_ad) + ", overlapping " + Num(m_ov);
    });
    for (double x : {-0.25, 0.25}) {
      const double m = MedianEdp(dv, scheme::NaiveShift{x}, spec);
      check.Expect(m < 0.25 * m_dv, [&] {
        return "seed " + std::to_string(seed) + ": divided median at shift " + Num(x) +
               " is " + Num(m) + " vs " + Num(m_dv) + " at 0";
      });
    }
  }
}

void DimensionalityDecline(Check& check) {
  const auto studies = GenerateDimStudy({.n = 1000, .max_dims = 10, .seed = 2024});
  std::vector<double> medians;
  for (const auto& [p, d] : studies) {
    std::vector<DimKernel> dims(d.active_columns().size(), DimKernel::Gaussian(1.0));
    medians.push_back(
        MedianEdp(d, scheme::Static{0.0}, KernelSpec(dims, Combiner::kProduct)));
  }
  for (std::size_t k = 1; k < medians.size(); ++k) {
    check.Expect(medians[k] <= medians[k - 1], [&] {
      return "median rises from P=" + std::to_string(k) + " (" + Num(medians[k - 1]) +
             ") to P=" + std::to_string(k + 1) + " (" + Num(medians[k]) + ")";
    });
  }
  check.Expect(medians.back() < 0.1 * medians.front(), [&] {
    return "median P=10 " + Num(medians.back()) + " vs P=1 " + Num(medians.front());
  });
}

void CombinerOrdering(Check& check) {
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const DimKernel g = DimKernel::Gaussian(1.0);
  for (int draw = 0; draw < 20000; ++draw) {
    const std::size_t p = 1 + draw % 8;
    std::vector<double> v(p), minvals(p);
    for (std::size_t k = 0; k < p; ++k) {
      v[k] = 1.0 - unit(rng);
      minvals[k] = unit(rng);
    }
    const std::vector<DimKernel> dims(p, g);
    const double prod = Combine(KernelSpec(dims, Combiner::kProduct), v);
    const double harm = Combine(KernelSpec(dims, Combiner::kHarmonicMean), v);
    const double minv = Combine(KernelSpec(dims, Combiner::kMinVariant, minvals), v);
    check.Expect(prod <= harm && prod <= minv, [&] {
      return "pair draw " + std::to_string(draw) + ": product " + Num(prod) +
             " harmonic " + Num(harm) + " min_variant " + Num(minv);
    });
  }
  // Lifted to EDP: same dimensions, three combiners.
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t p = 1 + rng() % 6;
    if (trial % 8 == 6 && p == 1) p = 2;
    auto inst = testutil::MakeRandomInstance(rng, 20 + rng() % 180, p);
    std::vector<DimKernel> dims;
    for (const auto& dk : inst.spec.dims()) {
      dims.push_back(dk.continuous() ? dk : DimKernel::Categorical(0.05 + 0.9 * unit(rng)));
    }
    std::vector<double> minvals(dims.size());
    for (double& m : minvals) m = unit(rng);
    const auto iv = Apply(testutil::MakeRandomScheme(rng, trial, inst.data), inst.data);
    const auto prod = ComputeEdp(inst.data, iv, KernelSpec(dims, Combiner::kProduct)).values;
    const auto harm = ComputeEdp(inst.data, iv, KernelSpec(dims, Combiner::kHarmonicMean)).values;
    const auto minv =
        ComputeEdp(inst.data, iv, KernelSpec(dims, Combiner::kMinVariant, minvals)).values;
    for (std::size_t i = 0; i < prod.size(); ++i) {
      check.Expect(prod[i] <= harm[i] && prod[i] <= minv[i], [&] {
        return "instance " + std::to_string(trial) + " row " + std::to_string(i) +
               ": product " + Num(prod[i]) + " harmonic " + Num(harm[i]) +
               " min_variant " + Num(minv[i]);
      });
    }
  }
}

void Determinism(Check& check) {
  namespace fs = std::filesystem;
  using edpdiag::cli::Json;
  const fs::path dir =
      fs::temp_directory_path() / ("edpdiag_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  WriteCsv(dir / "data.csv", GenerateScenario(ScenarioPreset("adjacent", 77)));

  const Json sweep_doc = Json::parse(R"({
    "data": {"path": "data.csv", "schema": [
      {"name": "L", "kind": "binary", "role": "adjustment"},
      {"name": "A", "kind": "continuous", "role": "treatment"}]},
    "kernel": {"rule_of_thumb": "median", "combiner": "harmonic_mean"},
    "sweep": {"family": "stochastic_shift", "sigma": "estimate", "replicates": 3,
              "grid": {"from": -0.2, "to": 0.2, "steps": 5}},
    "mode": "estimator_focused",
    "flags_threshold": 5,
    "seed": 12345,
    "output": {"timing": false}})");
  Json diag_doc = sweep_doc;
  diag_doc.erase("sweep");
  diag_doc["scheme"] = Json::parse(
      R"({"variant": "mtp", "rule": "a_obs < 0.5 ? a_obs + 0.1 : a_obs - 0.05"})");
  diag_doc["mode"] = "data_centric";

  for (const Json* doc : std::vector<const Json*>{&sweep_doc, &diag_doc}) {
    const auto config = edpdiag::cli::ParseRunConfig(*doc, dir);
    std::string reference;
    for (int threads : {1, 2, 8}) {
      std::ostringstream out, log;
      const Json env = config.sweep ? edpdiag::cli::RunSweep(config, threads, out, log)
                                    : edpdiag::cli::RunDiagnose(config, threads, out, log);
      const std::string text = out.str();
      if (threads == 1) {
        reference = text;
        // Replaying the echo must reproduce the envelope byte for byte.
        const auto replay = edpdiag::cli::ParseRunConfig(env["config_echo"], "/");
        std::ostringstream out2, log2;
        if (replay.sweep) {
          edpdiag::cli::RunSweep(replay, 1, out2, log2);
        } else {
          edpdiag::cli::RunDiagnose(replay, 1, out2, log2);
        }
        check.Expect(out2.str() == text, [] { return "config_echo replay differs"; });
      } else {
        check.Expect(text == reference, [&] {
          return std::to_string(threads) + " threads give a different envelope";
        });
      }
    }
  }
  fs::remove_all(dir);
}

struct Criterion {
  const char* name;
  double limit_s;
  void (*run)(Check&);
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"kernel half-distance identity", 1, HalfDistanceIdentity},
      {"oracle equivalence", 30, OracleEquivalence},
      {"range and limits", 5, RangeAndLimits},
      {"bandwidth monotonicity", 10, BandwidthMonotonicity},
      {"static-scheme cardinality", 5, StaticCardinality},
      {"scheme degeneracies", 5, SchemeDegeneracies},
      {"scenario ordering and shift decline", 20, QualitativeReproduction},
      {"dimensionality decline", 60, DimensionalityDecline},
      {"combiner ordering", 5, CombinerOrdering},
      {"determinism across threads", 10, Determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
      c.run(check);
    } catch (const std::exception& e) {
      error = std::string("exception: ") + e.what();
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    const bool in_time = ms <= c.limit_s * 1000.0;
    const bool pass = check.ok() && error.empty() && in_time;
    std::printf("%s %s (%.0f ms, limit %g s)", pass ? "PASS" : "FAIL", c.name, ms,
                c.limit_s);
    if (!error.empty()) {
      std::printf(": %s", error.c_str());
    } else if (!check.ok()) {
      std::printf(": %s", check.summary().c_str());
    } else if (!in_time) {
      std::printf(": over the time limit");
    }
    std::printf("\n");
    std::fflush(stdout);
    failed += pass ? 0 : 1;
  }
  return failed;
}
