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
#include "edpdiag/intervention.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "edpdiag/error.h"
#include "edpdiag/random.h"

namespace edpdiag {

namespace {

// Philox stream reserved for stochastic-shift noise.
constexpr std::uint32_t kStochasticShiftStream = 0x53534846;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string FormatNumber(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

void RequireFinite(const std::vector<double>& values, std::string_view what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ComputeError(std::string(what) + " produced a non-finite value at row " +
                         std::to_string(i + 1));
    }
  }
}

std::vector<Interval> ResolveBounds(const ShiftBounds& bounds,
                                    const Dataset& data) {
  const std::size_t n = data.rows();
  const auto a_obs = data.column(data.treatment_index());
  return std::visit(
      Overloaded{
          [&](const GlobalBounds& b) {
            return std::vector<Interval>(n, b.bounds);
          },
          [&](const GroupBounds& b) {
            const auto col = data.FindColumn(b.group);
            if (!col) {
              throw ConfigError("conditional_shift bounds group '" + b.group +
                                "' is not a column");
            }
            std::vector<Interval> out(n);
            for (std::size_t i = 0; i < n; ++i) {
              const double level = data.at(i, *col);
              auto it = b.bounds.find(level);
              if (it == b.bounds.end()) {
                throw ConfigError("conditional_shift has no bounds for level " +
                                  FormatNumber(level) + " of '" + b.group +
                                  "'");
              }
              out[i] = it->second;
            }
            return out;
          },
          [&](const BoundsFromData& b) {
            std::vector<double> group(n, 0.0);
            if (!b.group.empty()) {
              const auto col = data.FindColumn(b.group);
              if (!col || data.spec(*col).role != VariableRole::kAdjustment) {
                throw ConfigError("conditional_shift from_data group '" +
                                  b.group +
                                  "' is not a column of the adjustment set");
              }
              auto values = data.column(*col);
              group.assign(values.begin(), values.end());
            }
            std::map<double, Interval> observed;
            for (std::size_t i = 0; i < n; ++i) {
              auto [it, inserted] =
                  observed.try_emplace(group[i], Interval{a_obs[i], a_obs[i]});
              if (!inserted) {
                it->second.lower = std::min(it->second.lower, a_obs[i]);
                it->second.upper = std::max(it->second.upper, a_obs[i]);
              }
            }
            std::vector<Interval> out(n);
            for (std::size_t i = 0; i < n; ++i) out[i] = observed[group[i]];
            return out;
          },
      },
      bounds);
}

}  // namespace

std::string_view SchemeName(const InterventionScheme& scheme) {
  return std::visit(
      Overloaded{
          [](const scheme::Natural&) { return "natural"; },
          [](const scheme::Static&) { return "static"; },
          [](const scheme::NaiveShift&) { return "naive_shift"; },
          [](const scheme::StochasticShift&) { return "stochastic_shift"; },
          [](const scheme::Threshold&) { return "threshold"; },
          [](const scheme::ConditionalShift&) { return "conditional_shift"; },
          [](const scheme::Dynamic&) { return "dynamic"; },
          [](const scheme::Mtp&) { return "mtp"; },
      },
      scheme);
}

std::optional<double> SchemeParameter(const InterventionScheme& scheme) {
  return std::visit(
      Overloaded{
          [](const scheme::Natural&) -> std::optional<double> {
            return std::nullopt;
          },
          [](const scheme::Dynamic&) -> std::optional<double> {
            return std::nullopt;
          },
          [](const scheme::Mtp&) -> std::optional<double> {
            return std::nullopt;
          },
          [](const auto& s) -> std::optional<double> { return s.x; },
      },
      scheme);
}

std::string_view ToString(SchemeFamily family) {
  switch (family) {
    case SchemeFamily::kStatic:
      return "static";
    case SchemeFamily::kNaiveShift:
      return "naive_shift";
    case SchemeFamily::kStochasticShift:
      return "stochastic_shift";
    case SchemeFamily::kThreshold:
      return "threshold";
    case SchemeFamily::kConditionalShift:
      return "conditional_shift";
  }
  return "unknown";
}

SchemeFamily ParseSchemeFamily(std::string_view name) {
  if (name == "static") return SchemeFamily::kStatic;
  if (name == "naive_shift") return SchemeFamily::kNaiveShift;
  if (name == "stochastic_shift") return SchemeFamily::kStochasticShift;
  if (name == "threshold") return SchemeFamily::kThreshold;
  if (name == "conditional_shift") return SchemeFamily::kConditionalShift;
  throw ConfigError("unknown scheme family '" + std::string(name) +
                    "' (expected static, naive_shift, stochastic_shift, "
                    "threshold or conditional_shift)");
}

InterventionScheme MakeScheme(SchemeFamily family, double x,
                              const InterventionScheme& base) {
  auto with_x = [&]<class S>() -> InterventionScheme {
    if (const S* s = std::get_if<S>(&base)) {
      S copy = *s;
      copy.x = x;
      return copy;
    }
    if (std::holds_alternative<scheme::Natural>(base)) {
      S fresh{};
      fresh.x = x;
      return fresh;
    }
    throw ConfigError("scheme '" + std::string(SchemeName(base)) +
                      "' does not belong to family '" +
                      std::string(ToString(family)) + "'");
  };
  switch (family) {
    case SchemeFamily::kStatic:
      return with_x.operator()<scheme::Static>();
    case SchemeFamily::kNaiveShift:
      return with_x.operator()<scheme::NaiveShift>();
    case SchemeFamily::kStochasticShift:
      return with_x.operator()<scheme::StochasticShift>();
    case SchemeFamily::kThreshold:
      return with_x.operator()<scheme::Threshold>();
    case SchemeFamily::kConditionalShift:
      return with_x.operator()<scheme::ConditionalShift>();
  }
  throw ConfigError("unknown scheme family");
}

IntervenedDataset Apply(const InterventionScheme& scheme, const Dataset& data) {
  const std::size_t n = data.rows();
  const auto a_obs = data.column(data.treatment_index());
  IntervenedDataset out;
  out.base = &data;

  std::visit(
      Overloaded{
          [&](const scheme::Natural&) {
            out.treatment.emplace_back(a_obs.begin(), a_obs.end());
          },
          [&](const scheme::Static& s) {
            out.treatment.emplace_back(n, s.x);
          },
          [&](const scheme::NaiveShift& s) {
            std::vector<double> a(n);
            for (std::size_t i = 0; i < n; ++i) a[i] = a_obs[i] + s.x;
            out.treatment.push_back(std::move(a));
          },
          [&](const scheme::StochasticShift& s) {
            if (s.replicates < 1) {
              throw ConfigError("stochastic_shift replicates must be >= 1");
            }
            double sigma = 0.0;
            if (s.sigma) {
              if (!(*s.sigma >= 0.0) || !std::isfinite(*s.sigma)) {
                throw ConfigError("stochastic_shift sigma must be >= 0");
              }
              sigma = *s.sigma;
            } else {
              sigma = std::sqrt(EstimateResidualVariance(data));
            }
            out.sigma = sigma;
            const CounterRng rng(s.seed);
            for (int r = 0; r < s.replicates; ++r) {
              std::vector<double> a(n);
              for (std::size_t i = 0; i < n; ++i) {
                a[i] = a_obs[i] + s.x;
                if (sigma > 0.0) {
                  a[i] += sigma * rng.Normal(kStochasticShiftStream, i,
                                             static_cast<std::uint32_t>(r));
                }
              }
              out.treatment.push_back(std::move(a));
            }
          },
          [&](const scheme::Threshold& s) {
            std::vector<double> a(n);
            for (std::size_t i = 0; i < n; ++i) a[i] = std::max(s.x, a_obs[i]);
            out.treatment.push_back(std::move(a));
          },
          [&](const scheme::ConditionalShift& s) {
            const auto bounds = ResolveBounds(s.bounds, data);
            std::vector<double> a(n);
            for (std::size_t i = 0; i < n; ++i) {
              const double shifted = a_obs[i] + s.x;
              a[i] = bounds[i].Contains(shifted) ? shifted : a_obs[i];
            }
            out.treatment.push_back(std::move(a));
          },
          [&](const scheme::Dynamic& s) {
            const auto rule = s.rule.Bind(data, /*allow_treatment=*/false);
            std::vector<double> a(n);
            for (std::size_t i = 0; i < n; ++i) a[i] = rule.Evaluate(data, i);
            RequireFinite(a, "dynamic rule '" + s.rule.source() + "'");
            out.treatment.push_back(std::move(a));
          },
          [&](const scheme::Mtp& s) {
            const auto rule = s.rule.Bind(data, /*allow_treatment=*/true);
            std::vector<double> a(n);
            for (std::size_t i = 0; i < n; ++i) a[i] = rule.Evaluate(data, i);
            RequireFinite(a, "mtp rule '" + s.rule.source() + "'");
            out.treatment.push_back(std::move(a));
          },
      },
      scheme);
  return out;
}

double EstimateResidualVariance(const Dataset& data) {
  const std::size_t n = data.rows();

  // Design: intercept, continuous/binary columns as-is, categorical columns
  // as indicators of every level but the first observed one.
  std::vector<std::vector<double>> columns;
  std::vector<std::string> names;
  columns.emplace_back(n, 1.0);
  names.emplace_back("(intercept)");
  for (std::size_t c : data.adjustment_columns()) {
    const auto values = data.column(c);
    const auto& spec = data.spec(c);
    if (spec.kind != VariableKind::kCategorical) {
      columns.emplace_back(values.begin(), values.end());
      names.push_back(spec.name);
      continue;
    }
    std::vector<double> levels(values.begin(), values.end());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    const auto& labels = data.levels(c);
    for (std::size_t k = 1; k < levels.size(); ++k) {
      std::vector<double> indicator(n);
      for (std::size_t i = 0; i < n; ++i) {
        indicator[i] = values[i] == levels[k] ? 1.0 : 0.0;
      }
      columns.push_back(std::move(indicator));
      const auto code = static_cast<std::size_t>(levels[k]);
      names.push_back(spec.name + "=" +
                      (code < labels.size() ? labels[code]
                                            : FormatNumber(levels[k])));
    }
  }

  const std::size_t p = columns.size();
  if (n < p + 1) {
    throw ComputeError("cannot estimate the residual variance: " +
                       std::to_string(n) + " rows for " + std::to_string(p) +
                       " regression parameters (need n >= p + 1)");
  }

  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  const auto a = data.column(data.treatment_index());
  for (std::size_t i = 0; i < n; ++i) {
    y(static_cast<Eigen::Index>(i)) = a[i];
    for (std::size_t j = 0; j < p; ++j) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          columns[j][i];
    }
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < static_cast<Eigen::Index>(p)) {
    // Name the columns that add nothing to the ones before them, so the
    // report follows schema order rather than the pivot order.
    std::string dependent;
    std::vector<Eigen::Index> kept;
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(p); ++j) {
      kept.push_back(j);
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> sub(x(Eigen::all, kept));
      sub.setThreshold(1e-10);
      if (sub.rank() < static_cast<Eigen::Index>(kept.size())) {
        kept.pop_back();
        if (!dependent.empty()) dependent += ", ";
        dependent += names[static_cast<std::size_t>(j)];
      }
    }
    throw ComputeError(
        "cannot estimate the residual variance: design matrix is rank "
        "deficient; collinear column(s): " +
        dependent);
  }
  const Eigen::VectorXd beta = qr.solve(y);
  const Eigen::VectorXd residual = y - x * beta;
  return residual.squaredNorm() / static_cast<double>(n - p);
}

}  // namespace edpdiag
