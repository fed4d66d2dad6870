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
#include "commands.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "edpdiag/error.h"
#include "edpdiag/random.h"
#include "edpdiag/simulation.h"

namespace edpdiag::cli {

namespace {

constexpr std::size_t kTopContributors = 10;

struct Loaded {
  Dataset data;
  ResolvedKernel kernel;
};

Loaded LoadDataAndKernel(const RunConfig& config) {
  if (!config.data) throw ConfigError("data: required field is missing");
  if (!config.kernel) throw ConfigError("kernel: required field is missing");
  Dataset data = ReadCsv(config.data->path, config.data->schema);
  ResolvedKernel kernel = ResolveKernel(*config.kernel, data, "kernel");
  return {std::move(data), std::move(kernel)};
}

struct Estimator {
  EstimatorKernels kernels;
  std::optional<ResolvedKernel> g;
  std::optional<ResolvedKernel> w;
};

Estimator ResolveEstimator(const RunConfig& config, const Dataset& data,
                           const KernelSpec& spec) {
  Estimator e{DefaultEstimatorKernels(data, spec), std::nullopt, std::nullopt};
  e.kernels.max_weight = config.estimator.w_max;
  if (config.estimator.g_kernel) {
    e.g = ResolveKernel(*config.estimator.g_kernel, data, "estimator.g_kernel",
                        /*include_treatment=*/false);
    e.kernels.g = e.g->spec;
  }
  if (config.estimator.w_kernel) {
    e.w = ResolveKernel(*config.estimator.w_kernel, data, "estimator.w_kernel");
    e.kernels.w = e.w->spec;
  }
  return e;
}

// The echo carries every derived quantity so that replaying it reproduces
// the run exactly.
Json ConfigEcho(const RunConfig& config, const ResolvedKernel* kernel,
                const Estimator* estimator) {
  Json echo = RunConfigToJson(config);
  if (kernel && config.kernel) echo["kernel"] = KernelToJson(*config.kernel, kernel);
  if (estimator) {
    Json& est = echo["estimator"];
    if (estimator->g) {
      est["g_kernel"] = KernelToJson(*config.estimator.g_kernel, &*estimator->g);
    }
    if (estimator->w) {
      est["w_kernel"] = KernelToJson(*config.estimator.w_kernel, &*estimator->w);
    }
  }
  return echo;
}

Json Envelope(std::string_view command, Json echo) {
  Json env = Json::object();
  env["schema_version"] = std::string(kSchemaVersion);
  env["tool_version"] = std::string(kToolVersion);
  env["command"] = std::string(command);
  env["generator"] = std::string(kRandomGeneratorName);
  env["config_echo"] = std::move(echo);
  return env;
}

Json Warnings(const Dataset& data) {
  Json out = Json::array();
  for (std::size_t col : data.active_columns()) {
    const auto& spec = data.spec(col);
    if (spec.kind != VariableKind::kContinuous) continue;
    const auto values = data.column(col);
    if (std::all_of(values.begin(), values.end(),
                    [&](double v) { return v == values[0]; })) {
      out.push_back("column '" + spec.name +
                    "' is constant; its kernel reduces to exact matching");
    }
  }
  return out;
}

Json SummaryToJson(const PercentileSummary& s) {
  Json j = Json::object();
  j["min"] = s.min;
  j["p5"] = s.p5;
  j["p25"] = s.p25;
  j["p50"] = s.p50;
  j["p75"] = s.p75;
  j["p95"] = s.p95;
  j["max"] = s.max;
  return j;
}

Json ReportToJson(const EdpReport& r) {
  Json j = Json::object();
  j["mode"] = std::string(ToString(r.mode));
  j["n"] = r.values.size();
  j["summary"] = SummaryToJson(r.summary);
  if (r.flag_threshold) {
    j["flag_threshold"] = *r.flag_threshold;
  } else {
    j["flag_threshold"] = nullptr;
  }
  j["flagged_count"] = r.flagged.size();
  j["flagged"] = r.flagged;
  j["values"] = r.values;
  if (!r.replicate_values.empty()) j["replicate_values"] = r.replicate_values;
  return j;
}

struct TableRow {
  std::string x;
  const EdpReport* report;
};

void PrintTable(std::ostream& out, const std::vector<TableRow>& rows) {
  char line[256];
  std::snprintf(line, sizeof(line),
                "%-12s %-13s %7s %10s %10s %10s %10s %10s %10s %10s %8s\n", "x",
                "mode", "n", "min", "p5", "p25", "p50", "p75", "p95", "max",
                "flagged");
  out << line;
  for (const auto& row : rows) {
    const auto& r = *row.report;
    const auto& s = r.summary;
    const std::string flagged =
        r.flag_threshold ? std::to_string(r.flagged.size()) : "-";
    std::snprintf(line, sizeof(line),
                  "%-12s %-13s %7zu %10.4g %10.4g %10.4g %10.4g %10.4g %10.4g "
                  "%10.4g %8s\n",
                  row.x.c_str(), std::string(ToString(r.mode)).c_str(),
                  r.values.size(), s.min, s.p5, s.p25, s.p50, s.p75, s.p95,
                  s.max, flagged.c_str());
    out << line;
  }
}

std::string ShortNumber(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

std::ofstream OpenOutput(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write output file '" + path.string() + "'");
  return out;
}

void Emit(const RunConfig& config, const Json& envelope, std::ostream& stdout_) {
  auto write = [&](std::ostream& out) {
    if (config.output.format == OutputFormat::kCsv) {
      WriteEnvelopeCsv(out, envelope);
    } else {
      WriteJson(out, envelope);
      out << '\n';
    }
  };
  if (config.output.path) {
    std::ofstream out = OpenOutput(*config.output.path);
    write(out);
    if (!out) {
      throw DataError("failed writing '" + config.output.path->string() + "'");
    }
  } else {
    write(stdout_);
  }
}

Json Timing(const RunConfig& config,
            std::chrono::steady_clock::time_point start) {
  if (!config.output.timing) return nullptr;
  const auto elapsed = std::chrono::steady_clock::now() - start;
  return std::chrono::duration<double, std::milli>(elapsed).count();
}

EngineOptions Options(const RunConfig& config, int threads) {
  EngineOptions options;
  options.threads = threads;
  options.flag_threshold = config.flags_threshold;
  return options;
}

// Stochastic schemes draw from the run seed.
InterventionScheme Seeded(InterventionScheme scheme, std::uint64_t seed) {
  if (auto* s = std::get_if<scheme::StochasticShift>(&scheme)) s->seed = seed;
  return scheme;
}

}  // namespace

void ApplyOverrides(RunConfig& config, const Overrides& overrides) {
  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.output) {
    config.output.path = std::filesystem::absolute(*overrides.output).lexically_normal();
  }
  if (overrides.threads < 1) throw ConfigError("--threads must be >= 1");
}

Json RunDiagnose(const RunConfig& config, int threads, std::ostream& out,
                 std::ostream& log) {
  if (config.sweep) {
    throw ConfigError("sweep: not allowed for diagnose (use the sweep command)");
  }
  if (!config.scheme) throw ConfigError("scheme: required field is missing");
  const auto start = std::chrono::steady_clock::now();
  Loaded loaded = LoadDataAndKernel(config);
  const Dataset& data = loaded.data;
  const InterventionScheme scheme = Seeded(*config.scheme, config.seed);
  const IntervenedDataset intervened = Apply(scheme, data);
  const EngineOptions options = Options(config, threads);

  std::vector<EdpReport> reports;
  std::optional<Estimator> estimator;
  if (config.mode == RunMode::kEstimatorFocused) {
    estimator = ResolveEstimator(config, data, loaded.kernel.spec);
    EdpTrio trio = ComputeEdpTrio(data, intervened, estimator->kernels, options);
    reports = {std::move(trio.q_support), std::move(trio.g_support),
               std::move(trio.weight_proxy)};
  } else {
    reports.push_back(ComputeEdp(data, intervened, loaded.kernel.spec, options));
  }

  Json env = Envelope("diagnose", ConfigEcho(config, &loaded.kernel,
                                             estimator ? &*estimator : nullptr));
  env["warnings"] = Warnings(data);
  env["scheme"] = SchemeToJson(scheme);
  if (auto x = SchemeParameter(scheme)) {
    env["x"] = *x;
  } else {
    env["x"] = nullptr;
  }
  if (intervened.sigma) env["sigma"] = *intervened.sigma;
  Json rj = Json::array();
  for (const auto& r : reports) rj.push_back(ReportToJson(r));
  env["reports"] = std::move(rj);
  env["timing_ms"] = Timing(config, start);

  Emit(config, env, out);
  std::vector<TableRow> rows;
  const auto x = SchemeParameter(scheme);
  for (const auto& r : reports) {
    rows.push_back({x ? ShortNumber(*x) : std::string(SchemeName(scheme)), &r});
  }
  PrintTable(config.output.path ? out : log, rows);
  return env;
}

Json RunSweep(const RunConfig& config, int threads, std::ostream& out,
              std::ostream& log) {
  if (config.scheme) {
    throw ConfigError("scheme: not allowed for sweep (use the diagnose command)");
  }
  if (!config.sweep) throw ConfigError("sweep: required field is missing");
  const auto start = std::chrono::steady_clock::now();
  Loaded loaded = LoadDataAndKernel(config);
  const Dataset& data = loaded.data;
  std::optional<Estimator> estimator;
  std::optional<EstimatorKernels> kernels;
  if (config.mode == RunMode::kEstimatorFocused) {
    estimator = ResolveEstimator(config, data, loaded.kernel.spec);
    kernels = estimator->kernels;
  }
  const SweepResult result =
      Sweep(data, config.sweep->family, config.sweep->grid,
            Seeded(config.sweep->base, config.seed), loaded.kernel.spec,
            kernels, Options(config, threads));

  Json env = Envelope("sweep", ConfigEcho(config, &loaded.kernel,
                                          estimator ? &*estimator : nullptr));
  env["warnings"] = Warnings(data);
  Json sweep = Json::object();
  sweep["family"] = std::string(ToString(result.family));
  sweep["grid"] = result.grid;
  Json points = Json::array();
  for (const auto& p : result.points) {
    Json pj = Json::object();
    pj["x"] = p.x;
    if (p.sigma) pj["sigma"] = *p.sigma;
    Json rj = Json::array();
    for (const auto& r : p.reports) rj.push_back(ReportToJson(r));
    pj["reports"] = std::move(rj);
    points.push_back(std::move(pj));
  }
  sweep["points"] = std::move(points);
  env["sweep"] = std::move(sweep);
  env["timing_ms"] = Timing(config, start);

  Emit(config, env, out);
  std::vector<TableRow> rows;
  for (const auto& p : result.points) {
    for (const auto& r : p.reports) rows.push_back({ShortNumber(p.x), &r});
  }
  PrintTable(config.output.path ? out : log, rows);
  return env;
}

Json RunKernelInfo(const RunConfig& config, std::ostream& out,
                   std::ostream& log) {
  if (config.probe.empty()) throw ConfigError("probe: required field is missing");
  Loaded loaded = LoadDataAndKernel(config);
  const Dataset& data = loaded.data;
  const auto& active = data.active_columns();

  for (const auto& [name, value] : config.probe) {
    const auto col = data.FindColumn(name);
    if (!col || std::find(active.begin(), active.end(), *col) == active.end()) {
      throw ConfigError("probe." + name + ": not a kernel dimension (expected " +
                        std::to_string(active.size()) + " values, one per "
                        "treatment or adjustment column)");
    }
  }
  std::vector<double> probe;
  for (std::size_t col : active) {
    const auto& spec = data.spec(col);
    auto it = config.probe.find(spec.name);
    if (it == config.probe.end()) {
      throw ConfigError("probe: dimension mismatch, no value for column '" +
                        spec.name + "' (expected " +
                        std::to_string(active.size()) + " values)");
    }
    const Json& v = it->second;
    const std::string path = "probe." + spec.name;
    if (v.is_number()) {
      probe.push_back(v.get<double>());
    } else if (spec.kind == VariableKind::kCategorical) {
      const auto& levels = data.levels(col);
      const auto label = v.get<std::string>();
      auto lv = std::find(levels.begin(), levels.end(), label);
      if (lv == levels.end()) {
        throw ConfigError(path + ": unknown level '" + label + "'");
      }
      probe.push_back(static_cast<double>(lv - levels.begin()));
    } else if (spec.kind == VariableKind::kBinary &&
               (v.get<std::string>() == "0" || v.get<std::string>() == "1")) {
      probe.push_back(v.get<std::string>() == "1" ? 1.0 : 0.0);
    } else {
      throw ConfigError(path + ": must be a number");
    }
    if (!std::isfinite(probe.back())) throw ConfigError(path + ": must be finite");
  }

  const std::size_t n = data.rows();
  std::vector<double> weights(n);
  std::vector<double> row(active.size());
  double edp = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t p = 0; p < active.size(); ++p) row[p] = data.at(j, active[p]);
    weights[j] = PairWeight(loaded.kernel.spec, row, probe);
    edp += weights[j];
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return weights[a] > weights[b];
  });
  order.resize(std::min(n, kTopContributors));

  Json env = Envelope("kernel-info", ConfigEcho(config, &loaded.kernel, nullptr));
  Json pj = Json::object();
  for (std::size_t p = 0; p < active.size(); ++p) {
    pj[data.spec(active[p]).name] = probe[p];
  }
  env["probe"] = std::move(pj);
  env["edp"] = edp;
  Json top = Json::array();
  for (std::size_t j : order) {
    Json t = Json::object();
    t["index"] = j;
    t["weight"] = weights[j];
    top.push_back(std::move(t));
  }
  env["top"] = std::move(top);
  env["weights"] = weights;
  if (config.output.format == OutputFormat::kCsv) {
    throw ConfigError("output.format: kernel-info writes json only");
  }
  Emit(config, env, out);

  std::ostream& text = config.output.path ? out : log;
  text << "EDP at probe: " << FormatDouble(edp) << " (n = " << n << ")\n";
  text << "top contributors:\n";
  for (std::size_t j : order) {
    char line[96];
    std::snprintf(line, sizeof(line), "  row %6zu  weight %.6g\n", j, weights[j]);
    text << line;
  }
  return env;
}

void RunSimulate(const RunConfig& config, std::ostream& out, std::ostream& log) {
  if (!config.simulate) throw ConfigError("simulate: required field is missing");
  const SimulateConfig& sim = *config.simulate;
  const std::uint64_t seed = sim.seed.value_or(config.seed);

  if (sim.preset == "dimstudy") {
    if (!config.output.path) {
      throw ConfigError("output.path: the dimstudy preset needs an output directory");
    }
    DimStudySpec spec;
    spec.n = sim.n.value_or(spec.n);
    spec.max_dims = sim.max_dims;
    spec.seed = seed;
    const auto studies = GenerateDimStudy(spec);
    const auto& dir = *config.output.path;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw DataError("cannot create directory '" + dir.string() + "'");
    for (const auto& [p, data] : studies) {
      const auto file = dir / ("dimstudy_P" + std::to_string(p) + ".csv");
      std::ofstream f = OpenOutput(file);
      WriteCsv(f, data);
      if (!f) throw DataError("failed writing '" + file.string() + "'");
    }
    out << "wrote " << studies.size() << " datasets (n = " << spec.n
        << ") to " << dir.string() << "\n";
    return;
  }

  ScenarioSpec spec;
  if (sim.preset == "custom") {
    spec.name = "custom";
    spec.intercept = sim.intercept;
    spec.slope = sim.slope;
    spec.a_sd = *sim.a_sd;
    spec.p_l = sim.p_l;
    spec.seed = seed;
    spec.n = sim.n.value_or(350);
  } else {
    spec = ScenarioPreset(sim.preset, seed, sim.n.value_or(350));
  }
  const Dataset data = GenerateScenario(spec);
  if (config.output.path) {
    std::ofstream f = OpenOutput(*config.output.path);
    WriteCsv(f, data);
    if (!f) throw DataError("failed writing '" + config.output.path->string() + "'");
    out << "wrote " << data.rows() << " rows (" << spec.name << ", seed "
        << seed << ") to " << config.output.path->string() << "\n";
  } else {
    WriteCsv(out, data);
    log << "generated " << data.rows() << " rows (" << spec.name << ", seed "
        << seed << ")\n";
  }
}

void WriteEnvelopeCsv(std::ostream& out, const Json& envelope) {
  out << "grid_x,observation_index,mode,value\n";
  auto write_reports = [&](const std::string& x, const Json& reports) {
    for (const auto& r : reports) {
      const std::string mode = r["mode"].get<std::string>();
      const auto& values = r["values"];
      for (std::size_t i = 0; i < values.size(); ++i) {
        out << x << ',' << i << ',' << mode << ','
            << FormatDouble(values[i].get<double>()) << '\n';
      }
    }
  };
  if (envelope.contains("sweep")) {
    for (const auto& p : envelope["sweep"]["points"]) {
      write_reports(FormatDouble(p["x"].get<double>()), p["reports"]);
    }
  } else if (envelope.contains("reports")) {
    const auto& x = envelope["x"];
    write_reports(x.is_number() ? FormatDouble(x.get<double>()) : "",
                  envelope["reports"]);
  }
}

}  // namespace edpdiag::cli
