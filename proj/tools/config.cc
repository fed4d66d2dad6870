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
#include "config.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "edpdiag/error.h"

namespace edpdiag::cli {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void Fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

std::string Join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string Index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void RequireObject(const Json& j, const std::string& path) {
  if (!j.is_object()) Fail(path, "must be an object");
}

void CheckKeys(const Json& j, const std::string& path,
               std::initializer_list<std::string_view> allowed) {
  RequireObject(j, path);
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (auto key : allowed) known = known || it.key() == key;
    if (!known) Fail(Join(path, it.key()), "unknown field");
  }
}

const Json* Find(const Json& j, std::string_view key) {
  auto it = j.find(std::string(key));
  return it == j.end() ? nullptr : &*it;
}

const Json& Require(const Json& j, std::string_view key,
                    const std::string& path) {
  if (const Json* v = Find(j, key)) return *v;
  Fail(Join(path, std::string(key)), "required field is missing");
}

double AsNumber(const Json& v, const std::string& path, bool allow_inf = false) {
  if (v.is_number()) {
    const double d = v.get<double>();
    if (!std::isfinite(d)) Fail(path, "must be finite");
    return d;
  }
  if (allow_inf && v.is_string() &&
      (v.get<std::string>() == "inf" || v.get<std::string>() == "Inf")) {
    return kInfiniteHalfDistance;
  }
  Fail(path, allow_inf ? "must be a number or \"inf\"" : "must be a number");
}

std::string AsString(const Json& v, const std::string& path) {
  if (!v.is_string()) Fail(path, "must be a string");
  return v.get<std::string>();
}

std::uint64_t AsUnsigned(const Json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  if (v.is_string()) {
    // Seeds beyond 2^53 may be given as strings.
    const std::string s = v.get<std::string>();
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec == std::errc() && ptr == s.data() + s.size()) return out;
  }
  Fail(path, "must be a non-negative integer");
}

bool AsBool(const Json& v, const std::string& path) {
  if (!v.is_boolean()) Fail(path, "must be true or false");
  return v.get<bool>();
}

// Wraps the enum parsers so their messages carry the field path.
template <class F>
auto ParseEnum(const Json& v, const std::string& path, F parse) {
  const std::string s = AsString(v, path);
  try {
    return parse(s);
  } catch (const ConfigError& e) {
    Fail(path, e.what());
  }
}

DataConfig ParseData(const Json& j, const std::string& path,
                     const std::filesystem::path& base_dir) {
  CheckKeys(j, path, {"path", "schema"});
  DataConfig data;
  std::filesystem::path p = AsString(Require(j, "path", path), Join(path, "path"));
  if (p.is_relative()) p = base_dir / p;
  data.path = p.lexically_normal();

  const std::string schema_path = Join(path, "schema");
  const Json& schema = Require(j, "schema", path);
  if (!schema.is_array() || schema.empty()) {
    Fail(schema_path, "must be a nonempty array of variables");
  }
  for (std::size_t i = 0; i < schema.size(); ++i) {
    const std::string vp = Index(schema_path, i);
    const Json& v = schema[i];
    CheckKeys(v, vp, {"name", "kind", "role"});
    VariableSpec spec;
    spec.name = AsString(Require(v, "name", vp), Join(vp, "name"));
    spec.kind = ParseEnum(Require(v, "kind", vp), Join(vp, "kind"),
                          ParseVariableKind);
    spec.role = ParseEnum(Require(v, "role", vp), Join(vp, "role"),
                          ParseVariableRole);
    data.schema.push_back(std::move(spec));
  }
  try {
    ValidateSchema(data.schema);
  } catch (const Error& e) {
    Fail(schema_path, e.what());
  }
  return data;
}

KernelConfig ParseKernel(const Json& j, const std::string& path) {
  CheckKeys(j, path,
            {"rule_of_thumb", "spread", "family", "combiner", "dims", "minvals"});
  KernelConfig k;
  if (const Json* v = Find(j, "rule_of_thumb")) {
    k.rule_of_thumb =
        ParseEnum(*v, Join(path, "rule_of_thumb"), ParseBandwidthScenario);
  }
  if (const Json* v = Find(j, "spread")) {
    k.spread = ParseEnum(*v, Join(path, "spread"), ParseSpreadMeasure);
  }
  if (const Json* v = Find(j, "family")) {
    k.family = ParseEnum(*v, Join(path, "family"), ParseKernelFamily);
    if (k.family == KernelFamily::kCategorical) {
      Fail(Join(path, "family"),
           "default family must be gaussian or uniform (categorical columns "
           "get the categorical kernel automatically)");
    }
  }
  if (const Json* v = Find(j, "combiner")) {
    k.combiner = ParseEnum(*v, Join(path, "combiner"), ParseCombiner);
  }
  if (const Json* dims = Find(j, "dims")) {
    const std::string dp = Join(path, "dims");
    if (!dims->is_array()) Fail(dp, "must be an array");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < dims->size(); ++i) {
      const std::string ip = Index(dp, i);
      const Json& d = (*dims)[i];
      CheckKeys(d, ip, {"column", "family", "half_distance", "c"});
      DimConfig dim;
      dim.column = AsString(Require(d, "column", ip), Join(ip, "column"));
      if (!seen.insert(dim.column).second) {
        Fail(Join(ip, "column"), "duplicate kernel for column '" + dim.column + "'");
      }
      dim.family = ParseEnum(Require(d, "family", ip), Join(ip, "family"),
                             ParseKernelFamily);
      if (dim.family == KernelFamily::kCategorical) {
        if (Find(d, "half_distance")) {
          Fail(Join(ip, "half_distance"), "not allowed for a categorical kernel");
        }
        dim.param = AsNumber(Require(d, "c", ip), Join(ip, "c"));
        if (dim.param < 0.0 || dim.param > 1.0) {
          Fail(Join(ip, "c"), "must be in [0, 1]");
        }
      } else {
        if (Find(d, "c")) Fail(Join(ip, "c"), "only allowed for categorical kernels");
        dim.param = AsNumber(Require(d, "half_distance", ip),
                             Join(ip, "half_distance"), /*allow_inf=*/true);
        if (dim.param < 0.0) Fail(Join(ip, "half_distance"), "must be >= 0");
      }
      k.dims.push_back(std::move(dim));
    }
  }
  if (const Json* mv = Find(j, "minvals")) {
    const std::string mp = Join(path, "minvals");
    if (k.combiner != Combiner::kMinVariant) {
      Fail(mp, "only allowed with combiner \"min_variant\"");
    }
    RequireObject(*mv, mp);
    for (auto it = mv->begin(); it != mv->end(); ++it) {
      const double m = AsNumber(it.value(), Join(mp, it.key()));
      if (m < 0.0 || m > 1.0) Fail(Join(mp, it.key()), "must be in [0, 1]");
      k.minvals[it.key()] = m;
    }
    k.has_minvals = true;
  } else if (k.combiner == Combiner::kMinVariant) {
    Fail(Join(path, "minvals"), "required with combiner \"min_variant\"");
  }
  return k;
}

ShiftBounds ParseBounds(const Json& j, const std::string& path) {
  if (j.is_string()) {
    if (j.get<std::string>() == "from_data") return BoundsFromData{};
    Fail(path, "must be \"from_data\" or an object");
  }
  RequireObject(j, path);
  const std::string type =
      AsString(Require(j, "type", path), Join(path, "type"));
  if (type == "from_data") {
    CheckKeys(j, path, {"type", "group"});
    BoundsFromData b;
    if (const Json* g = Find(j, "group")) b.group = AsString(*g, Join(path, "group"));
    return b;
  }
  auto parse_interval = [](const Json& v, const std::string& p) {
    CheckKeys(v, p, {"lower", "upper"});
    Interval iv;
    if (const Json* lo = Find(v, "lower")) iv.lower = AsNumber(*lo, Join(p, "lower"));
    if (const Json* hi = Find(v, "upper")) iv.upper = AsNumber(*hi, Join(p, "upper"));
    if (iv.lower > iv.upper) Fail(p, "lower must not exceed upper");
    return iv;
  };
  if (type == "global") {
    CheckKeys(j, path, {"type", "lower", "upper"});
    Json interval = Json::object();
    if (const Json* lo = Find(j, "lower")) interval["lower"] = *lo;
    if (const Json* hi = Find(j, "upper")) interval["upper"] = *hi;
    return GlobalBounds{parse_interval(interval, path)};
  }
  if (type == "per_group") {
    CheckKeys(j, path, {"type", "group", "levels"});
    GroupBounds b;
    b.group = AsString(Require(j, "group", path), Join(path, "group"));
    const std::string lp = Join(path, "levels");
    const Json& levels = Require(j, "levels", path);
    RequireObject(levels, lp);
    for (auto it = levels.begin(); it != levels.end(); ++it) {
      double code = 0.0;
      const std::string& key = it.key();
      auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), code);
      if (ec != std::errc() || ptr != key.data() + key.size()) {
        Fail(Join(lp, key), "level keys must be numeric level codes");
      }
      b.bounds[code] = parse_interval(it.value(), Join(lp, key));
    }
    return b;
  }
  Fail(Join(path, "type"), "must be from_data, global or per_group");
}

// Reads the family-specific, non-x parameters of a scheme.
void ParseSchemeParams(const Json& j, const std::string& path,
                       InterventionScheme& scheme) {
  if (auto* s = std::get_if<scheme::StochasticShift>(&scheme)) {
    const Json& sigma = Require(j, "sigma", path);
    if (sigma.is_string() && sigma.get<std::string>() == "estimate") {
      s->sigma.reset();
    } else {
      s->sigma = AsNumber(sigma, Join(path, "sigma"));
      if (*s->sigma < 0.0) Fail(Join(path, "sigma"), "must be >= 0 or \"estimate\"");
    }
    if (const Json* m = Find(j, "replicates")) {
      const auto reps = AsUnsigned(*m, Join(path, "replicates"));
      if (reps < 1 || reps > 100000) {
        Fail(Join(path, "replicates"), "must be in [1, 100000]");
      }
      s->replicates = static_cast<int>(reps);
    }
  } else if (auto* c = std::get_if<scheme::ConditionalShift>(&scheme)) {
    if (const Json* b = Find(j, "bounds")) {
      c->bounds = ParseBounds(*b, Join(path, "bounds"));
    }
  }
}

InterventionScheme EmptyScheme(SchemeFamily family) {
  switch (family) {
    case SchemeFamily::kStatic:
      return scheme::Static{};
    case SchemeFamily::kNaiveShift:
      return scheme::NaiveShift{};
    case SchemeFamily::kStochasticShift:
      return scheme::StochasticShift{};
    case SchemeFamily::kThreshold:
      return scheme::Threshold{};
    case SchemeFamily::kConditionalShift:
      return scheme::ConditionalShift{};
  }
  return scheme::Natural{};
}

InterventionScheme ParseScheme(const Json& j, const std::string& path) {
  RequireObject(j, path);
  const std::string variant =
      AsString(Require(j, "variant", path), Join(path, "variant"));
  auto parse_rule = [&](const char* key) {
    const std::string rp = Join(path, key);
    try {
      return Expression::Parse(AsString(Require(j, key, path), rp));
    } catch (const ConfigError& e) {
      Fail(rp, e.what());
    }
  };
  if (variant == "natural") {
    CheckKeys(j, path, {"variant"});
    return scheme::Natural{};
  }
  if (variant == "dynamic") {
    CheckKeys(j, path, {"variant", "rule"});
    return scheme::Dynamic{parse_rule("rule")};
  }
  if (variant == "mtp") {
    CheckKeys(j, path, {"variant", "rule"});
    return scheme::Mtp{parse_rule("rule")};
  }
  SchemeFamily family;
  try {
    family = ParseSchemeFamily(variant);
  } catch (const ConfigError&) {
    Fail(Join(path, "variant"),
         "unknown variant '" + variant +
             "' (expected natural, static, naive_shift, stochastic_shift, "
             "threshold, conditional_shift, dynamic or mtp)");
  }
  switch (family) {
    case SchemeFamily::kStochasticShift:
      CheckKeys(j, path, {"variant", "x", "sigma", "replicates"});
      break;
    case SchemeFamily::kConditionalShift:
      CheckKeys(j, path, {"variant", "x", "bounds"});
      break;
    default:
      CheckKeys(j, path, {"variant", "x"});
  }
  const double x = AsNumber(Require(j, "x", path), Join(path, "x"));
  InterventionScheme s = MakeScheme(family, x, EmptyScheme(family));
  ParseSchemeParams(j, path, s);
  return s;
}

SweepConfig ParseSweep(const Json& j, const std::string& path) {
  CheckKeys(j, path, {"family", "grid", "sigma", "replicates", "bounds"});
  SweepConfig sweep;
  sweep.family = ParseEnum(Require(j, "family", path), Join(path, "family"),
                           ParseSchemeFamily);
  if (sweep.family != SchemeFamily::kStochasticShift &&
      (Find(j, "sigma") || Find(j, "replicates"))) {
    Fail(path, "sigma/replicates are only allowed for family stochastic_shift");
  }
  if (sweep.family != SchemeFamily::kConditionalShift && Find(j, "bounds")) {
    Fail(Join(path, "bounds"), "only allowed for family conditional_shift");
  }
  sweep.base = EmptyScheme(sweep.family);
  ParseSchemeParams(j, path, sweep.base);

  const std::string gp = Join(path, "grid");
  const Json& grid = Require(j, "grid", path);
  if (grid.is_array()) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      sweep.grid.push_back(AsNumber(grid[i], Index(gp, i)));
    }
  } else if (grid.is_object()) {
    CheckKeys(grid, gp, {"from", "to", "steps"});
    const double from = AsNumber(Require(grid, "from", gp), Join(gp, "from"));
    const double to = AsNumber(Require(grid, "to", gp), Join(gp, "to"));
    const auto steps = AsUnsigned(Require(grid, "steps", gp), Join(gp, "steps"));
    if (steps < 1) Fail(Join(gp, "steps"), "must be >= 1");
    if (steps == 1) {
      if (from != to) Fail(gp, "a single step requires from == to");
      sweep.grid.push_back(from);
    } else {
      if (!(to > from)) Fail(gp, "to must be greater than from");
      const double span = to - from;
      for (std::uint64_t k = 0; k < steps; ++k) {
        // Endpoints exact; interior points from + k * span / (steps - 1).
        const double x = k + 1 == steps
                             ? to
                             : from + static_cast<double>(k) * span /
                                          static_cast<double>(steps - 1);
        sweep.grid.push_back(x);
      }
    }
  } else {
    Fail(gp, "must be an array or {from, to, steps}");
  }
  if (sweep.grid.empty()) Fail(gp, "must not be empty");
  for (std::size_t i = 1; i < sweep.grid.size(); ++i) {
    if (!(sweep.grid[i] > sweep.grid[i - 1])) {
      Fail(gp, "must be strictly increasing");
    }
  }
  return sweep;
}

SimulateConfig ParseSimulate(const Json& j, const std::string& path) {
  CheckKeys(j, path, {"preset", "n", "seed", "intercept", "slope", "sigma_A",
                      "sigma_A2", "p_L", "P_max"});
  SimulateConfig s;
  s.preset = AsString(Require(j, "preset", path), Join(path, "preset"));
  static const std::set<std::string> kPresets = {
      "overlapping", "adjacent", "divided", "custom", "dimstudy"};
  if (!kPresets.contains(s.preset)) {
    Fail(Join(path, "preset"),
         "unknown preset '" + s.preset +
             "' (expected overlapping, adjacent, divided, custom or dimstudy)");
  }
  if (const Json* v = Find(j, "n")) {
    s.n = AsUnsigned(*v, Join(path, "n"));
    if (*s.n < 1) Fail(Join(path, "n"), "must be >= 1");
  }
  if (const Json* v = Find(j, "seed")) s.seed = AsUnsigned(*v, Join(path, "seed"));
  const bool custom = s.preset == "custom";
  for (const char* key : {"intercept", "slope", "sigma_A", "sigma_A2", "p_L"}) {
    if (!custom && Find(j, key)) {
      Fail(Join(path, key), "only allowed with preset \"custom\"");
    }
  }
  if (s.preset != "dimstudy" && Find(j, "P_max")) {
    Fail(Join(path, "P_max"), "only allowed with preset \"dimstudy\"");
  }
  if (custom) {
    s.intercept = AsNumber(Require(j, "intercept", path), Join(path, "intercept"));
    s.slope = AsNumber(Require(j, "slope", path), Join(path, "slope"));
    const Json* sd = Find(j, "sigma_A");
    const Json* var = Find(j, "sigma_A2");
    if ((sd != nullptr) == (var != nullptr)) {
      Fail(path, "custom preset needs exactly one of sigma_A (sd) or sigma_A2 (variance)");
    }
    if (sd) {
      s.a_sd = AsNumber(*sd, Join(path, "sigma_A"));
    } else {
      const double v = AsNumber(*var, Join(path, "sigma_A2"));
      if (v <= 0.0) Fail(Join(path, "sigma_A2"), "must be > 0");
      s.a_sd = std::sqrt(v);
    }
    if (!(*s.a_sd > 0.0)) Fail(Join(path, sd ? "sigma_A" : "sigma_A2"), "must be > 0");
    if (const Json* p = Find(j, "p_L")) {
      s.p_l = AsNumber(*p, Join(path, "p_L"));
      if (s.p_l < 0.0 || s.p_l > 1.0) Fail(Join(path, "p_L"), "must be in [0, 1]");
    }
  }
  if (const Json* v = Find(j, "P_max")) {
    s.max_dims = AsUnsigned(*v, Join(path, "P_max"));
    if (s.max_dims < 1) Fail(Join(path, "P_max"), "must be >= 1");
  }
  return s;
}

Json IntervalToJson(const Interval& iv) {
  Json j = Json::object();
  if (std::isfinite(iv.lower)) j["lower"] = iv.lower;
  if (std::isfinite(iv.upper)) j["upper"] = iv.upper;
  return j;
}

Json HalfDistanceToJson(double h) {
  if (std::isinf(h)) return "inf";
  return h;
}

std::string FormatLevelKey(double code) {
  std::ostringstream out;
  out << code;
  return out.str();
}

}  // namespace

std::string_view ToString(RunMode mode) {
  return mode == RunMode::kDataCentric ? "data_centric" : "estimator_focused";
}

std::string_view ToString(OutputFormat format) {
  return format == OutputFormat::kJson ? "json" : "csv";
}

RunConfig ParseRunConfig(const Json& doc, const std::filesystem::path& base_dir) {
  CheckKeys(doc, "config",
            {"data", "kernel", "scheme", "sweep", "mode", "estimator", "output",
             "flags_threshold", "seed", "probe", "simulate"});
  RunConfig c;
  if (const Json* v = Find(doc, "data")) c.data = ParseData(*v, "data", base_dir);
  if (const Json* v = Find(doc, "kernel")) c.kernel = ParseKernel(*v, "kernel");
  if (Find(doc, "scheme") && Find(doc, "sweep")) {
    Fail("config", "scheme and sweep are mutually exclusive");
  }
  if (const Json* v = Find(doc, "scheme")) c.scheme = ParseScheme(*v, "scheme");
  if (const Json* v = Find(doc, "sweep")) c.sweep = ParseSweep(*v, "sweep");
  if (const Json* v = Find(doc, "mode")) {
    const std::string m = AsString(*v, "mode");
    if (m == "data_centric") {
      c.mode = RunMode::kDataCentric;
    } else if (m == "estimator_focused") {
      c.mode = RunMode::kEstimatorFocused;
    } else {
      Fail("mode", "must be data_centric or estimator_focused");
    }
  }
  if (const Json* v = Find(doc, "estimator")) {
    CheckKeys(*v, "estimator", {"g_kernel", "w_kernel", "w_max"});
    if (c.mode != RunMode::kEstimatorFocused) {
      Fail("estimator", "only allowed with mode \"estimator_focused\"");
    }
    if (const Json* g = Find(*v, "g_kernel")) {
      c.estimator.g_kernel = ParseKernel(*g, "estimator.g_kernel");
    }
    if (const Json* w = Find(*v, "w_kernel")) {
      c.estimator.w_kernel = ParseKernel(*w, "estimator.w_kernel");
    }
    if (const Json* w = Find(*v, "w_max")) {
      c.estimator.w_max = AsNumber(*w, "estimator.w_max");
      if (c.estimator.w_max <= 0.0) Fail("estimator.w_max", "must be > 0");
    }
  }
  if (const Json* v = Find(doc, "output")) {
    CheckKeys(*v, "output", {"format", "path", "timing"});
    if (const Json* f = Find(*v, "format")) {
      const std::string fmt = AsString(*f, "output.format");
      if (fmt == "json") {
        c.output.format = OutputFormat::kJson;
      } else if (fmt == "csv") {
        c.output.format = OutputFormat::kCsv;
      } else {
        Fail("output.format", "must be json or csv");
      }
    }
    if (const Json* p = Find(*v, "path")) {
      std::filesystem::path out = AsString(*p, "output.path");
      if (out.is_relative()) out = base_dir / out;
      c.output.path = out.lexically_normal();
    }
    if (const Json* t = Find(*v, "timing")) c.output.timing = AsBool(*t, "output.timing");
  }
  if (const Json* v = Find(doc, "flags_threshold")) {
    c.flags_threshold = AsNumber(*v, "flags_threshold");
  }
  if (const Json* v = Find(doc, "seed")) c.seed = AsUnsigned(*v, "seed");
  if (const Json* v = Find(doc, "probe")) {
    RequireObject(*v, "probe");
    for (auto it = v->begin(); it != v->end(); ++it) {
      if (!it.value().is_number() && !it.value().is_string()) {
        Fail(Join("probe", it.key()), "must be a number or a level label");
      }
      c.probe[it.key()] = it.value();
    }
  }
  if (const Json* v = Find(doc, "simulate")) {
    c.simulate = ParseSimulate(*v, "simulate");
  }
  return c;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " +
                      e.what());
  }
  const auto base = std::filesystem::absolute(path).parent_path();
  return ParseRunConfig(doc, base);
}

ResolvedKernel ResolveKernel(const KernelConfig& config, const Dataset& data,
                             const std::string& path, bool include_treatment) {
  const auto& active = data.active_columns();
  for (std::size_t i = 0; i < config.dims.size(); ++i) {
    const auto& d = config.dims[i];
    const auto col = data.FindColumn(d.column);
    if (!col) {
      Fail(Join(Index(Join(path, "dims"), i), "column"),
           "no column named '" + d.column + "'");
    }
    if (data.spec(*col).role == VariableRole::kIgnored ||
        (!include_treatment && *col == data.treatment_index())) {
      Fail(Join(Index(Join(path, "dims"), i), "column"),
           "column '" + d.column + "' is not a kernel dimension here");
    }
  }
  for (const auto& [name, value] : config.minvals) {
    const auto col = data.FindColumn(name);
    if (!col || data.spec(*col).role == VariableRole::kIgnored) {
      Fail(Join(Join(path, "minvals"), name),
           "not a treatment or adjustment column");
    }
  }

  std::vector<Bandwidth> thumb;
  if (config.rule_of_thumb) {
    thumb = RuleOfThumbBandwidths(data, *config.rule_of_thumb, config.spread);
  }

  ResolvedKernel out;
  std::vector<DimKernel> dims;
  for (std::size_t p = 0; p < active.size(); ++p) {
    if (!include_treatment && active[p] == data.treatment_index()) continue;
    const std::string& name = data.spec(active[p]).name;
    DimConfig resolved;
    resolved.column = name;
    bool found = false;
    for (const auto& d : config.dims) {
      if (d.column == name) {
        resolved = d;
        found = true;
      }
    }
    if (!found) {
      if (!config.rule_of_thumb) {
        Fail(Join(path, "dims"), "no kernel for column '" + name +
                                     "' (list it in dims or set rule_of_thumb)");
      }
      const Bandwidth& bw = thumb[p];
      resolved.family =
          bw.continuous ? config.family : KernelFamily::kCategorical;
      resolved.param = bw.value;
    }
    try {
      switch (resolved.family) {
        case KernelFamily::kGaussian:
          dims.push_back(DimKernel::Gaussian(resolved.param));
          break;
        case KernelFamily::kUniform:
          dims.push_back(DimKernel::Uniform(resolved.param));
          break;
        case KernelFamily::kCategorical:
          dims.push_back(DimKernel::Categorical(resolved.param));
          break;
      }
    } catch (const ConfigError& e) {
      Fail(Join(path, "dims"), e.what());
    }
    out.dims.push_back(resolved);
    if (config.combiner == Combiner::kMinVariant) {
      auto it = config.minvals.find(name);
      out.minvals.push_back(it == config.minvals.end() ? 0.0 : it->second);
    }
  }
  try {
    out.spec = KernelSpec(std::move(dims), config.combiner, out.minvals);
  } catch (const ConfigError& e) {
    Fail(path, e.what());
  }
  return out;
}

Json KernelToJson(const KernelConfig& config, const ResolvedKernel* resolved) {
  Json j = Json::object();
  if (config.rule_of_thumb) {
    j["rule_of_thumb"] = std::string(ToString(*config.rule_of_thumb));
    j["spread"] = std::string(ToString(config.spread));
    j["family"] = std::string(ToString(config.family));
  }
  j["combiner"] = std::string(ToString(config.combiner));
  const auto& dims = resolved ? resolved->dims : config.dims;
  Json arr = Json::array();
  for (const auto& d : dims) {
    Json dj = Json::object();
    dj["column"] = d.column;
    dj["family"] = std::string(ToString(d.family));
    if (d.family == KernelFamily::kCategorical) {
      dj["c"] = d.param;
    } else {
      dj["half_distance"] = HalfDistanceToJson(d.param);
    }
    arr.push_back(std::move(dj));
  }
  j["dims"] = std::move(arr);
  if (config.combiner == Combiner::kMinVariant) {
    Json mv = Json::object();
    if (resolved) {
      for (std::size_t p = 0; p < resolved->dims.size(); ++p) {
        mv[resolved->dims[p].column] = resolved->minvals[p];
      }
    } else {
      for (const auto& [name, value] : config.minvals) mv[name] = value;
    }
    j["minvals"] = std::move(mv);
  }
  return j;
}

namespace {

Json BoundsToJson(const ShiftBounds& bounds) {
  return std::visit(
      Overloaded{
          [](const BoundsFromData& b) {
            Json j = Json::object();
            j["type"] = "from_data";
            if (!b.group.empty()) j["group"] = b.group;
            return j;
          },
          [](const GlobalBounds& b) {
            Json j = IntervalToJson(b.bounds);
            Json out = Json::object();
            out["type"] = "global";
            for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = it.value();
            return out;
          },
          [](const GroupBounds& b) {
            Json j = Json::object();
            j["type"] = "per_group";
            j["group"] = b.group;
            Json levels = Json::object();
            for (const auto& [code, iv] : b.bounds) {
              levels[FormatLevelKey(code)] = IntervalToJson(iv);
            }
            j["levels"] = std::move(levels);
            return j;
          },
      },
      bounds);
}

// Non-x parameters, shared by scheme and sweep echoes.
void AddSchemeParams(Json& j, const InterventionScheme& s) {
  if (const auto* st = std::get_if<scheme::StochasticShift>(&s)) {
    if (st->sigma) {
      j["sigma"] = *st->sigma;
    } else {
      j["sigma"] = "estimate";
    }
    j["replicates"] = st->replicates;
  } else if (const auto* c = std::get_if<scheme::ConditionalShift>(&s)) {
    j["bounds"] = BoundsToJson(c->bounds);
  }
}

}  // namespace

Json SchemeToJson(const InterventionScheme& s) {
  Json j = Json::object();
  j["variant"] = std::string(SchemeName(s));
  if (auto x = SchemeParameter(s)) j["x"] = *x;
  if (const auto* d = std::get_if<scheme::Dynamic>(&s)) j["rule"] = d->rule.source();
  if (const auto* m = std::get_if<scheme::Mtp>(&s)) j["rule"] = m->rule.source();
  AddSchemeParams(j, s);
  return j;
}

Json RunConfigToJson(const RunConfig& c) {
  Json j = Json::object();
  if (c.data) {
    Json data = Json::object();
    data["path"] = c.data->path.string();
    Json schema = Json::array();
    for (const auto& v : c.data->schema) {
      Json vj = Json::object();
      vj["name"] = v.name;
      vj["kind"] = std::string(ToString(v.kind));
      vj["role"] = std::string(ToString(v.role));
      schema.push_back(std::move(vj));
    }
    data["schema"] = std::move(schema);
    j["data"] = std::move(data);
  }
  if (c.kernel) j["kernel"] = KernelToJson(*c.kernel, nullptr);
  if (c.scheme) j["scheme"] = SchemeToJson(*c.scheme);
  if (c.sweep) {
    Json sw = Json::object();
    sw["family"] = std::string(ToString(c.sweep->family));
    Json grid = Json::array();
    for (double x : c.sweep->grid) grid.push_back(x);
    sw["grid"] = std::move(grid);
    AddSchemeParams(sw, c.sweep->base);
    j["sweep"] = std::move(sw);
  }
  j["mode"] = std::string(ToString(c.mode));
  if (c.mode == RunMode::kEstimatorFocused) {
    Json est = Json::object();
    if (c.estimator.g_kernel) est["g_kernel"] = KernelToJson(*c.estimator.g_kernel, nullptr);
    if (c.estimator.w_kernel) est["w_kernel"] = KernelToJson(*c.estimator.w_kernel, nullptr);
    est["w_max"] = c.estimator.w_max;
    j["estimator"] = std::move(est);
  }
  Json out = Json::object();
  out["format"] = std::string(ToString(c.output.format));
  if (c.output.path) out["path"] = c.output.path->string();
  out["timing"] = c.output.timing;
  j["output"] = std::move(out);
  if (c.flags_threshold) j["flags_threshold"] = *c.flags_threshold;
  j["seed"] = c.seed;
  if (!c.probe.empty()) {
    Json probe = Json::object();
    for (const auto& [k, v] : c.probe) probe[k] = v;
    j["probe"] = std::move(probe);
  }
  if (c.simulate) {
    const auto& s = *c.simulate;
    Json sim = Json::object();
    sim["preset"] = s.preset;
    if (s.n) sim["n"] = *s.n;
    if (s.seed) sim["seed"] = *s.seed;
    if (s.preset == "custom") {
      sim["intercept"] = s.intercept;
      sim["slope"] = s.slope;
      if (s.a_sd) sim["sigma_A"] = *s.a_sd;
      sim["p_L"] = s.p_l;
    }
    if (s.preset == "dimstudy") sim["P_max"] = s.max_dims;
    j["simulate"] = std::move(sim);
  }
  return j;
}

}  // namespace edpdiag::cli
