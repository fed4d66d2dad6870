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
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "commands.h"
#include "config.h"
#include "edpdiag/error.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitCompute = 4;

int ExitCode(edpdiag::ErrorCategory category) {
  switch (category) {
    case edpdiag::ErrorCategory::kConfig:
      return kExitConfig;
    case edpdiag::ErrorCategory::kData:
      return kExitData;
    case edpdiag::ErrorCategory::kCompute:
      return kExitCompute;
  }
  return kExitCompute;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace edpdiag::cli;

  CLI::App app{"edpdiag: effective data points, a kernel-based sparsity diagnostic"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  std::string config_path;
  std::string output;
  std::uint64_t seed = 0;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  struct Command {
    const char* name;
    const char* help;
  };
  const Command commands[] = {
      {"diagnose", "Apply one intervention and compute EDP per observation"},
      {"sweep", "Compute EDP along a grid of intervention values"},
      {"simulate", "Generate a simulated dataset as CSV"},
      {"kernel-info", "Show per-observation kernel weights at a probe point"},
  };
  std::vector<CLI::App*> subs;
  std::vector<CLI::Option*> seed_opts;
  std::vector<CLI::Option*> output_opts;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", config_path, "Run configuration (JSON)")
        ->required();
    output_opts.push_back(
        sub->add_option("--output", output, "Output path (overrides config)"));
    sub->add_option("--threads", threads, "Worker threads")
        ->check(CLI::PositiveNumber);
    seed_opts.push_back(
        sub->add_option("--seed", seed, "Random seed (overrides config)"));
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    RunConfig config = LoadRunConfig(config_path);
    Overrides overrides;
    overrides.threads = threads;
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      if (seed_opts[i]->count() > 0) overrides.seed = seed;
      if (output_opts[i]->count() > 0) overrides.output = output;
    }
    ApplyOverrides(config, overrides);

    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "diagnose") {
      RunDiagnose(config, threads, std::cout, std::cerr);
    } else if (name == "sweep") {
      RunSweep(config, threads, std::cout, std::cerr);
    } else if (name == "simulate") {
      RunSimulate(config, std::cout, std::cerr);
    } else {
      RunKernelInfo(config, std::cout, std::cerr);
    }
  } catch (const edpdiag::Error& e) {
    std::cerr << "edpdiag: " << e.what() << "\n";
    return ExitCode(e.category());
  } catch (const std::exception& e) {
    std::cerr << "edpdiag: " << e.what() << "\n";
    return kExitCompute;
  }
  return 0;
}
