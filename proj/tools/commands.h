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
// Subcommands of the edpdiag tool. Each takes a parsed RunConfig, writes its
// artifact (envelope, CSV or datasets) and prints a human-readable summary.

#ifndef EDPDIAG_TOOLS_COMMANDS_H_
#define EDPDIAG_TOOLS_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string_view>

#include "config.h"
#include "json_writer.h"

namespace edpdiag::cli {

inline constexpr std::string_view kSchemaVersion = "1.0";
inline constexpr std::string_view kToolVersion = "0.1.0";

struct Overrides {
  std::optional<std::filesystem::path> output;
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

// Command-line flags take precedence over the config file.
void ApplyOverrides(RunConfig& config, const Overrides& overrides);

// Each returns the result envelope after writing it to output.path (or to
// `out` when no path is set, with the summary going to `log` instead).
Json RunDiagnose(const RunConfig& config, int threads, std::ostream& out,
                 std::ostream& log);
Json RunSweep(const RunConfig& config, int threads, std::ostream& out,
              std::ostream& log);
Json RunKernelInfo(const RunConfig& config, std::ostream& out,
                   std::ostream& log);

// Writes the simulated dataset (or the dimension-study directory).
void RunSimulate(const RunConfig& config, std::ostream& out, std::ostream& log);

// Flat CSV view of an envelope: grid_x,observation_index,mode,value.
void WriteEnvelopeCsv(std::ostream& out, const Json& envelope);

}  // namespace edpdiag::cli

#endif  // EDPDIAG_TOOLS_COMMANDS_H_
