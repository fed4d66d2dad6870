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
#ifndef EDPDIAG_TOOLS_JSON_WRITER_H_
#define EDPDIAG_TOOLS_JSON_WRITER_H_

#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

namespace edpdiag::cli {

using Json = nlohmann::ordered_json;

// Serializes with floating-point numbers printed to 17 significant digits
// (%.17g) so that every double round-trips exactly. Non-finite numbers are
// written as null. `indent` < 0 gives compact output.
void WriteJson(std::ostream& out, const Json& value, int indent = 2);
std::string DumpJson(const Json& value, int indent = 2);

// %.17g formatting of one double.
std::string FormatDouble(double value);

}  // namespace edpdiag::cli

#endif  // EDPDIAG_TOOLS_JSON_WRITER_H_
