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
#include "json_writer.h"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace edpdiag::cli {

namespace {

void Newline(std::ostream& out, int indent, int depth) {
  if (indent < 0) return;
  out << '\n' << std::string(static_cast<std::size_t>(indent * depth), ' ');
}

void Write(std::ostream& out, const Json& v, int indent, int depth) {
  switch (v.type()) {
    case Json::value_t::null:
    case Json::value_t::discarded:
      out << "null";
      return;
    case Json::value_t::boolean:
      out << (v.get<bool>() ? "true" : "false");
      return;
    case Json::value_t::number_integer:
      out << v.get<std::int64_t>();
      return;
    case Json::value_t::number_unsigned:
      out << v.get<std::uint64_t>();
      return;
    case Json::value_t::number_float: {
      const double d = v.get<double>();
      if (std::isfinite(d)) {
        out << FormatDouble(d);
      } else {
        out << "null";
      }
      return;
    }
    case Json::value_t::string:
    case Json::value_t::binary:
      out << v.dump();
      return;
    case Json::value_t::array: {
      if (v.empty()) {
        out << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool scalars = true;
      for (const auto& e : v) scalars = scalars && e.is_primitive();
      out << '[';
      bool first = true;
      for (const auto& e : v) {
        if (!first) out << (scalars && indent >= 0 ? ", " : ",");
        first = false;
        if (!scalars) Newline(out, indent, depth + 1);
        Write(out, e, indent, depth + 1);
      }
      if (!scalars) Newline(out, indent, depth);
      out << ']';
      return;
    }
    case Json::value_t::object: {
      if (v.empty()) {
        out << "{}";
        return;
      }
      out << '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out << ',';
        first = false;
        Newline(out, indent, depth + 1);
        out << Json(it.key()).dump() << (indent >= 0 ? ": " : ":");
        Write(out, it.value(), indent, depth + 1);
      }
      Newline(out, indent, depth);
      out << '}';
      return;
    }
  }
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void WriteJson(std::ostream& out, const Json& value, int indent) {
  Write(out, value, indent, 0);
}

std::string DumpJson(const Json& value, int indent) {
  std::ostringstream out;
  WriteJson(out, value, indent);
  return out.str();
}

}  // namespace edpdiag::cli
