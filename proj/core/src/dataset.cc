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
#include "edpdiag/dataset.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "edpdiag/error.h"

namespace edpdiag {

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Splits one CSV record. Double-quoted fields may contain commas and "" as an
// escaped quote; numeric fields are expected unquoted.
std::vector<std::string> SplitRecord(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.emplace_back(Trim(current));
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  fields.emplace_back(Trim(current));
  return fields;
}

bool IsMissing(std::string_view cell) {
  return cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan" ||
         cell == "N/A" || cell == ".";
}

std::string CellLocation(std::size_t row, std::string_view column) {
  std::ostringstream out;
  out << "row " << row << ", column '" << column << "'";
  return out.str();
}

std::string QuoteIfNeeded(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

std::string FormatShortest(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

}  // namespace

std::string_view ToString(VariableKind kind) {
  switch (kind) {
    case VariableKind::kContinuous:
      return "continuous";
    case VariableKind::kBinary:
      return "binary";
    case VariableKind::kCategorical:
      return "categorical";
  }
  return "unknown";
}

std::string_view ToString(VariableRole role) {
  switch (role) {
    case VariableRole::kTreatment:
      return "treatment";
    case VariableRole::kAdjustment:
      return "adjustment";
    case VariableRole::kIgnored:
      return "ignored";
  }
  return "unknown";
}

VariableKind ParseVariableKind(std::string_view name) {
  if (name == "continuous") return VariableKind::kContinuous;
  if (name == "binary") return VariableKind::kBinary;
  if (name == "categorical") return VariableKind::kCategorical;
  throw ConfigError("unknown variable kind '" + std::string(name) +
                    "' (expected continuous, binary or categorical)");
}

VariableRole ParseVariableRole(std::string_view name) {
  if (name == "treatment") return VariableRole::kTreatment;
  if (name == "adjustment") return VariableRole::kAdjustment;
  if (name == "ignored") return VariableRole::kIgnored;
  throw ConfigError("unknown variable role '" + std::string(name) +
                    "' (expected treatment, adjustment or ignored)");
}

void ValidateSchema(const std::vector<VariableSpec>& specs) {
  std::unordered_set<std::string> seen;
  int treatments = 0;
  for (const auto& spec : specs) {
    if (spec.name.empty()) throw DataError("variable with empty name");
    if (!seen.insert(spec.name).second) {
      throw DataError("duplicate variable name '" + spec.name + "'");
    }
    if (spec.role == VariableRole::kTreatment) ++treatments;
  }
  if (treatments == 0) throw DataError("no treatment column in schema");
  if (treatments > 1) {
    throw DataError("more than one treatment column in schema");
  }
}

Dataset::Dataset(std::vector<VariableSpec> specs,
                 std::vector<std::vector<double>> columns,
                 std::vector<std::vector<std::string>> levels)
    : specs_(std::move(specs)),
      columns_(std::move(columns)),
      levels_(std::move(levels)) {
  ValidateSchema(specs_);
  if (columns_.size() != specs_.size()) {
    throw DataError("dataset has " + std::to_string(columns_.size()) +
                    " columns but schema has " +
                    std::to_string(specs_.size()));
  }
  levels_.resize(specs_.size());
  rows_ = columns_.empty() ? 0 : columns_.front().size();
  if (rows_ == 0) throw DataError("dataset has no rows");

  for (std::size_t c = 0; c < specs_.size(); ++c) {
    const auto& spec = specs_[c];
    const auto& col = columns_[c];
    if (col.size() != rows_) {
      throw DataError("column '" + spec.name + "' has " +
                      std::to_string(col.size()) + " values, expected " +
                      std::to_string(rows_));
    }
    for (std::size_t r = 0; r < rows_; ++r) {
      const double v = col[r];
      if (!std::isfinite(v)) {
        throw DataError("missing value at " + CellLocation(r + 1, spec.name));
      }
      if (spec.kind == VariableKind::kBinary && v != 0.0 && v != 1.0) {
        throw DataError("binary value other than 0/1 at " +
                        CellLocation(r + 1, spec.name));
      }
      if (spec.kind == VariableKind::kCategorical &&
          (v < 0.0 || v != std::floor(v))) {
        throw DataError("categorical code must be a non-negative integer at " +
                        CellLocation(r + 1, spec.name));
      }
    }
    switch (spec.role) {
      case VariableRole::kTreatment:
        treatment_ = c;
        active_.push_back(c);
        break;
      case VariableRole::kAdjustment:
        adjustment_.push_back(c);
        active_.push_back(c);
        break;
      case VariableRole::kIgnored:
        break;
    }
  }
}

std::vector<double> Dataset::row(std::size_t r) const {
  std::vector<double> out(cols());
  for (std::size_t c = 0; c < cols(); ++c) out[c] = columns_[c][r];
  return out;
}

std::optional<std::size_t> Dataset::FindColumn(std::string_view name) const {
  for (std::size_t c = 0; c < specs_.size(); ++c) {
    if (specs_[c].name == name) return c;
  }
  return std::nullopt;
}

std::size_t Dataset::ColumnIndex(std::string_view name) const {
  if (auto c = FindColumn(name)) return *c;
  throw DataError("no column named '" + std::string(name) + "'");
}

Dataset Dataset::WithTreatment(std::vector<double> treatment) const {
  auto columns = columns_;
  columns[treatment_] = std::move(treatment);
  return Dataset(specs_, std::move(columns), levels_);
}

Dataset ParseCsv(std::string_view text,
                 const std::vector<VariableSpec>& schema) {
  ValidateSchema(schema);

  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  // Trailing blank lines are not records.
  while (!lines.empty() && Trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw DataError("CSV input is empty (no header row)");

  std::string_view header_line = lines.front();
  if (header_line.substr(0, 3) == "\xEF\xBB\xBF") header_line.remove_prefix(3);
  const auto header = SplitRecord(header_line);

  // file column -> schema index
  std::vector<std::size_t> mapping(header.size());
  std::unordered_set<std::string> seen;
  for (std::size_t f = 0; f < header.size(); ++f) {
    if (!seen.insert(header[f]).second) {
      throw DataError("duplicate column '" + header[f] + "' in CSV header");
    }
    bool found = false;
    for (std::size_t s = 0; s < schema.size(); ++s) {
      if (schema[s].name == header[f]) {
        mapping[f] = s;
        found = true;
        break;
      }
    }
    if (!found) {
      throw DataError("CSV column '" + header[f] + "' is not in the schema");
    }
  }
  for (const auto& spec : schema) {
    if (!seen.contains(spec.name)) {
      throw DataError("schema column '" + spec.name +
                      "' is missing from the CSV header");
    }
  }

  std::vector<std::vector<double>> columns(schema.size());
  std::vector<std::vector<std::string>> levels(schema.size());
  std::vector<std::unordered_map<std::string, double>> codes(schema.size());

  for (std::size_t l = 1; l < lines.size(); ++l) {
    const std::size_t row = l;  // 1-based data row
    const auto fields = SplitRecord(lines[l]);
    if (fields.size() != header.size()) {
      throw DataError("row " + std::to_string(row) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(header.size()));
    }
    for (std::size_t f = 0; f < fields.size(); ++f) {
      const std::size_t s = mapping[f];
      const auto& spec = schema[s];
      const std::string& cell = fields[f];
      if (IsMissing(cell)) {
        throw DataError("missing value at " + CellLocation(row, spec.name));
      }
      double value = 0.0;
      switch (spec.kind) {
        case VariableKind::kContinuous: {
          const char* first = cell.data();
          const char* last = cell.data() + cell.size();
          if (*first == '+') ++first;
          auto [ptr, ec] = std::from_chars(first, last, value);
          if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
            throw DataError("cannot parse '" + cell + "' as a number at " +
                            CellLocation(row, spec.name));
          }
          break;
        }
        case VariableKind::kBinary:
          if (cell == "0") {
            value = 0.0;
          } else if (cell == "1") {
            value = 1.0;
          } else {
            throw DataError("binary value must be 0 or 1, got '" + cell +
                            "' at " + CellLocation(row, spec.name));
          }
          break;
        case VariableKind::kCategorical: {
          auto [it, inserted] =
              codes[s].try_emplace(cell, static_cast<double>(levels[s].size()));
          if (inserted) levels[s].push_back(cell);
          value = it->second;
          break;
        }
      }
      columns[s].push_back(value);
    }
  }
  if (columns.front().empty()) throw DataError("CSV input has no data rows");
  return Dataset(schema, std::move(columns), std::move(levels));
}

Dataset ReadCsv(const std::filesystem::path& path,
                const std::vector<VariableSpec>& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open data file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return ParseCsv(buffer.str(), schema);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void WriteCsv(std::ostream& out, const Dataset& data) {
  for (std::size_t c = 0; c < data.cols(); ++c) {
    if (c) out << ',';
    out << QuoteIfNeeded(data.spec(c).name);
  }
  out << '\n';
  for (std::size_t r = 0; r < data.rows(); ++r) {
    for (std::size_t c = 0; c < data.cols(); ++c) {
      if (c) out << ',';
      const double v = data.at(r, c);
      switch (data.spec(c).kind) {
        case VariableKind::kContinuous:
          out << FormatShortest(v);
          break;
        case VariableKind::kBinary:
          out << (v != 0.0 ? '1' : '0');
          break;
        case VariableKind::kCategorical: {
          const auto& labels = data.levels(c);
          const auto code = static_cast<std::size_t>(v);
          if (code < labels.size()) {
            out << QuoteIfNeeded(labels[code]);
          } else {
            out << FormatShortest(v);
          }
          break;
        }
      }
    }
    out << '\n';
  }
}

void WriteCsv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  WriteCsv(out, data);
}

}  // namespace edpdiag
