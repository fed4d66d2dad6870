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
// Typed tabular dataset: one treatment column, an adjustment set and any
// number of ignored columns. Values are stored column-major as doubles;
// categorical levels are dense integer codes in first-appearance order.

#ifndef EDPDIAG_DATASET_H_
#define EDPDIAG_DATASET_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace edpdiag {

enum class VariableKind { kContinuous, kBinary, kCategorical };
enum class VariableRole { kTreatment, kAdjustment, kIgnored };

std::string_view ToString(VariableKind kind);
std::string_view ToString(VariableRole role);
// Throw ConfigError on unknown names.
VariableKind ParseVariableKind(std::string_view name);
VariableRole ParseVariableRole(std::string_view name);

struct VariableSpec {
  std::string name;
  VariableKind kind = VariableKind::kContinuous;
  VariableRole role = VariableRole::kAdjustment;

  bool operator==(const VariableSpec&) const = default;
};

// Checks the schema-level invariants: unique names and exactly one treatment.
// Throws DataError.
void ValidateSchema(const std::vector<VariableSpec>& specs);

class Dataset {
 public:
  // `columns[c]` holds every value of variable `specs[c]`. `levels[c]` are
  // the labels of categorical codes (may be empty for other kinds, or the
  // whole vector may be empty when no labels are known). Throws DataError
  // if any invariant is violated.
  Dataset(std::vector<VariableSpec> specs,
          std::vector<std::vector<double>> columns,
          std::vector<std::vector<std::string>> levels = {});

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return specs_.size(); }

  const std::vector<VariableSpec>& specs() const { return specs_; }
  const VariableSpec& spec(std::size_t col) const { return specs_[col]; }

  std::span<const double> column(std::size_t col) const {
    return columns_[col];
  }
  double at(std::size_t row, std::size_t col) const {
    return columns_[col][row];
  }
  std::vector<double> row(std::size_t row) const;

  // Labels of categorical codes; empty when unknown.
  const std::vector<std::string>& levels(std::size_t col) const {
    return levels_[col];
  }

  std::size_t treatment_index() const { return treatment_; }
  // Non-ignored columns in schema order. These are the kernel dimensions.
  const std::vector<std::size_t>& active_columns() const { return active_; }
  const std::vector<std::size_t>& adjustment_columns() const {
    return adjustment_;
  }

  std::optional<std::size_t> FindColumn(std::string_view name) const;
  // Throws DataError naming the column when absent.
  std::size_t ColumnIndex(std::string_view name) const;

  // Copy of this dataset with the treatment column replaced.
  Dataset WithTreatment(std::vector<double> treatment) const;

 private:
  std::vector<VariableSpec> specs_;
  std::vector<std::vector<double>> columns_;
  std::vector<std::vector<std::string>> levels_;
  std::size_t rows_ = 0;
  std::size_t treatment_ = 0;
  std::vector<std::size_t> active_;
  std::vector<std::size_t> adjustment_;
};

// Reads a comma-separated file with a header row. Columns are matched to the
// schema by name; the dataset keeps schema order. Throws DataError for a
// missing file, duplicate or unknown columns, unparseable cells (with row and
// column) and missing values ("", "NA", "NaN", ".").
Dataset ReadCsv(const std::filesystem::path& path,
                const std::vector<VariableSpec>& schema);
Dataset ParseCsv(std::string_view text, const std::vector<VariableSpec>& schema);

// Writes the dataset as CSV. Continuous values use the shortest decimal form
// that round-trips exactly; categorical codes are written as their labels.
void WriteCsv(std::ostream& out, const Dataset& data);
void WriteCsv(const std::filesystem::path& path, const Dataset& data);

}  // namespace edpdiag

#endif  // EDPDIAG_DATASET_H_
