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
// Exception types shared by every edpdiag module. The category decides the
// process exit code of the command-line tool.

#ifndef EDPDIAG_ERROR_H_
#define EDPDIAG_ERROR_H_

#include <stdexcept>
#include <string>

namespace edpdiag {

enum class ErrorCategory { kConfig, kData, kCompute };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

// Invalid user configuration (bad field value, inconsistent options).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message)
      : Error(ErrorCategory::kConfig, message) {}
};

// Input data that cannot be ingested or violates a dataset invariant.
class DataError : public Error {
 public:
  explicit DataError(const std::string& message)
      : Error(ErrorCategory::kData, message) {}
};

// Failure while computing a result from otherwise valid inputs.
class ComputeError : public Error {
 public:
  explicit ComputeError(const std::string& message)
      : Error(ErrorCategory::kCompute, message) {}
};

}  // namespace edpdiag

#endif  // EDPDIAG_ERROR_H_
