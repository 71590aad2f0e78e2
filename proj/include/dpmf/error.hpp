// Copyright 2026 The dpmf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace dpmf {

enum class ErrorCode {
  kParse,
  kEmptyDataset,
  kEmptyAfterConditioning,
  kUndefinedDensity,
  kInvalidDimension,
  kIndexOutOfRange,
  kDimensionMismatch,
  kInvalidParameter,
  kInvalidOrder,
  kUndefinedOptimum,
  kUndefinedRmse,
  kDivergence,
  kIo,
};

inline const char* ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kEmptyDataset: return "empty dataset";
    case ErrorCode::kEmptyAfterConditioning: return "empty after conditioning";
    case ErrorCode::kUndefinedDensity: return "undefined density";
    case ErrorCode::kInvalidDimension: return "invalid dimension";
    case ErrorCode::kIndexOutOfRange: return "index out of range";
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kInvalidParameter: return "invalid parameter";
    case ErrorCode::kInvalidOrder: return "invalid Renyi order";
    case ErrorCode::kUndefinedOptimum: return "undefined optimum";
    case ErrorCode::kUndefinedRmse: return "undefined rmse";
    case ErrorCode::kDivergence: return "divergence";
    case ErrorCode::kIo: return "io error";
  }
  return "unknown error";
}

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ToString(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Thrown by parse_ratings; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(ErrorCode::kParse,
              "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Thrown by the trainer when the cost stops being finite.
class DivergenceError : public Error {
 public:
  explicit DivergenceError(std::size_t iteration)
      : Error(ErrorCode::kDivergence,
              "cost became non-finite at iteration " +
                  std::to_string(iteration)),
        iteration_(iteration) {}

  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

namespace detail {

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void Require(bool condition, ErrorCode code, const char* message) {
  if (!condition) Fail(code, message);
}

}  // namespace detail
}  // namespace dpmf
