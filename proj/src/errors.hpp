// Copyright 2026 the qbattery authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qb {

// Error categories; the C API maps these onto integer status codes.
enum class ErrorCode {
    invalid_argument = 4,
    dimension_mismatch = 5,
    index_out_of_range = 6,
    resource_limit = 7,
    algebra_violation = 8,
    inequality_violation = 9,
    geometry = 10,
    numerical = 11,
    degenerate = 12,
    parse = 13,
    config = 2,
    verify = 1,
    sweep = 3,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

struct DimensionError : Error {
    explicit DimensionError(const std::string& w) : Error(ErrorCode::dimension_mismatch, w) {}
};
struct IndexError : Error {
    explicit IndexError(const std::string& w) : Error(ErrorCode::index_out_of_range, w) {}
};
struct ResourceLimitError : Error {
    explicit ResourceLimitError(const std::string& w) : Error(ErrorCode::resource_limit, w) {}
};
struct AlgebraViolationError : Error {
    explicit AlgebraViolationError(const std::string& w) : Error(ErrorCode::algebra_violation, w) {}
};
struct InequalityViolationError : Error {
    explicit InequalityViolationError(const std::string& w)
        : Error(ErrorCode::inequality_violation, w) {}
};
struct GeometryError : Error {
    explicit GeometryError(const std::string& w) : Error(ErrorCode::geometry, w) {}
};
struct NumericalError : Error {
    explicit NumericalError(const std::string& w) : Error(ErrorCode::numerical, w) {}
};
struct DegenerateError : Error {
    explicit DegenerateError(const std::string& w) : Error(ErrorCode::degenerate, w) {}
};
struct ParseError : Error {
    ParseError(const std::string& w, long line = -1) : Error(ErrorCode::parse, w), line_(line) {}
    long line() const { return line_; }

  private:
    long line_;
};
struct ConfigError : Error {
    explicit ConfigError(const std::string& w) : Error(ErrorCode::config, w) {}
};
struct SweepError : Error {
    explicit SweepError(const std::string& w) : Error(ErrorCode::sweep, w) {}
};
struct InvalidArgumentError : Error {
    explicit InvalidArgumentError(const std::string& w)
        : Error(ErrorCode::invalid_argument, w) {}
};

}  // namespace qb
