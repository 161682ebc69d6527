// Copyright 2026 The Authors.
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

#ifndef CEO_ERRORS_H_
#define CEO_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ceo {

enum class ErrorCode {
  kNotPositiveDefinite,
  kNotPositiveSemiDefinite,
  kNotSymmetric,
  kDimensionMismatch,
  kInvalidInstance,
  kInvalidArgument,
  kSingularAllocation,
  kWrongSensorCount,
  kConstraintNotSaturated,
  kAssumptionsViolated,
  kInfeasible,
  kTooManyDegreesOfFreedom,
  kParseError,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception; `code()` lets
// callers (the CLI in particular) map failures to stable exit codes.
class CeoError : public std::runtime_error {
 public:
  CeoError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ceo

#endif  // CEO_ERRORS_H_
