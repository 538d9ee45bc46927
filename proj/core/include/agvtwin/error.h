// Copyright 2026 The agvtwin Authors
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

#ifndef AGVTWIN_ERROR_H_
#define AGVTWIN_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace agvtwin {

enum class ErrorCode {
  kEmptyMap,
  kRaggedRows,
  kIllegalCharacter,
  kOutOfBounds,
  kOccupiedEndpoint,
  kNotAdjacent,
  kUTurnRequested,
  kOutOfFloor,
  kAgvInZone,
  kParseError,
  kValidationError,
  kIoError,
  kInvariantViolation,
};

const char* ToString(ErrorCode code);

// Every recoverable failure in the library is reported as an Error carrying
// a machine-checkable code. Non-error outcomes (no path, unresolved
// conflicts, deadlock) are ordinary return values instead.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// A compiled route asked for an exit through the entry border.
class UTurnError : public Error {
 public:
  UTurnError(std::size_t route_index, const std::string& message);

  std::size_t route_index() const { return route_index_; }

 private:
  std::size_t route_index_;
};

// Scenario validation failure naming the offending field.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& reason);

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace agvtwin

#endif  // AGVTWIN_ERROR_H_
