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

#include "agvtwin/error.h"

#include <sstream>
#include <utility>

#include "agvtwin/zone.h"

namespace agvtwin {

const char* ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyMap:
      return "EmptyMap";
    case ErrorCode::kRaggedRows:
      return "RaggedRows";
    case ErrorCode::kIllegalCharacter:
      return "IllegalCharacter";
    case ErrorCode::kOutOfBounds:
      return "OutOfBounds";
    case ErrorCode::kOccupiedEndpoint:
      return "OccupiedEndpoint";
    case ErrorCode::kNotAdjacent:
      return "NotAdjacent";
    case ErrorCode::kUTurnRequested:
      return "UTurnRequested";
    case ErrorCode::kOutOfFloor:
      return "OutOfFloor";
    case ErrorCode::kAgvInZone:
      return "AgvInZone";
    case ErrorCode::kParseError:
      return "ParseError";
    case ErrorCode::kValidationError:
      return "ValidationError";
    case ErrorCode::kIoError:
      return "IoError";
    case ErrorCode::kInvariantViolation:
      return "InvariantViolation";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

UTurnError::UTurnError(std::size_t route_index, const std::string& message)
    : Error(ErrorCode::kUTurnRequested, message), route_index_(route_index) {}

ValidationError::ValidationError(std::string field, const std::string& reason)
    : Error(ErrorCode::kValidationError, field + ": " + reason),
      field_(std::move(field)) {}

std::string ToString(const ZoneId& zone) {
  std::ostringstream os;
  os << zone;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const ZoneId& zone) {
  return os << 'Z' << zone.a << ',' << zone.b;
}

std::optional<Border> SideFacing(const ZoneId& current, const ZoneId& next) {
  for (Border border : kAllBorders) {
    if (Across(current, border) == next) return border;
  }
  return std::nullopt;
}

const char* ToString(Border border) {
  switch (border) {
    case Border::kNorth:
      return "N";
    case Border::kEast:
      return "E";
    case Border::kSouth:
      return "S";
    case Border::kWest:
      return "W";
  }
  return "?";
}

std::optional<Border> BorderFromString(const std::string& text) {
  for (Border border : kAllBorders) {
    if (text == ToString(border)) return border;
  }
  return std::nullopt;
}

std::ostream& operator<<(std::ostream& os, Border border) {
  return os << ToString(border);
}

}  // namespace agvtwin
