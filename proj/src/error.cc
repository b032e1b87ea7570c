// Copyright 2026 The dpsd Authors
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

#include "dpsd/error.h"

namespace dpsd {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyString:
      return "EmptyString";
    case ErrorCode::kInvalidCharacter:
      return "InvalidCharacter";
    case ErrorCode::kLengthMismatch:
      return "LengthMismatch";
    case ErrorCode::kOutOfRange:
      return "OutOfRange";
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
    case ErrorCode::kKExceedsN:
      return "KExceedsN";
    case ErrorCode::kParamMismatch:
      return "ParamMismatch";
    case ErrorCode::kBadMagic:
      return "BadMagic";
    case ErrorCode::kVersionMismatch:
      return "VersionMismatch";
    case ErrorCode::kTruncatedStore:
      return "TruncatedStore";
    case ErrorCode::kVolumeMismatch:
      return "VolumeMismatch";
    case ErrorCode::kMalformedStore:
      return "MalformedStore";
    case ErrorCode::kIo:
      return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::size_t position)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code),
      position_(position) {}

}  // namespace dpsd
