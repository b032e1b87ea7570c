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

#ifndef DPSD_ERROR_H_
#define DPSD_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dpsd {

enum class ErrorCode {
  kEmptyString,
  kInvalidCharacter,
  kLengthMismatch,
  kOutOfRange,
  kInvalidArgument,
  kKExceedsN,
  kParamMismatch,
  kBadMagic,
  kVersionMismatch,
  kTruncatedStore,
  kVolumeMismatch,
  kMalformedStore,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure in the library is reported as a dpsd::Error carrying a
// machine-checkable code. `position()` is meaningful for kInvalidCharacter
// (1-indexed character position) and zero otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::size_t position = 0);

  ErrorCode code() const noexcept { return code_; }
  std::size_t position() const noexcept { return position_; }

 private:
  ErrorCode code_;
  std::size_t position_;
};

}  // namespace dpsd

#endif  // DPSD_ERROR_H_
