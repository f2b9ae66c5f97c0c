/*
 * Copyright 2026 The eot Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef EOT_ERROR_HPP
#define EOT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace eot {

/// Failure categories shared by every module. The numeric values are part of
/// the C ABI (see eot.h) and must not be renumbered.
enum class ErrorCode : int {
  kMalformedFile = 1,
  kNonSimplexWeights = 2,
  kEmptySupport = 3,
  kInvalidArgument = 4,
  kNonPositiveEps = 5,
  kDimensionMismatch = 6,
  kNotConverged = 7,
  kNotOptimal = 8,
  kNegativeEntry = 9,
  kUnsupportedOrder = 10,
  kWrongNormalization = 11,
  kOutOfRange = 12,
  kIoError = 13,
  kConfigError = 14,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace eot

#endif  // EOT_ERROR_HPP
