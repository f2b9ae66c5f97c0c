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

#include "eot/error.hpp"

namespace eot {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kMalformedFile: return "MalformedFile";
    case ErrorCode::kNonSimplexWeights: return "NonSimplexWeights";
    case ErrorCode::kEmptySupport: return "EmptySupport";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNonPositiveEps: return "NonPositiveEps";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNotConverged: return "NotConverged";
    case ErrorCode::kNotOptimal: return "NotOptimal";
    case ErrorCode::kNegativeEntry: return "NegativeEntry";
    case ErrorCode::kUnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::kWrongNormalization: return "WrongNormalization";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace eot
