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

#ifndef EOT_SRC_NUMERIC_UTIL_HPP
#define EOT_SRC_NUMERIC_UTIL_HPP

#include <cmath>
#include <span>

namespace eot::detail {

// Neumaier summation.
inline double compensated_sum(std::span<const double> values) noexcept {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

inline double weighted_mean(std::span<const double> values, std::span<const double> weights) noexcept {
  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i] * weights[i];
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

}  // namespace eot::detail

#endif  // EOT_SRC_NUMERIC_UTIL_HPP
