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

#ifndef EOT_TEST_SUPPORT_HPP
#define EOT_TEST_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "eot/measures.hpp"
#include "eot/rng.hpp"

namespace eot::testing {

// Points uniform on [0,1]^d, weights uniform on the simplex (normalized
// exponentials), all drawn from one seeded stream.
inline DiscreteMeasure random_measure(SplitMix64& rng, std::size_t n, std::size_t d) {
  std::vector<double> pts(n * d);
  for (double& v : pts) v = rng.uniform();
  std::vector<double> w(n);
  double total = 0.0;
  for (double& v : w) {
    v = -std::log(rng.uniform_open_zero());
    total += v;
  }
  for (double& v : w) v /= total;
  // Absorb rounding so the simplex check sees an exact sum.
  double head = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) head += w[i];
  w[n - 1] = 1.0 - head;
  return DiscreteMeasure(std::move(pts), d, std::move(w));
}

struct Instance {
  DiscreteMeasure p;
  DiscreteMeasure q;
  std::size_t d;
  double eps;
};

// The i-th instance of a reproducible family: sizes in [2, 10], d in {1,2,3},
// eps in {0.5, 1, 2}.
inline Instance random_instance(std::uint64_t seed, std::size_t i) {
  SplitMix64 rng(SeedSpec{seed, i});
  const std::size_t d = 1 + i % 3;
  const double eps_choices[] = {0.5, 1.0, 2.0};
  const double eps = eps_choices[(i / 3) % 3];
  const std::size_t n = 2 + rng.next() % 9;
  const std::size_t m = 2 + rng.next() % 9;
  DiscreteMeasure p = random_measure(rng, n, d);
  DiscreteMeasure q = random_measure(rng, m, d);
  return {std::move(p), std::move(q), d, eps};
}

inline double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace eot::testing

#endif  // EOT_TEST_SUPPORT_HPP
