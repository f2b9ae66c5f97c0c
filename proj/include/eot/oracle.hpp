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

#ifndef EOT_ORACLE_HPP
#define EOT_ORACLE_HPP

// Reference computations used to validate the solver and the derivative code.
// Nothing here shares an implementation path with sinkhorn.cpp or
// potentials.cpp.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "eot/measures.hpp"
#include "eot/sinkhorn.hpp"

namespace eot::oracle {

/// P = N(0, I_d/2), Q = N(1, I_d/2) where 1 is the all-ones vector.
struct GaussianPairSpec {
  std::size_t d = 1;
  double eps = 1.0;

  std::vector<double> p_mean() const { return std::vector<double>(d, 0.0); }
  std::vector<double> q_mean() const { return std::vector<double>(d, 1.0); }
  static constexpr double variance_scale = 0.5;
};

/// Closed-form entropic cost of the Gaussian pair for the plain squared cost
/// ||x - y||^2 and regularization eps * KL:
///   2d - (eps/2) (d r - d log(1 + r) + d log 2 - d),  r = sqrt(1 + 4/eps^2).
double gaussian_cost(const GaussianPairSpec& spec);

/// The same quantity for the cost scale * ||x - y||^2, using
/// S_{eps}[scale] = scale * S_{eps/scale}[1].
double gaussian_cost(const GaussianPairSpec& spec, double cost_scale);

struct BruteForceResult {
  PotentialPair pair;
  std::size_t iterations = 0;
  double residual = 0.0;
};

/// Extended-precision fixed-point iteration of the optimality conditions,
/// run until both log-marginal residuals are <= 1e-14 or 1e6 sweeps.
/// Requires n * m <= 100. Output is in Normalization::kEqualMeans.
BruteForceResult brute_force_potentials(const DiscreteMeasure& p, const DiscreteMeasure& q, double eps,
                                        double cost_scale = kHalfSquaredCost);

using ScalarField = std::function<long double(std::span<const long double>)>;

/// x -> -eps log sum_j w_j exp((v_j - scale ||x - y_j||^2)/eps), summed
/// directly in long double with no max shift. Valid at moderate magnitudes.
ScalarField naive_extension(const DiscreteMeasure& opposite, std::span<const double> values, double eps,
                            double cost_scale = kHalfSquaredCost);

/// Nested central differences for D^alpha fn(x) with step h on every axis.
/// Throws kUnsupportedOrder for |alpha| > 3.
double finite_difference(const ScalarField& fn, std::span<const double> x, std::span<const int> alpha,
                         double h);

}  // namespace eot::oracle

#endif  // EOT_ORACLE_HPP
