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

#ifndef EOT_SINKHORN_HPP
#define EOT_SINKHORN_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "eot/error.hpp"
#include "eot/measures.hpp"

namespace eot {

/// Ground cost c(x, y) = scale * ||x - y||^2. The library-wide convention is
/// scale = 1/2; scale = 1 is the plain squared Euclidean cost.
inline constexpr double kHalfSquaredCost = 0.5;
inline constexpr double kSquaredCost = 1.0;

struct SolverConfig {
  double eps = 1.0;
  double tol = 1e-9;
  std::size_t max_iter = 100000;
  double cost_scale = kHalfSquaredCost;
  /// Cost matrices larger than this are recomputed on the fly each sweep.
  std::size_t dense_limit_bytes = std::size_t{256} << 20;

  /// Throws kNonPositiveEps / kInvalidArgument on bad fields.
  void validate() const;
};

enum class Normalization {
  kRaw,
  kEqualMeans,  // <f, a> = <g, b>
  kZeroMeanG,   // <g, b> = 0
};

/// Dual potentials evaluated on the supports of P (f) and Q (g).
struct PotentialPair {
  std::vector<double> f;
  std::vector<double> g;
  double eps = 1.0;
  double cost_scale = kHalfSquaredCost;
  Normalization normalization = Normalization::kRaw;
};

/// Dense n x m coupling, row-major.
struct TransportPlan {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> entries;

  double operator()(std::size_t i, std::size_t j) const noexcept { return entries[i * cols + j]; }
  std::vector<double> row_sums() const;
  std::vector<double> col_sums() const;
};

struct SolveReport {
  std::size_t iterations = 0;
  double final_residual = 0.0;
  double dual_value = 0.0;
  bool converged = false;
};

struct SolveResult {
  PotentialPair pair;
  SolveReport report;
};

/// Raised by solve() when max_iter is exhausted. The last iterate and its
/// report stay available for diagnostics.
class NotConvergedError : public Error {
 public:
  NotConvergedError(const std::string& message, SolveResult partial)
      : Error(ErrorCode::kNotConverged, message), partial_(std::move(partial)) {}

  const SolveResult& partial() const noexcept { return partial_; }

 private:
  SolveResult partial_;
};

/// Log-domain Sinkhorn for the entropic dual, started from g = 0.
///
/// Each sweep updates f then g:
///   f_i <- -eps * log sum_j b_j exp((g_j - c_ij) / eps)
///   g_j <- -eps * log sum_i a_i exp((f_i - c_ij) / eps)
/// and stops once the sup-norm of the log column-marginal ratio of the
/// (f, g_previous) coupling, max_j |g_j - g_previous_j| / eps, is at most
/// cfg.tol. The returned pair is shifted to Normalization::kEqualMeans.
SolveResult solve(const DiscreteMeasure& p, const DiscreteMeasure& q, const SolverConfig& cfg);

/// <f,a> + <g,b> - eps * sum_ij a_i b_j exp((f_i + g_j - c_ij)/eps) + eps.
double dual_objective(const DiscreteMeasure& p, const DiscreteMeasure& q, const PotentialPair& pair);

/// Sup-norm over rows and columns of |log(marginal of the implied plan / weight)|.
/// Zero-weight atoms are ignored.
double marginal_residual(const DiscreteMeasure& p, const DiscreteMeasure& q, const PotentialPair& pair);

/// <f,a> + <g,b>, the entropic cost at optimality. Throws kNotOptimal when the
/// marginal residual exceeds 10 * tol.
double cost(const DiscreteMeasure& p, const DiscreteMeasure& q, const PotentialPair& pair,
            double tol = 1e-9);

/// pi_ij = a_i b_j exp((f_i + g_j - c_ij)/eps).
TransportPlan plan(const DiscreteMeasure& p, const DiscreteMeasure& q, const PotentialPair& pair);

/// sum pi_ij c_ij + eps * sum pi_ij log(pi_ij / (a_i b_j)), with 0 log 0 = 0.
double primal_cost(const DiscreteMeasure& p, const DiscreteMeasure& q, const TransportPlan& plan,
                   double eps, double cost_scale = kHalfSquaredCost);

/// Shifts (f + c, g - c) so that the requested convention holds.
/// kRaw is rejected with kInvalidArgument.
PotentialPair normalize(const PotentialPair& pair, const DiscreteMeasure& p, const DiscreteMeasure& q,
                        Normalization convention);

/// solve() followed by cost().
double entropic_cost(const DiscreteMeasure& p, const DiscreteMeasure& q, const SolverConfig& cfg);

}  // namespace eot

#endif  // EOT_SINKHORN_HPP
