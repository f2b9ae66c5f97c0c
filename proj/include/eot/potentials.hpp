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

#ifndef EOT_POTENTIALS_HPP
#define EOT_POTENTIALS_HPP

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "eot/measures.hpp"
#include "eot/sinkhorn.hpp"

namespace eot {

using MultiIndex = std::vector<int>;

/// Highest derivative order served by the cumulant machinery.
inline constexpr int kMaxDerivativeOrder = 6;

/// All multi-indices in N^d with |alpha| == order, lexicographically
/// descending: (2,0), (1,1), (0,2).
std::vector<MultiIndex> multi_indices_of_order(std::size_t d, int order);

/// Orders 0..max_order concatenated (graded lexicographic).
std::vector<MultiIndex> graded_multi_indices(std::size_t d, int max_order);

enum class PotentialSide { kF, kG };

/// Raw mixed moments E[y^beta] of the conditional law at one point, keyed by
/// beta. The conditional law puts mass proportional to
/// w_j exp((v_j - c(x, y_j)) / eps) on the opposite support.
struct MomentTable {
  std::size_t dim = 0;
  int max_order = 0;
  std::map<MultiIndex, double> moments;

  double at(const MultiIndex& beta) const { return moments.at(beta); }
};

/// A dual potential extended to all of R^d through the optimality condition
///   f(x) = -eps log sum_j b_j exp((g_j - c(x, y_j)) / eps)
/// (and symmetrically for g). Holds its own copy of the opposite support.
class ExtendedPotential {
 public:
  ExtendedPotential(const PotentialPair& pair, const DiscreteMeasure& p, const DiscreteMeasure& q,
                    PotentialSide side);

  PotentialSide side() const noexcept { return side_; }
  std::size_t dim() const noexcept { return dim_; }
  double eps() const noexcept { return eps_; }
  double cost_scale() const noexcept { return cost_scale_; }

  double value(std::span<const double> x) const;

  /// Requires eps == 1 and the half squared cost; 1 <= max_order <= 6.
  MomentTable conditional_moments(std::span<const double> x, int max_order) const;

  /// D^alpha of the extended potential. |alpha| == 0 returns value(x).
  /// Same preconditions as conditional_moments.
  double derivative(std::span<const double> x, std::span<const int> alpha) const;

  /// Several derivatives at one point, sharing the conditional law.
  void derivatives(std::span<const double> x, std::span<const MultiIndex> alphas,
                   std::span<double> out) const;

 private:
  void require_unit_scale() const;
  std::vector<double> conditional_weights(std::span<const double> x) const;

  PotentialSide side_;
  std::size_t dim_;
  double eps_;
  double cost_scale_;
  std::vector<double> support_;  // opposite measure, row-major
  std::vector<double> log_mass_; // log w_j + v_j / eps
};

/// Field with derivatives, evaluated at x for every requested multi-index.
using DerivativeField =
    std::function<void(std::span<const double> x, std::span<const MultiIndex> alphas, std::span<double> out)>;

DerivativeField as_field(ExtendedPotential potential);
DerivativeField difference(DerivativeField a, DerivativeField b);
DerivativeField scaled(DerivativeField a, double factor);
DerivativeField sum(DerivativeField a, DerivativeField b);

struct HolderOrder {
  int s = 1;
  /// floor(d/2) + 1.
  static HolderOrder default_for(std::size_t d) { return HolderOrder{static_cast<int>(d / 2) + 1}; }
};

struct GridSpec {
  CompactDomain domain;
  std::size_t points_per_axis = 41;

  /// 41 points per axis for d <= 2, 21 for d == 3.
  static GridSpec default_for(CompactDomain domain);
  std::size_t size() const;
  /// Row-major coordinates of grid point `index` (first axis slowest).
  void point(std::size_t index, std::span<double> out) const;
};

struct HolderNormEstimate {
  double value = 0.0;
  HolderOrder order;
  std::size_t grid_points = 0;
  /// Grid sup of |D^alpha|, aligned with graded_multi_indices(d, s).
  std::vector<double> sup_terms;

  double sup_norm() const { return sup_terms.empty() ? 0.0 : sup_terms.front(); }
};

/// sum_{i <= s} sum_{|alpha| = i} max over grid of |D^alpha field|.
/// Throws kUnsupportedOrder for s > 6 and kInvalidArgument for d > 3.
HolderNormEstimate holder_norm(const DerivativeField& field, std::size_t dim, HolderOrder order,
                               const GridSpec& grid);

struct PotentialBoundsReport {
  double max_abs_f = 0.0;
  double max_abs_g = 0.0;
  double sup_bound = 0.0;         // D^2 / 2
  double max_lipschitz_f = 0.0;
  double max_lipschitz_g = 0.0;
  double lipschitz_bound = 0.0;   // D
  bool sup_ok = true;
  bool lipschitz_ok = true;
};

/// Checks |f|, |g| <= D^2/2 + 1e-6 and the grid Lipschitz ratio <= D + 1e-6
/// over supports and a grid of the domain. Requires a kZeroMeanG pair at
/// eps = 1 with the half squared cost (kWrongNormalization otherwise).
PotentialBoundsReport check_potential_bounds(const PotentialPair& pair, const DiscreteMeasure& p,
                                             const DiscreteMeasure& q, const CompactDomain& domain);

}  // namespace eot

#endif  // EOT_POTENTIALS_HPP
