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

#ifndef EOT_MEASURES_HPP
#define EOT_MEASURES_HPP

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "eot/rng.hpp"

namespace eot {

/// Finitely supported probability measure on R^d. Points are stored row-major
/// (n rows of d coordinates). Immutable once constructed.
class DiscreteMeasure {
 public:
  /// Validates and takes ownership. Throws Error(kEmptySupport) for n == 0,
  /// kInvalidArgument for shape problems or non-finite values, and
  /// kNonSimplexWeights when weights are negative or do not sum to 1 within
  /// 1e-12.
  DiscreteMeasure(std::vector<double> points, std::size_t dim, std::vector<double> weights);

  /// Equal weights 1/n.
  static DiscreteMeasure uniform(std::vector<double> points, std::size_t dim);

  /// Single atom at `point`.
  static DiscreteMeasure dirac(std::vector<double> point);

  std::size_t size() const noexcept { return weights_.size(); }
  std::size_t dim() const noexcept { return dim_; }

  std::span<const double> point(std::size_t i) const noexcept {
    return {points_.data() + i * dim_, dim_};
  }
  double weight(std::size_t i) const noexcept { return weights_[i]; }

  std::span<const double> points() const noexcept { return points_; }
  std::span<const double> weights() const noexcept { return weights_; }

  bool operator==(const DiscreteMeasure&) const = default;

 private:
  std::size_t dim_;
  std::vector<double> points_;
  std::vector<double> weights_;
};

/// Axis-aligned box standing in for the compact domain of a problem.
struct CompactDomain {
  std::vector<double> lower;
  std::vector<double> upper;

  /// Throws kInvalidArgument unless lower <= upper and the box has positive
  /// diameter.
  CompactDomain(std::vector<double> lo, std::vector<double> hi);

  std::size_t dim() const noexcept { return lower.size(); }
  double diameter() const noexcept;
  bool contains(std::span<const double> x, double slack = 0.0) const noexcept;
};

/// Smallest box containing all atoms of the given measures. When every atom
/// sits at one point the box is widened by 0.5 on each side so the diameter
/// stays positive.
CompactDomain bounding_domain(std::span<const DiscreteMeasure* const> measures);

/// Reads the `w,x1,...,xd` CSV format. Weights off the simplex by at most 1e-9
/// are renormalized; larger deviations are an error.
DiscreteMeasure load_measure(const std::filesystem::path& path);

/// Parses the same format from memory (used by load_measure).
DiscreteMeasure parse_measure(std::string_view text);

/// Writes the `w,x1,...,xd` format with 17 significant digits.
void save_measure(const DiscreteMeasure& m, const std::filesystem::path& path);

/// Atom indices of n i.i.d. inverse-CDF draws from `source`.
std::vector<std::size_t> sample_indices(const DiscreteMeasure& source, std::size_t n,
                                        const SeedSpec& seed);

/// Empirical measure of n i.i.d. draws, one atom per draw, weights 1/n.
DiscreteMeasure sample_empirical(const DiscreteMeasure& source, std::size_t n, const SeedSpec& seed);

/// n i.i.d. draws from N(mean, variance_scale * I) by Box-Muller, weights 1/n.
DiscreteMeasure sample_gaussian(std::span<const double> mean, double variance_scale, std::size_t n,
                                const SeedSpec& seed);

/// Pushforward under x -> eps^{-1/2} x.
DiscreteMeasure rescale_measure(const DiscreteMeasure& m, double eps);

/// Merges atoms with identical coordinates, summing their weights. The first
/// occurrence fixes the output order. Transport quantities are unchanged.
DiscreteMeasure merge_duplicates(const DiscreteMeasure& m);

}  // namespace eot

#endif  // EOT_MEASURES_HPP
