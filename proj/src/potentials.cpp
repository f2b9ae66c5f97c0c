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

#include "eot/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eot/error.hpp"
#include "numeric_util.hpp"

namespace eot {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

using Block = std::vector<int>;
using Partition = std::vector<Block>;

// Set partitions of {0..k-1} with no singleton blocks, via restricted growth
// strings. Singletons are dropped because cumulants are built from central
// moments, whose first order vanishes.
std::vector<Partition> partitions_without_singletons(int k) {
  std::vector<Partition> out;
  std::vector<int> label(k, 0);
  while (true) {
    int blocks = 0;
    for (int v : label) blocks = std::max(blocks, v + 1);
    Partition part(blocks);
    for (int i = 0; i < k; ++i) part[label[i]].push_back(i);
    if (std::none_of(part.begin(), part.end(), [](const Block& b) { return b.size() == 1; })) {
      out.push_back(std::move(part));
    }
    // Next restricted growth string: label[i] <= 1 + max(label[0..i-1]).
    int i = k - 1;
    for (; i > 0; --i) {
      int prefix_max = 0;
      for (int t = 0; t < i; ++t) prefix_max = std::max(prefix_max, label[t]);
      if (label[i] <= prefix_max) {
        ++label[i];
        for (int t = i + 1; t < k; ++t) label[t] = 0;
        break;
      }
    }
    if (i == 0) break;
  }
  return out;
}

const std::vector<Partition>& partition_table(int k) {
  static const std::vector<std::vector<Partition>> table = [] {
    std::vector<std::vector<Partition>> t(kMaxDerivativeOrder + 1);
    for (int order = 2; order <= kMaxDerivativeOrder; ++order) t[order] = partitions_without_singletons(order);
    return t;
  }();
  return table[k];
}

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

int order_of(std::span<const int> alpha) {
  int total = 0;
  for (int a : alpha) {
    if (a < 0) fail(ErrorCode::kInvalidArgument, "negative multi-index entry");
    total += a;
  }
  return total;
}

// Derivatives of q(x) = ||x||^2 / 2.
double half_square_derivative(std::span<const double> x, std::span<const int> alpha) {
  const int total = order_of(alpha);
  if (total == 1) {
    for (std::size_t k = 0; k < alpha.size(); ++k) {
      if (alpha[k] == 1) return x[k];
    }
  }
  if (total == 2) {
    for (int a : alpha) {
      if (a == 2) return 1.0;
    }
  }
  return 0.0;
}

// Cumulants of a finitely supported law, memoized by sorted coordinate list.
class CumulantCache {
 public:
  CumulantCache(std::span<const double> support, std::size_t dim, std::vector<double> probs)
      : support_(support), dim_(dim), probs_(std::move(probs)), mean_(dim, 0.0) {
    for (std::size_t j = 0; j < probs_.size(); ++j) {
      for (std::size_t k = 0; k < dim_; ++k) mean_[k] += probs_[j] * support_[j * dim_ + k];
    }
  }

  double cumulant(std::span<const int> alpha) {
    std::vector<int> coords;
    for (std::size_t k = 0; k < alpha.size(); ++k) coords.insert(coords.end(), alpha[k], static_cast<int>(k));
    const int order = static_cast<int>(coords.size());
    if (order == 1) return mean_[coords[0]];

    double total = 0.0;
    for (const Partition& part : partition_table(order)) {
      double prod = 1.0;
      for (const Block& block : part) {
        std::vector<int> sub;
        sub.reserve(block.size());
        for (int pos : block) sub.push_back(coords[pos]);
        std::sort(sub.begin(), sub.end());
        prod *= central_moment(sub);
      }
      const int blocks = static_cast<int>(part.size());
      total += ((blocks - 1) % 2 == 0 ? 1.0 : -1.0) * factorial(blocks - 1) * prod;
    }
    return total;
  }

 private:
  double central_moment(const std::vector<int>& coords) {
    if (auto it = memo_.find(coords); it != memo_.end()) return it->second;
    double acc = 0.0;
    for (std::size_t j = 0; j < probs_.size(); ++j) {
      double term = probs_[j];
      for (int c : coords) term *= support_[j * dim_ + c] - mean_[c];
      acc += term;
    }
    memo_.emplace(coords, acc);
    return acc;
  }

  std::span<const double> support_;
  std::size_t dim_;
  std::vector<double> probs_;
  std::vector<double> mean_;
  std::map<std::vector<int>, double> memo_;
};

void enumerate_order(std::size_t d, int remaining, std::size_t axis, MultiIndex& current,
                     std::vector<MultiIndex>& out) {
  if (axis + 1 == d) {
    current[axis] = remaining;
    out.push_back(current);
    return;
  }
  for (int a = remaining; a >= 0; --a) {
    current[axis] = a;
    enumerate_order(d, remaining - a, axis + 1, current, out);
  }
}

}  // namespace

std::vector<MultiIndex> multi_indices_of_order(std::size_t d, int order) {
  if (d == 0) fail(ErrorCode::kInvalidArgument, "dimension must be at least 1");
  if (order < 0) fail(ErrorCode::kInvalidArgument, "order must be nonnegative");
  std::vector<MultiIndex> out;
  MultiIndex current(d, 0);
  enumerate_order(d, order, 0, current, out);
  return out;
}

std::vector<MultiIndex> graded_multi_indices(std::size_t d, int max_order) {
  std::vector<MultiIndex> out;
  for (int order = 0; order <= max_order; ++order) {
    auto level = multi_indices_of_order(d, order);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

ExtendedPotential::ExtendedPotential(const PotentialPair& pair, const DiscreteMeasure& p,
                                     const DiscreteMeasure& q, PotentialSide side)
    : side_(side), dim_(p.dim()), eps_(pair.eps), cost_scale_(pair.cost_scale) {
  if (p.dim() != q.dim()) fail(ErrorCode::kDimensionMismatch, "measures differ in dimension");
  if (pair.f.size() != p.size() || pair.g.size() != q.size()) {
    fail(ErrorCode::kDimensionMismatch, "potential lengths do not match the supports");
  }
  if (!(eps_ > 0.0)) fail(ErrorCode::kNonPositiveEps, "eps must be positive");
  const DiscreteMeasure& opposite = side == PotentialSide::kF ? q : p;
  const std::vector<double>& values = side == PotentialSide::kF ? pair.g : pair.f;
  support_.assign(opposite.points().begin(), opposite.points().end());
  log_mass_.resize(opposite.size());
  for (std::size_t j = 0; j < opposite.size(); ++j) {
    log_mass_[j] = opposite.weight(j) > 0.0 ? std::log(opposite.weight(j)) + values[j] / eps_ : kNegInf;
  }
}

double ExtendedPotential::value(std::span<const double> x) const {
  if (x.size() != dim_) fail(ErrorCode::kDimensionMismatch, "point has wrong dimension");
  const std::size_t m = log_mass_.size();
  double hi = kNegInf;
  std::vector<double> logits(m);
  for (std::size_t j = 0; j < m; ++j) {
    double dist = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      const double t = x[k] - support_[j * dim_ + k];
      dist += t * t;
    }
    logits[j] = log_mass_[j] - cost_scale_ * dist / eps_;
    hi = std::max(hi, logits[j]);
  }
  double s = 0.0;
  for (double l : logits) s += std::exp(l - hi);
  return -eps_ * (hi + std::log(s));
}

std::vector<double> ExtendedPotential::conditional_weights(std::span<const double> x) const {
  const std::size_t m = log_mass_.size();
  std::vector<double> w(m);
  double hi = kNegInf;
  for (std::size_t j = 0; j < m; ++j) {
    double dist = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      const double t = x[k] - support_[j * dim_ + k];
      dist += t * t;
    }
    w[j] = log_mass_[j] - cost_scale_ * dist / eps_;
    hi = std::max(hi, w[j]);
  }
  double s = 0.0;
  for (double& v : w) {
    v = std::exp(v - hi);
    s += v;
  }
  for (double& v : w) v /= s;
  return w;
}

void ExtendedPotential::require_unit_scale() const {
  if (eps_ != 1.0 || cost_scale_ != kHalfSquaredCost) {
    fail(ErrorCode::kInvalidArgument,
         "derivatives are computed at eps = 1 with the half squared cost; rescale the measures first");
  }
}

MomentTable ExtendedPotential::conditional_moments(std::span<const double> x, int max_order) const {
  require_unit_scale();
  if (x.size() != dim_) fail(ErrorCode::kDimensionMismatch, "point has wrong dimension");
  if (max_order < 1 || max_order > kMaxDerivativeOrder) {
    fail(ErrorCode::kUnsupportedOrder, "moment order must lie in [1, 6]");
  }
  const std::vector<double> w = conditional_weights(x);
  MomentTable table;
  table.dim = dim_;
  table.max_order = max_order;
  for (const MultiIndex& beta : graded_multi_indices(dim_, max_order)) {
    double acc = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      double term = w[j];
      for (std::size_t k = 0; k < dim_; ++k) {
        for (int r = 0; r < beta[k]; ++r) term *= support_[j * dim_ + k];
      }
      acc += term;
    }
    table.moments.emplace(beta, beta == MultiIndex(dim_, 0) ? 1.0 : acc);
  }
  return table;
}

void ExtendedPotential::derivatives(std::span<const double> x, std::span<const MultiIndex> alphas,
                                    std::span<double> out) const {
  if (x.size() != dim_) fail(ErrorCode::kDimensionMismatch, "point has wrong dimension");
  if (out.size() != alphas.size()) fail(ErrorCode::kDimensionMismatch, "output size mismatch");
  bool need_cumulants = false;
  for (const MultiIndex& alpha : alphas) {
    if (alpha.size() != dim_) fail(ErrorCode::kDimensionMismatch, "multi-index has wrong length");
    const int order = order_of(alpha);
    if (order > kMaxDerivativeOrder) fail(ErrorCode::kUnsupportedOrder, "derivative order above 6");
    need_cumulants = need_cumulants || order > 0;
  }
  if (!need_cumulants) {
    for (double& v : out) v = value(x);
    return;
  }
  require_unit_scale();
  CumulantCache cache(support_, dim_, conditional_weights(x));
  for (std::size_t t = 0; t < alphas.size(); ++t) {
    if (order_of(alphas[t]) == 0) {
      out[t] = value(x);
    } else {
      out[t] = half_square_derivative(x, alphas[t]) - cache.cumulant(alphas[t]);
    }
  }
}

double ExtendedPotential::derivative(std::span<const double> x, std::span<const int> alpha) const {
  MultiIndex a(alpha.begin(), alpha.end());
  double out = 0.0;
  derivatives(x, std::span<const MultiIndex>(&a, 1), std::span<double>(&out, 1));
  return out;
}

DerivativeField as_field(ExtendedPotential potential) {
  return [pot = std::move(potential)](std::span<const double> x, std::span<const MultiIndex> alphas,
                                      std::span<double> out) { pot.derivatives(x, alphas, out); };
}

DerivativeField difference(DerivativeField a, DerivativeField b) {
  return [a = std::move(a), b = std::move(b)](std::span<const double> x, std::span<const MultiIndex> alphas,
                                              std::span<double> out) {
    std::vector<double> tmp(out.size());
    a(x, alphas, out);
    b(x, alphas, tmp);
    for (std::size_t t = 0; t < out.size(); ++t) out[t] -= tmp[t];
  };
}

DerivativeField sum(DerivativeField a, DerivativeField b) {
  return [a = std::move(a), b = std::move(b)](std::span<const double> x, std::span<const MultiIndex> alphas,
                                              std::span<double> out) {
    std::vector<double> tmp(out.size());
    a(x, alphas, out);
    b(x, alphas, tmp);
    for (std::size_t t = 0; t < out.size(); ++t) out[t] += tmp[t];
  };
}

DerivativeField scaled(DerivativeField a, double factor) {
  return [a = std::move(a), factor](std::span<const double> x, std::span<const MultiIndex> alphas,
                                    std::span<double> out) {
    a(x, alphas, out);
    for (double& v : out) v *= factor;
  };
}

GridSpec GridSpec::default_for(CompactDomain domain) {
  const std::size_t d = domain.dim();
  return GridSpec{std::move(domain), d <= 2 ? std::size_t{41} : std::size_t{21}};
}

std::size_t GridSpec::size() const {
  std::size_t total = 1;
  for (std::size_t k = 0; k < domain.dim(); ++k) total *= points_per_axis;
  return total;
}

void GridSpec::point(std::size_t index, std::span<double> out) const {
  const std::size_t d = domain.dim();
  for (std::size_t k = d; k-- > 0;) {
    const std::size_t t = index % points_per_axis;
    index /= points_per_axis;
    const double frac = static_cast<double>(t) / static_cast<double>(points_per_axis - 1);
    out[k] = t + 1 == points_per_axis ? domain.upper[k] : domain.lower[k] + frac * (domain.upper[k] - domain.lower[k]);
  }
}

HolderNormEstimate holder_norm(const DerivativeField& field, std::size_t dim, HolderOrder order,
                               const GridSpec& grid) {
  if (order.s < 0) fail(ErrorCode::kInvalidArgument, "Holder order must be nonnegative");
  if (order.s > kMaxDerivativeOrder) fail(ErrorCode::kUnsupportedOrder, "Holder order above 6");
  if (dim == 0 || dim != grid.domain.dim()) fail(ErrorCode::kDimensionMismatch, "grid dimension mismatch");
  if (dim > 3) fail(ErrorCode::kInvalidArgument, "grid Holder norms are limited to d <= 3");
  if (grid.points_per_axis < 2) fail(ErrorCode::kInvalidArgument, "grid needs at least 2 points per axis");

  const std::vector<MultiIndex> alphas = graded_multi_indices(dim, order.s);
  HolderNormEstimate est;
  est.order = order;
  est.grid_points = grid.size();
  est.sup_terms.assign(alphas.size(), 0.0);
  std::vector<double> x(dim), vals(alphas.size());
  for (std::size_t idx = 0; idx < est.grid_points; ++idx) {
    grid.point(idx, x);
    field(x, alphas, vals);
    for (std::size_t t = 0; t < alphas.size(); ++t) est.sup_terms[t] = std::max(est.sup_terms[t], std::abs(vals[t]));
  }
  for (double term : est.sup_terms) est.value += term;
  return est;
}

PotentialBoundsReport check_potential_bounds(const PotentialPair& pair, const DiscreteMeasure& p,
                                             const DiscreteMeasure& q, const CompactDomain& domain) {
  if (pair.normalization != Normalization::kZeroMeanG ||
      std::abs(detail::weighted_mean(pair.g, q.weights())) > 1e-10) {
    fail(ErrorCode::kWrongNormalization, "bounds assume <g, b> = 0 (kZeroMeanG)");
  }
  if (pair.eps != 1.0 || pair.cost_scale != kHalfSquaredCost) {
    fail(ErrorCode::kWrongNormalization, "bounds are stated at eps = 1 with the half squared cost");
  }
  if (domain.dim() != p.dim()) fail(ErrorCode::kDimensionMismatch, "domain dimension mismatch");

  const ExtendedPotential fx(pair, p, q, PotentialSide::kF);
  const ExtendedPotential gy(pair, p, q, PotentialSide::kG);
  const double diam = domain.diameter();

  PotentialBoundsReport report;
  report.sup_bound = 0.5 * diam * diam;
  report.lipschitz_bound = diam;

  for (double v : pair.f) report.max_abs_f = std::max(report.max_abs_f, std::abs(v));
  for (double v : pair.g) report.max_abs_g = std::max(report.max_abs_g, std::abs(v));

  const std::size_t d = domain.dim();
  // Coarse lattice; all pairs are compared for the Lipschitz ratio.
  const std::size_t per_axis =
      std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(std::pow(400.0, 1.0 / static_cast<double>(d)))));
  const GridSpec grid{domain, per_axis};
  const std::size_t count = grid.size();
  std::vector<double> pts(count * d), fv(count), gv(count);
  for (std::size_t t = 0; t < count; ++t) {
    std::span<double> x(pts.data() + t * d, d);
    grid.point(t, x);
    fv[t] = fx.value(x);
    gv[t] = gy.value(x);
    report.max_abs_f = std::max(report.max_abs_f, std::abs(fv[t]));
    report.max_abs_g = std::max(report.max_abs_g, std::abs(gv[t]));
  }
  for (std::size_t s = 0; s < count; ++s) {
    for (std::size_t t = s + 1; t < count; ++t) {
      double dist = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double u = pts[s * d + k] - pts[t * d + k];
        dist += u * u;
      }
      dist = std::sqrt(dist);
      report.max_lipschitz_f = std::max(report.max_lipschitz_f, std::abs(fv[s] - fv[t]) / dist);
      report.max_lipschitz_g = std::max(report.max_lipschitz_g, std::abs(gv[s] - gv[t]) / dist);
    }
  }
  report.sup_ok = std::max(report.max_abs_f, report.max_abs_g) <= report.sup_bound + 1e-6;
  report.lipschitz_ok = std::max(report.max_lipschitz_f, report.max_lipschitz_g) <= report.lipschitz_bound + 1e-6;
  return report;
}

}  // namespace eot
