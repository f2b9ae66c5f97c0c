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

#include "eot/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eot/error.hpp"

namespace eot::oracle {

namespace {

using Real = long double;

constexpr std::size_t kMaxCells = 100;
constexpr std::size_t kMaxSweeps = 1000000;
constexpr Real kTargetResidual = 1e-14L;

Real sq_dist(std::span<const double> x, std::span<const double> y) {
  Real s = 0.0L;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const Real t = static_cast<Real>(x[k]) - static_cast<Real>(y[k]);
    s += t * t;
  }
  return s;
}

// log sum_k exp(terms_k), zero-weight entries already removed by the caller.
Real log_sum(const std::vector<Real>& terms) {
  Real hi = -std::numeric_limits<Real>::infinity();
  for (Real t : terms) hi = std::max(hi, t);
  Real s = 0.0L;
  for (Real t : terms) s += std::exp(t - hi);
  return hi + std::log(s);
}

// Stencils for one axis: (offset in steps, coefficient), divided by h^order.
struct Tap {
  int offset;
  Real coef;
};

std::vector<Tap> stencil(int order) {
  switch (order) {
    case 0: return {{0, 1.0L}};
    case 1: return {{-1, -0.5L}, {1, 0.5L}};
    case 2: return {{-1, 1.0L}, {0, -2.0L}, {1, 1.0L}};
    case 3: return {{-2, -0.5L}, {-1, 1.0L}, {1, -1.0L}, {2, 0.5L}};
    default: break;
  }
  fail(ErrorCode::kUnsupportedOrder, "finite differences support |alpha| <= 3");
}

}  // namespace

double gaussian_cost(const GaussianPairSpec& spec) {
  if (spec.d < 1) fail(ErrorCode::kInvalidArgument, "dimension must be at least 1");
  if (!(spec.eps > 0.0)) fail(ErrorCode::kNonPositiveEps, "eps must be positive");
  const double d = static_cast<double>(spec.d);
  const double eps = spec.eps;
  const double r = std::sqrt(1.0 + 4.0 / (eps * eps));
  return 2.0 * d - 0.5 * eps * (d * r - d * std::log(1.0 + r) + d * std::log(2.0) - d);
}

double gaussian_cost(const GaussianPairSpec& spec, double cost_scale) {
  if (!(cost_scale > 0.0)) fail(ErrorCode::kInvalidArgument, "cost scale must be positive");
  return cost_scale * gaussian_cost(GaussianPairSpec{spec.d, spec.eps / cost_scale});
}

BruteForceResult brute_force_potentials(const DiscreteMeasure& p, const DiscreteMeasure& q, double eps,
                                        double cost_scale) {
  if (p.dim() != q.dim()) fail(ErrorCode::kDimensionMismatch, "measures differ in dimension");
  if (p.size() * q.size() > kMaxCells) fail(ErrorCode::kInvalidArgument, "brute force needs n*m <= 100");
  if (!(eps > 0.0)) fail(ErrorCode::kNonPositiveEps, "eps must be positive");

  const std::size_t n = p.size();
  const std::size_t m = q.size();
  const Real e = eps;
  std::vector<Real> cost(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) cost[i * m + j] = static_cast<Real>(cost_scale) * sq_dist(p.point(i), q.point(j));
  }

  std::vector<Real> f(n, 0.0L), g(m, 0.0L), terms;
  terms.reserve(std::max(n, m));

  const auto update_f = [&] {
    for (std::size_t i = 0; i < n; ++i) {
      terms.clear();
      for (std::size_t j = 0; j < m; ++j) {
        if (q.weight(j) > 0.0) terms.push_back(std::log(static_cast<Real>(q.weight(j))) + (g[j] - cost[i * m + j]) / e);
      }
      f[i] = -e * log_sum(terms);
    }
  };
  const auto update_g = [&] {
    for (std::size_t j = 0; j < m; ++j) {
      terms.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (p.weight(i) > 0.0) terms.push_back(std::log(static_cast<Real>(p.weight(i))) + (f[i] - cost[i * m + j]) / e);
      }
      g[j] = -e * log_sum(terms);
    }
  };
  // After a g-update the column conditions are exact, so only rows can be off.
  const auto row_residual = [&] {
    Real worst = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      if (p.weight(i) == 0.0) continue;
      terms.clear();
      for (std::size_t j = 0; j < m; ++j) {
        if (q.weight(j) > 0.0) {
          terms.push_back(std::log(static_cast<Real>(q.weight(j))) + (f[i] + g[j] - cost[i * m + j]) / e);
        }
      }
      worst = std::max(worst, std::abs(log_sum(terms)));
    }
    return worst;
  };

  BruteForceResult out;
  Real residual = std::numeric_limits<Real>::infinity();
  std::size_t sweep = 0;
  while (sweep < kMaxSweeps) {
    ++sweep;
    update_f();
    update_g();
    residual = row_residual();
    if (residual <= kTargetResidual) break;
  }
  if (!(residual <= kTargetResidual)) {
    fail(ErrorCode::kNotConverged, "brute-force fixed point did not reach 1e-14");
  }

  Real mean_f = 0.0L, mean_g = 0.0L;
  for (std::size_t i = 0; i < n; ++i) mean_f += static_cast<Real>(p.weight(i)) * f[i];
  for (std::size_t j = 0; j < m; ++j) mean_g += static_cast<Real>(q.weight(j)) * g[j];
  const Real shift = 0.5L * (mean_g - mean_f);

  out.pair.f.resize(n);
  out.pair.g.resize(m);
  for (std::size_t i = 0; i < n; ++i) out.pair.f[i] = static_cast<double>(f[i] + shift);
  for (std::size_t j = 0; j < m; ++j) out.pair.g[j] = static_cast<double>(g[j] - shift);
  out.pair.eps = eps;
  out.pair.cost_scale = cost_scale;
  out.pair.normalization = Normalization::kEqualMeans;
  out.iterations = sweep;
  out.residual = static_cast<double>(residual);
  return out;
}

ScalarField naive_extension(const DiscreteMeasure& opposite, std::span<const double> values, double eps,
                            double cost_scale) {
  if (values.size() != opposite.size()) fail(ErrorCode::kDimensionMismatch, "potential length mismatch");
  std::vector<double> points(opposite.points().begin(), opposite.points().end());
  std::vector<double> weights(opposite.weights().begin(), opposite.weights().end());
  std::vector<double> v(values.begin(), values.end());
  const std::size_t d = opposite.dim();
  return [points = std::move(points), weights = std::move(weights), v = std::move(v), d, eps,
          cost_scale](std::span<const long double> x) -> long double {
    Real s = 0.0L;
    for (std::size_t j = 0; j < weights.size(); ++j) {
      Real dist = 0.0L;
      for (std::size_t k = 0; k < d; ++k) {
        const Real t = x[k] - static_cast<Real>(points[j * d + k]);
        dist += t * t;
      }
      s += static_cast<Real>(weights[j]) *
           std::exp((static_cast<Real>(v[j]) - static_cast<Real>(cost_scale) * dist) / static_cast<Real>(eps));
    }
    return -static_cast<Real>(eps) * std::log(s);
  };
}

double finite_difference(const ScalarField& fn, std::span<const double> x, std::span<const int> alpha,
                         double h) {
  if (alpha.size() != x.size()) fail(ErrorCode::kDimensionMismatch, "multi-index length differs from x");
  if (!(h > 0.0)) fail(ErrorCode::kInvalidArgument, "step must be positive");
  int total = 0;
  for (int a : alpha) {
    if (a < 0) fail(ErrorCode::kInvalidArgument, "negative multi-index entry");
    total += a;
  }
  if (total > 3) fail(ErrorCode::kUnsupportedOrder, "finite differences support |alpha| <= 3");

  const std::size_t d = x.size();
  std::vector<std::vector<Tap>> taps(d);
  for (std::size_t k = 0; k < d; ++k) taps[k] = stencil(alpha[k]);

  const Real step = h;
  std::vector<long double> probe(d);
  std::vector<std::size_t> pos(d, 0);
  Real acc = 0.0L;
  // Odometer over the tensor-product stencil.
  while (true) {
    Real coef = 1.0L;
    for (std::size_t k = 0; k < d; ++k) {
      const Tap& t = taps[k][pos[k]];
      coef *= t.coef;
      probe[k] = static_cast<Real>(x[k]) + t.offset * step;
    }
    acc += coef * fn(probe);
    std::size_t k = 0;
    while (k < d && ++pos[k] == taps[k].size()) pos[k++] = 0;
    if (k == d) break;
  }
  return static_cast<double>(acc / std::pow(step, static_cast<Real>(total)));
}

}  // namespace eot::oracle
