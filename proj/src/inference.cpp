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

#include "eot/inference.hpp"

#include <cmath>
#include <numbers>

#include "eot/error.hpp"
#include "numeric_util.hpp"

namespace eot {

namespace {

double weighted_variance(std::span<const double> values, std::span<const double> weights) {
  const double mean = detail::weighted_mean(values, weights);
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double t = values[i] - mean;
    acc += weights[i] * t * t;
  }
  return acc;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorCode::kOutOfRange, "alpha must lie in (0, 1)");
}

double normal_density(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

// Phi(x) for x <= -3: phi(x) * R(|x|), R(t) = 1/(t + 1/(t + 2/(t + 3/(t + ...)))).
double lower_tail(double x) {
  const double t = -x;
  double frac = t;
  for (int k = 200; k >= 1; --k) frac = t + k / frac;
  return normal_density(x) / frac;
}

}  // namespace

VarianceEstimate variance_one_sample(const DiscreteMeasure& p_n, const PotentialPair& pair, std::size_t n) {
  if (pair.f.size() != p_n.size()) fail(ErrorCode::kDimensionMismatch, "f does not match the sample support");
  VarianceEstimate v;
  v.kind = SampleKind::kOneSample;
  v.n = n == 0 ? p_n.size() : n;
  v.m = 0;
  v.value = std::max(0.0, weighted_variance(pair.f, p_n.weights()));
  return v;
}

VarianceEstimate variance_two_sample(const DiscreteMeasure& p_n, const DiscreteMeasure& q_m,
                                     const PotentialPair& pair, std::size_t n, std::size_t m) {
  if (pair.f.size() != p_n.size() || pair.g.size() != q_m.size()) {
    fail(ErrorCode::kDimensionMismatch, "potentials do not match the sample supports");
  }
  VarianceEstimate v;
  v.kind = SampleKind::kTwoSample;
  v.n = n == 0 ? p_n.size() : n;
  v.m = m == 0 ? q_m.size() : m;
  const double total = static_cast<double>(v.n + v.m);
  const double var_f = weighted_variance(pair.f, p_n.weights());
  const double var_g = weighted_variance(pair.g, q_m.weights());
  v.value = std::max(0.0, (static_cast<double>(v.m) / total) * var_f + (static_cast<double>(v.n) / total) * var_g);
  return v;
}

double normal_cdf(double x) {
  if (std::isnan(x)) return x;
  if (x <= -3.0) return lower_tail(x);
  if (x >= 3.0) return 1.0 - lower_tail(-x);
  // Phi(x) = 1/2 + phi(x) (x + x^3/3 + x^5/(3*5) + ...)
  double term = x;
  double sum = x;
  const double x2 = x * x;
  for (int k = 1; k < 500; ++k) {
    term *= x2 / (2 * k + 1);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return 0.5 + normal_density(x) * sum;
}

double normal_quantile(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) fail(ErrorCode::kOutOfRange, "quantile level must lie in (0, 1)");
  if (beta == 0.5) return 0.0;
  if (beta > 0.5) return -normal_quantile(1.0 - beta);
  double lo = -40.0;
  double hi = 0.0;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (normal_cdf(mid) < beta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ConfidenceInterval ci_one_sample(const DiscreteMeasure& p_n, const DiscreteMeasure& q, const SolverConfig& cfg,
                                 double alpha, std::size_t n) {
  check_alpha(alpha);
  const SolveResult r = solve(p_n, q, cfg);
  ConfidenceInterval ci;
  ci.center = detail::weighted_mean(r.pair.f, p_n.weights()) + detail::weighted_mean(r.pair.g, q.weights());
  ci.variance = variance_one_sample(p_n, r.pair, n);
  ci.level = 1.0 - alpha;
  ci.half_width = normal_quantile(1.0 - alpha / 2.0) * std::sqrt(ci.variance.value / static_cast<double>(ci.variance.n));
  return ci;
}

ConfidenceInterval ci_two_sample_from(const DiscreteMeasure& p_n, const DiscreteMeasure& q_m,
                                      const PotentialPair& pair, double alpha, std::size_t n, std::size_t m) {
  check_alpha(alpha);
  ConfidenceInterval ci;
  ci.center = detail::weighted_mean(pair.f, p_n.weights()) + detail::weighted_mean(pair.g, q_m.weights());
  ci.variance = variance_two_sample(p_n, q_m, pair, n, m);
  ci.level = 1.0 - alpha;
  const double nn = static_cast<double>(ci.variance.n);
  const double mm = static_cast<double>(ci.variance.m);
  ci.half_width = normal_quantile(1.0 - alpha / 2.0) * std::sqrt(ci.variance.value * (nn + mm) / (nn * mm));
  return ci;
}

ConfidenceInterval ci_two_sample(const DiscreteMeasure& p_n, const DiscreteMeasure& q_m, const SolverConfig& cfg,
                                 double alpha, std::size_t n, std::size_t m) {
  check_alpha(alpha);
  const SolveResult r = solve(p_n, q_m, cfg);
  return ci_two_sample_from(p_n, q_m, r.pair, alpha, n, m);
}

DivergenceValue sinkhorn_divergence(const DiscreteMeasure& p, const DiscreteMeasure& q, const SolverConfig& cfg) {
  DivergenceValue out;
  out.eps = cfg.eps;
  out.s_pq = entropic_cost(p, q, cfg);
  out.s_pp = entropic_cost(p, p, cfg);
  out.s_qq = entropic_cost(q, q, cfg);
  out.value = out.s_pq - 0.5 * (out.s_pp + out.s_qq);
  return out;
}

}  // namespace eot
