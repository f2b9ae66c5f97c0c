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

#include "eot/sinkhorn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "numeric_util.hpp"

namespace eot {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double squared_distance(std::span<const double> x, std::span<const double> y) noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double t = x[k] - y[k];
    s += t * t;
  }
  return s;
}

void check_dims(const DiscreteMeasure& p, const DiscreteMeasure& q) {
  if (p.dim() != q.dim()) {
    fail(ErrorCode::kDimensionMismatch, "measures live in R^" + std::to_string(p.dim()) + " and R^" +
                                            std::to_string(q.dim()));
  }
}

void check_pair(const DiscreteMeasure& p, const DiscreteMeasure& q, const PotentialPair& pair) {
  check_dims(p, q);
  if (pair.f.size() != p.size() || pair.g.size() != q.size()) {
    fail(ErrorCode::kDimensionMismatch, "potential lengths do not match the supports");
  }
  if (!(pair.eps > 0.0)) fail(ErrorCode::kNonPositiveEps, "eps must be positive");
}

std::vector<double> log_weights(const DiscreteMeasure& m) {
  std::vector<double> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = m.weight(i) > 0.0 ? std::log(m.weight(i)) : kNegInf;
  return out;
}

// Rows of the Gibbs exponent -c_ij/eps, either precomputed or rebuilt on demand.
class ScaledCost {
 public:
  ScaledCost(const DiscreteMeasure& p, const DiscreteMeasure& q, double eps, double cost_scale,
             std::size_t dense_limit_bytes)
      : p_(p), q_(q), factor_(-cost_scale / eps), scratch_(q.size()) {
    const double bytes = static_cast<double>(p.size()) * static_cast<double>(q.size()) * sizeof(double);
    if (bytes <= static_cast<double>(dense_limit_bytes)) {
      dense_.resize(p.size() * q.size());
      for (std::size_t i = 0; i < p.size(); ++i) fill_row(i, dense_.data() + i * q.size());
    }
  }

  const double* row(std::size_t i) {
    if (!dense_.empty()) return dense_.data() + i * q_.size();
    fill_row(i, scratch_.data());
    return scratch_.data();
  }

 private:
  void fill_row(std::size_t i, double* out) const {
    const auto x = p_.point(i);
    for (std::size_t j = 0; j < q_.size(); ++j) out[j] = factor_ * squared_distance(x, q_.point(j));
  }

  const DiscreteMeasure& p_;
  const DiscreteMeasure& q_;
  double factor_;
  std::vector<double> dense_;
  std::vector<double> scratch_;
};

// out_i = -eps * log sum_j exp(shift_j + K_ij), K_ij = -c_ij/eps.
void row_update(ScaledCost& kernel, std::span<const double> shift, double eps, std::span<double> out) {
  const std::size_t m = shift.size();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double* k = kernel.row(i);
    double hi = kNegInf;
    for (std::size_t j = 0; j < m; ++j) hi = std::max(hi, shift[j] + k[j]);
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += std::exp(shift[j] + k[j] - hi);
    out[i] = -eps * (hi + std::log(s));
  }
}

// out_j = -eps * log sum_i exp(shift_i + K_ij), traversing K row by row.
void col_update(ScaledCost& kernel, std::span<const double> shift, double eps, std::span<double> out,
                std::vector<double>& hi, std::vector<double>& acc) {
  const std::size_t m = out.size();
  hi.assign(m, kNegInf);
  acc.assign(m, 0.0);
  for (std::size_t i = 0; i < shift.size(); ++i) {
    if (shift[i] == kNegInf) continue;
    const double* k = kernel.row(i);
    for (std::size_t j = 0; j < m; ++j) hi[j] = std::max(hi[j], shift[i] + k[j]);
  }
  for (std::size_t i = 0; i < shift.size(); ++i) {
    if (shift[i] == kNegInf) continue;
    const double* k = kernel.row(i);
    for (std::size_t j = 0; j < m; ++j) acc[j] += std::exp(shift[i] + k[j] - hi[j]);
  }
  for (std::size_t j = 0; j < m; ++j) out[j] = -eps * (hi[j] + std::log(acc[j]));
}

PotentialPair shift_pair(const PotentialPair& pair, double c, Normalization tag) {
  PotentialPair out = pair;
  for (double& v : out.f) v += c;
  for (double& v : out.g) v -= c;
  out.normalization = tag;
  return out;
}

}  // namespace

std::vector<double> TransportPlan::row_sums() const {
  std::vector<double> out(rows, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    out[i] = detail::compensated_sum(std::span<const double>(entries.data() + i * cols, cols));
  }
  return out;
}

std::vector<double> TransportPlan::col_sums() const {
  std::vector<double> out(cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) out[j] += entries[i * cols + j];
  }
  return out;
}

void SolverConfig::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) fail(ErrorCode::kNonPositiveEps, "eps must be positive");
  if (!(tol > 0.0)) fail(ErrorCode::kInvalidArgument, "tol must be positive");
  if (max_iter < 1) fail(ErrorCode::kInvalidArgument, "max_iter must be at least 1");
  if (!(cost_scale > 0.0) || !std::isfinite(cost_scale)) {
    fail(ErrorCode::kInvalidArgument, "cost scale must be positive");
  }
}

SolveResult solve(const DiscreteMeasure& p, const DiscreteMeasure& q, const SolverConfig& cfg) {
  cfg.validate();
  check_dims(p, q);
  const double eps = cfg.eps;
  const std::size_t n = p.size();
  const std::size_t m = q.size();

  ScaledCost kernel(p, q, eps, cfg.cost_scale, cfg.dense_limit_bytes);
  const std::vector<double> log_a = log_weights(p);
  const std::vector<double> log_b = log_weights(q);

  SolveResult result;
  PotentialPair& pair = result.pair;
  pair.f.assign(n, 0.0);
  pair.g.assign(m, 0.0);
  pair.eps = eps;
  pair.cost_scale = cfg.cost_scale;

  std::vector<double> shift_q(m), shift_p(n), g_next(m), hi, acc;
  SolveReport& report = result.report;
  report.final_residual = std::numeric_limits<double>::infinity();
  for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
    for (std::size_t j = 0; j < m; ++j) shift_q[j] = log_b[j] + pair.g[j] / eps;
    row_update(kernel, shift_q, eps, pair.f);
    for (std::size_t i = 0; i < n; ++i) shift_p[i] = log_a[i] + pair.f[i] / eps;
    col_update(kernel, shift_p, eps, g_next, hi, acc);

    double residual = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (log_b[j] == kNegInf) continue;
      residual = std::max(residual, std::abs(g_next[j] - pair.g[j]) / eps);
    }
    if (std::isnan(residual)) residual = std::numeric_limits<double>::infinity();
    pair.g.swap(g_next);
    report.iterations = it;
    report.final_residual = residual;
    if (residual <= cfg.tol) {
      report.converged = true;
      break;
    }
    if (!std::isfinite(residual)) break;
  }

  pair = normalize(pair, p, q, Normalization::kEqualMeans);
  report.dual_value = dual_objective(p, q, pair);
  if (!report.converged) {
    std::ostringstream msg;
    msg.precision(3);
    msg << "Sinkhorn stopped after " << report.iterations << " iterations with residual "
        << report.final_residual << " > tol " << cfg.tol;
    throw NotConvergedError(msg.str(), std::move(result));
  }
  return result;
}

double dual_objective(const DiscreteMeasure& p, const DiscreteMeasure& q, const PotentialPair& pair) {
  check_pair(p, q, pair);
  const double eps = pair.eps;
  const double linear = detail::weighted_mean(pair.f, p.weights()) + detail::weighted_mean(pair.g, q.weights());
  double mass = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto x = p.point(i);
    double row = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
      const double c = pair.cost_scale * squared_distance(x, q.point(j));
      row += q.weight(j) * std::exp((pair.f[i] + pair.g[j] - c) / eps);
    }
    mass += p.weight(i) * row;
  }
  return linear - eps * mass + eps;
}

double marginal_residual(const DiscreteMeasure& p, const DiscreteMeasure& q, const PotentialPair& pair) {
  check_pair(p, q, pair);
  const std::size_t n = p.size();
  const std::size_t m = q.size();
  const double eps = pair.eps;
  // log(row_i / a_i) = f_i/eps + log sum_j b_j exp((g_j - c_ij)/eps), same for columns.
  std::vector<double> row_hi(n, kNegInf), col_hi(m, kNegInf), row_acc(n, 0.0), col_acc(m, 0.0);
  std::vector<double> expo(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      expo[i * m + j] = (pair.f[i] + pair.g[j] - pair.cost_scale * squared_distance(p.point(i), q.point(j))) / eps;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double e = expo[i * m + j];
      if (q.weight(j) > 0.0) row_hi[i] = std::max(row_hi[i], e);
      if (p.weight(i) > 0.0) col_hi[j] = std::max(col_hi[j], e);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double e = expo[i * m + j];
      row_acc[i] += q.weight(j) * std::exp(e - row_hi[i]);
      col_acc[j] += p.weight(i) * std::exp(e - col_hi[j]);
    }
  }
  double residual = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (p.weight(i) > 0.0) residual = std::max(residual, std::abs(row_hi[i] + std::log(row_acc[i])));
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (q.weight(j) > 0.0) residual = std::max(residual, std::abs(col_hi[j] + std::log(col_acc[j])));
  }
  return std::isnan(residual) ? std::numeric_limits<double>::infinity() : residual;
}

double cost(const DiscreteMeasure& p, const DiscreteMeasure& q, const PotentialPair& pair, double tol) {
  const double residual = marginal_residual(p, q, pair);
  if (!(residual <= 10.0 * tol)) {
    std::ostringstream msg;
    msg.precision(3);
    msg << "potentials violate the optimality conditions: residual " << residual << " > 10 * tol";
    fail(ErrorCode::kNotOptimal, msg.str());
  }
  return detail::weighted_mean(pair.f, p.weights()) + detail::weighted_mean(pair.g, q.weights());
}

TransportPlan plan(const DiscreteMeasure& p, const DiscreteMeasure& q, const PotentialPair& pair) {
  check_pair(p, q, pair);
  TransportPlan out;
  out.rows = p.size();
  out.cols = q.size();
  out.entries.resize(out.rows * out.cols);
  for (std::size_t i = 0; i < out.rows; ++i) {
    const auto x = p.point(i);
    for (std::size_t j = 0; j < out.cols; ++j) {
      const double c = pair.cost_scale * squared_distance(x, q.point(j));
      out.entries[i * out.cols + j] = p.weight(i) * q.weight(j) * std::exp((pair.f[i] + pair.g[j] - c) / pair.eps);
    }
  }
  return out;
}

double primal_cost(const DiscreteMeasure& p, const DiscreteMeasure& q, const TransportPlan& plan,
                   double eps, double cost_scale) {
  check_dims(p, q);
  if (plan.rows != p.size() || plan.cols != q.size() || plan.entries.size() != plan.rows * plan.cols) {
    fail(ErrorCode::kDimensionMismatch, "plan shape does not match the supports");
  }
  if (!(eps > 0.0)) fail(ErrorCode::kNonPositiveEps, "eps must be positive");
  double transport = 0.0;
  double entropy = 0.0;
  for (std::size_t i = 0; i < plan.rows; ++i) {
    const auto x = p.point(i);
    for (std::size_t j = 0; j < plan.cols; ++j) {
      const double pij = plan(i, j);
      if (pij < 0.0 || std::isnan(pij)) fail(ErrorCode::kNegativeEntry, "plan has a negative entry");
      if (pij == 0.0) continue;
      const double ref = p.weight(i) * q.weight(j);
      if (ref == 0.0) return std::numeric_limits<double>::infinity();
      transport += pij * cost_scale * squared_distance(x, q.point(j));
      entropy += pij * std::log(pij / ref);
    }
  }
  return transport + eps * entropy;
}

PotentialPair normalize(const PotentialPair& pair, const DiscreteMeasure& p, const DiscreteMeasure& q,
                        Normalization convention) {
  check_pair(p, q, pair);
  const double mean_f = detail::weighted_mean(pair.f, p.weights());
  const double mean_g = detail::weighted_mean(pair.g, q.weights());
  switch (convention) {
    case Normalization::kEqualMeans:
      return shift_pair(pair, 0.5 * (mean_g - mean_f), convention);
    case Normalization::kZeroMeanG:
      return shift_pair(pair, mean_g, convention);
    case Normalization::kRaw:
      break;
  }
  fail(ErrorCode::kInvalidArgument, "normalize needs an explicit convention");
}

double entropic_cost(const DiscreteMeasure& p, const DiscreteMeasure& q, const SolverConfig& cfg) {
  const SolveResult r = solve(p, q, cfg);
  return detail::weighted_mean(r.pair.f, p.weights()) + detail::weighted_mean(r.pair.g, q.weights());
}

}  // namespace eot
