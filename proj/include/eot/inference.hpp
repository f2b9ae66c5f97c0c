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

#ifndef EOT_INFERENCE_HPP
#define EOT_INFERENCE_HPP

#include <cstddef>

#include "eot/measures.hpp"
#include "eot/sinkhorn.hpp"

namespace eot {

enum class SampleKind { kOneSample, kTwoSample };

struct VarianceEstimate {
  double value = 0.0;
  SampleKind kind = SampleKind::kOneSample;
  std::size_t n = 0;
  std::size_t m = 0;  // 0 for one-sample estimates
};

struct ConfidenceInterval {
  double center = 0.0;
  double half_width = 0.0;
  double level = 0.0;
  VarianceEstimate variance;

  double lower() const noexcept { return center - half_width; }
  double upper() const noexcept { return center + half_width; }
  bool contains(double v) const noexcept { return lower() <= v && v <= upper(); }
};

struct DivergenceValue {
  double value = 0.0;
  double eps = 0.0;
  double s_pq = 0.0;
  double s_pp = 0.0;
  double s_qq = 0.0;
};

/// Var_{P_n}(f) under P_n's weights, computed two-pass around the weighted
/// mean. `n` is the sample size behind P_n; 0 means P_n.size(). Pass it
/// explicitly when duplicate draws were merged into weighted atoms.
VarianceEstimate variance_one_sample(const DiscreteMeasure& p_n, const PotentialPair& pair, std::size_t n = 0);

/// m/(n+m) Var_{P_n}(f) + n/(n+m) Var_{Q_m}(g).
VarianceEstimate variance_two_sample(const DiscreteMeasure& p_n, const DiscreteMeasure& q_m,
                                     const PotentialPair& pair, std::size_t n = 0, std::size_t m = 0);

/// Standard normal CDF: Marsaglia's Taylor series for |x| < 3 and a
/// continued fraction for the Mills ratio in the tails.
double normal_cdf(double x);

/// z_beta by bisection on normal_cdf to an absolute error below 1e-12.
/// Throws kOutOfRange unless 0 < beta < 1.
double normal_quantile(double beta);

/// [S(P_n, Q) +- z_{1-alpha/2} sqrt(var / n)].
ConfidenceInterval ci_one_sample(const DiscreteMeasure& p_n, const DiscreteMeasure& q, const SolverConfig& cfg,
                                 double alpha, std::size_t n = 0);

/// [S(P_n, Q_m) +- z_{1-alpha/2} sqrt(var (n+m)/(n m))].
ConfidenceInterval ci_two_sample(const DiscreteMeasure& p_n, const DiscreteMeasure& q_m, const SolverConfig& cfg,
                                 double alpha, std::size_t n = 0, std::size_t m = 0);

/// Interval from an already solved pair; used by ci_two_sample and the harness.
ConfidenceInterval ci_two_sample_from(const DiscreteMeasure& p_n, const DiscreteMeasure& q_m,
                                      const PotentialPair& pair, double alpha, std::size_t n = 0,
                                      std::size_t m = 0);

/// S(P,Q) - (S(P,P) + S(Q,Q)) / 2 with one solver configuration for all three.
DivergenceValue sinkhorn_divergence(const DiscreteMeasure& p, const DiscreteMeasure& q, const SolverConfig& cfg);

}  // namespace eot

#endif  // EOT_INFERENCE_HPP
