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

#include <doctest.h>

#include <cmath>

#include "eot/error.hpp"
#include "eot/inference.hpp"
#include "eot/sinkhorn.hpp"
#include "test_support.hpp"

using namespace eot;

TEST_CASE("normal cdf reference values") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-15));
  CHECK(normal_cdf(-1.0) == doctest::Approx(0.15865525393145707).epsilon(1e-14));
  // Tail branch.
  CHECK(normal_cdf(-5.0) == doctest::Approx(2.866515718791939e-07).epsilon(1e-12));
  CHECK(normal_cdf(-10.0) == doctest::Approx(7.619853024160527e-24).epsilon(1e-11));
  CHECK(normal_cdf(4.0) == doctest::Approx(0.9999683287581669).epsilon(1e-15));
}

TEST_CASE("normal cdf is continuous across the branch switch") {
  CHECK(std::abs(normal_cdf(std::nextafter(3.0, 0.0)) - normal_cdf(3.0)) < 1e-14);
  CHECK(std::abs(normal_cdf(std::nextafter(-3.0, 0.0)) - normal_cdf(-3.0)) < 1e-14);
}

TEST_CASE("normal quantile inverts the cdf") {
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  for (double beta : {1e-10, 0.01, 0.2, 0.7, 0.999}) {
    CHECK(std::abs(normal_cdf(normal_quantile(beta)) - beta) <= 1e-12);
  }
  // 1 - beta is exact in binary only for moderate beta.
  for (double beta : {0.01, 0.2, 0.3}) {
    CHECK(normal_quantile(beta) == doctest::Approx(-normal_quantile(1 - beta)).epsilon(1e-10));
  }
  for (double bad : {0.0, 1.0, -0.5, 2.0}) {
    try {
      normal_quantile(bad);
      FAIL("expected OutOfRange");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kOutOfRange);
    }
  }
}

TEST_CASE("variance estimators by hand") {
  const DiscreteMeasure p({0.0, 1.0, 2.0, 3.0}, 1, {0.25, 0.25, 0.25, 0.25});
  const DiscreteMeasure q({0.0, 1.0}, 1, {0.5, 0.5});
  PotentialPair pair;
  pair.f = {1.0, 2.0, 3.0, 4.0};  // variance 1.25
  pair.g = {0.0, 2.0};            // variance 1
  CHECK(variance_one_sample(p, pair).value == doctest::Approx(1.25));
  CHECK(variance_one_sample(p, pair).n == 4);
  const VarianceEstimate two = variance_two_sample(p, q, pair);
  CHECK(two.value == doctest::Approx(2.0 / 6 * 1.25 + 4.0 / 6 * 1.0));
  CHECK(two.kind == SampleKind::kTwoSample);
  CHECK(variance_two_sample(p, q, pair, 40, 20).value == doctest::Approx(20.0 / 60 * 1.25 + 40.0 / 60 * 1.0));
}

TEST_CASE("variance is invariant under constant shifts") {
  const testing::Instance inst = testing::random_instance(51, 7);
  SolverConfig cfg;
  cfg.eps = inst.eps;
  PotentialPair pair = solve(inst.p, inst.q, cfg).pair;
  const double v1 = variance_one_sample(inst.p, pair).value;
  const double v2 = variance_two_sample(inst.p, inst.q, pair).value;
  for (double& v : pair.f) v += 1e3;
  for (double& v : pair.g) v -= 1e3;
  CHECK(variance_one_sample(inst.p, pair).value == doctest::Approx(v1).epsilon(1e-9));
  CHECK(variance_two_sample(inst.p, inst.q, pair).value == doctest::Approx(v2).epsilon(1e-9));
}

TEST_CASE("interval half widths follow the CLT scaling") {
  SplitMix64 rng(52);
  const DiscreteMeasure p = testing::random_measure(rng, 30, 2);
  const DiscreteMeasure q = testing::random_measure(rng, 20, 2);
  SolverConfig cfg;
  const ConfidenceInterval one = ci_one_sample(p, q, cfg, 0.05);
  const double z = normal_quantile(0.975);
  CHECK(one.half_width == doctest::Approx(z * std::sqrt(one.variance.value / 30)));
  CHECK(one.level == doctest::Approx(0.95));
  CHECK(one.center == doctest::Approx(entropic_cost(p, q, cfg)));
  const ConfidenceInterval two = ci_two_sample(p, q, cfg, 0.1);
  CHECK(two.half_width == doctest::Approx(normal_quantile(0.95) * std::sqrt(two.variance.value * 50.0 / 600.0)));
  CHECK(two.contains(two.center));
  CHECK_THROWS_AS(ci_one_sample(p, q, cfg, 1.0), Error);
}

TEST_CASE("divergence is symmetric, nonnegative and zero on equal inputs") {
  for (std::size_t i = 0; i < 6; ++i) {
    const testing::Instance inst = testing::random_instance(53, i);
    SolverConfig cfg;
    cfg.eps = inst.eps;
    cfg.tol = 1e-12;
    const DivergenceValue pq = sinkhorn_divergence(inst.p, inst.q, cfg);
    const DivergenceValue qp = sinkhorn_divergence(inst.q, inst.p, cfg);
    CHECK(pq.value == doctest::Approx(qp.value).epsilon(1e-10));
    CHECK(pq.value >= -1e-12);
    CHECK(std::abs(sinkhorn_divergence(inst.p, inst.p, cfg).value) < 1e-12);
    CHECK(pq.value == doctest::Approx(pq.s_pq - 0.5 * (pq.s_pp + pq.s_qq)));
  }
}
