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
#include "eot/oracle.hpp"
#include "eot/sinkhorn.hpp"
#include "test_support.hpp"

using namespace eot;

namespace {

SolverConfig config(double eps, double tol = 1e-12) {
  SolverConfig cfg;
  cfg.eps = eps;
  cfg.tol = tol;
  return cfg;
}

double mean(const std::vector<double>& v, std::span<const double> w) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * w[i];
  return s;
}

}  // namespace

TEST_CASE("two Diracs cost half the squared distance") {
  const DiscreteMeasure p = DiscreteMeasure::dirac({0.0});
  const DiscreteMeasure q = DiscreteMeasure::dirac({3.0});
  const SolveResult r = solve(p, q, config(1.0, 1e-9));
  CHECK(r.report.converged);
  CHECK(cost(p, q, r.pair) == doctest::Approx(4.5).epsilon(1e-15));
  CHECK(r.pair.f[0] == doctest::Approx(2.25));
  CHECK(r.pair.g[0] == doctest::Approx(2.25));
}

TEST_CASE("squared ground cost doubles the Dirac cost") {
  const DiscreteMeasure p = DiscreteMeasure::dirac({0.0, 0.0});
  const DiscreteMeasure q = DiscreteMeasure::dirac({1.0, 2.0});
  SolverConfig cfg = config(0.7);
  cfg.cost_scale = kSquaredCost;
  CHECK(entropic_cost(p, q, cfg) == doctest::Approx(5.0));
}

TEST_CASE("solver output satisfies the marginal constraints") {
  for (std::size_t i = 0; i < 9; ++i) {
    const testing::Instance inst = testing::random_instance(21, i);
    const SolveResult r = solve(inst.p, inst.q, config(inst.eps));
    CHECK(marginal_residual(inst.p, inst.q, r.pair) < 1e-11);
    const TransportPlan t = plan(inst.p, inst.q, r.pair);
    CHECK(testing::sup_diff(t.row_sums(), std::vector<double>(inst.p.weights().begin(), inst.p.weights().end())) <
          1e-12);
    CHECK(testing::sup_diff(t.col_sums(), std::vector<double>(inst.q.weights().begin(), inst.q.weights().end())) <
          1e-12);
  }
}

TEST_CASE("primal and dual values agree at the optimum") {
  for (std::size_t i = 0; i < 9; ++i) {
    const testing::Instance inst = testing::random_instance(22, i);
    const SolveResult r = solve(inst.p, inst.q, config(inst.eps));
    const double dual = dual_objective(inst.p, inst.q, r.pair);
    const double primal = primal_cost(inst.p, inst.q, plan(inst.p, inst.q, r.pair), inst.eps);
    CHECK(std::abs(primal - dual) < 1e-10);
    CHECK(dual == doctest::Approx(r.report.dual_value).epsilon(1e-14));
  }
}

TEST_CASE("dense and streamed cost matrices give identical potentials") {
  const testing::Instance inst = testing::random_instance(23, 4);
  SolverConfig dense = config(inst.eps);
  SolverConfig streamed = dense;
  streamed.dense_limit_bytes = 0;
  const SolveResult a = solve(inst.p, inst.q, dense);
  const SolveResult b = solve(inst.p, inst.q, streamed);
  CHECK(testing::sup_diff(a.pair.f, b.pair.f) < 1e-14);
  CHECK(testing::sup_diff(a.pair.g, b.pair.g) < 1e-14);
}

TEST_CASE("normalization conventions") {
  const testing::Instance inst = testing::random_instance(24, 2);
  const SolveResult r = solve(inst.p, inst.q, config(inst.eps));
  CHECK(r.pair.normalization == Normalization::kEqualMeans);
  CHECK(mean(r.pair.f, inst.p.weights()) == doctest::Approx(mean(r.pair.g, inst.q.weights())));

  const PotentialPair g0 = normalize(r.pair, inst.p, inst.q, Normalization::kZeroMeanG);
  CHECK(std::abs(mean(g0.g, inst.q.weights())) < 1e-14);
  CHECK(g0.normalization == Normalization::kZeroMeanG);
  CHECK(dual_objective(inst.p, inst.q, g0) == doctest::Approx(dual_objective(inst.p, inst.q, r.pair)));

  const PotentialPair back = normalize(g0, inst.p, inst.q, Normalization::kEqualMeans);
  CHECK(testing::sup_diff(back.f, r.pair.f) < 1e-13);
  CHECK_THROWS_AS(normalize(r.pair, inst.p, inst.q, Normalization::kRaw), Error);
}

TEST_CASE("dual objective is invariant under (f + c, g - c)") {
  const testing::Instance inst = testing::random_instance(25, 5);
  PotentialPair pair = solve(inst.p, inst.q, config(inst.eps)).pair;
  const double before = dual_objective(inst.p, inst.q, pair);
  for (double& v : pair.f) v += 3.25;
  for (double& v : pair.g) v -= 3.25;
  CHECK(dual_objective(inst.p, inst.q, pair) == doctest::Approx(before).epsilon(1e-13));
}

TEST_CASE("cost refuses non-optimal potentials") {
  const testing::Instance inst = testing::random_instance(26, 1);
  PotentialPair pair = solve(inst.p, inst.q, config(inst.eps)).pair;
  pair.f[0] += 0.1;
  try {
    cost(inst.p, inst.q, pair);
    FAIL("expected NotOptimal");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotOptimal);
  }
}

TEST_CASE("iteration budget exhaustion returns the last iterate") {
  const testing::Instance inst = testing::random_instance(27, 0);
  SolverConfig cfg = config(0.01);
  cfg.max_iter = 3;
  try {
    solve(inst.p, inst.q, cfg);
    FAIL("expected NotConverged");
  } catch (const NotConvergedError& e) {
    CHECK(e.code() == ErrorCode::kNotConverged);
    CHECK(e.partial().report.iterations == 3);
    CHECK_FALSE(e.partial().report.converged);
    CHECK(e.partial().pair.f.size() == inst.p.size());
  }
}

TEST_CASE("invalid configurations are rejected") {
  const DiscreteMeasure p = DiscreteMeasure::dirac({0.0});
  const DiscreteMeasure q2 = DiscreteMeasure::dirac({0.0, 1.0});
  try {
    solve(p, p, config(0.0));
    FAIL("expected NonPositiveEps");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonPositiveEps);
  }
  try {
    solve(p, q2, config(1.0));
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDimensionMismatch);
  }
}

TEST_CASE("primal cost rejects negative plans") {
  const DiscreteMeasure p = DiscreteMeasure::uniform({0.0, 1.0}, 1);
  TransportPlan t{2, 2, {0.6, -0.1, -0.1, 0.6}};
  try {
    primal_cost(p, p, t, 1.0);
    FAIL("expected NegativeEntry");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNegativeEntry);
  }
}

TEST_CASE("primal cost of the product coupling has zero entropy term") {
  const DiscreteMeasure p = DiscreteMeasure::uniform({0.0, 1.0}, 1);
  TransportPlan t{2, 2, {0.25, 0.25, 0.25, 0.25}};
  // 0.5 * (0 + 1 + 1 + 0) / 4 with KL(product | product) = 0.
  CHECK(primal_cost(p, p, t, 1.0) == doctest::Approx(0.25));
}

TEST_CASE("large eps tends to the product coupling cost") {
  const DiscreteMeasure p = DiscreteMeasure::uniform({0.0, 1.0}, 1);
  const DiscreteMeasure q = DiscreteMeasure::uniform({0.0, 2.0}, 1);
  // Expected half squared distance under independence: (0 + 4 + 1 + 1) / 8.
  CHECK(entropic_cost(p, q, config(1e6)) == doctest::Approx(0.75).epsilon(1e-5));
}
