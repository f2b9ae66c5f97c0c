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
#include "eot/potentials.hpp"
#include "eot/sinkhorn.hpp"
#include "test_support.hpp"

using namespace eot;

namespace {

SolveResult unit_solve(const DiscreteMeasure& p, const DiscreteMeasure& q) {
  SolverConfig cfg;
  cfg.tol = 1e-13;
  return solve(p, q, cfg);
}

}  // namespace

TEST_CASE("multi-index enumeration") {
  CHECK(multi_indices_of_order(2, 2) == std::vector<MultiIndex>{{2, 0}, {1, 1}, {0, 2}});
  CHECK(multi_indices_of_order(3, 0) == std::vector<MultiIndex>{{0, 0, 0}});
  // Number of multi-indices of order <= s in d variables is C(s + d, d).
  CHECK(graded_multi_indices(3, 3).size() == 20);
  CHECK(graded_multi_indices(2, 6).size() == 28);
  CHECK(graded_multi_indices(2, 2).front() == MultiIndex{0, 0});
}

TEST_CASE("extension reproduces the potential on its own support") {
  SplitMix64 rng(41);
  const DiscreteMeasure p = testing::random_measure(rng, 7, 2);
  const DiscreteMeasure q = testing::random_measure(rng, 5, 2);
  const SolveResult r = unit_solve(p, q);
  const ExtendedPotential f(r.pair, p, q, PotentialSide::kF);
  const ExtendedPotential g(r.pair, p, q, PotentialSide::kG);
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(f.value(p.point(i)) == doctest::Approx(r.pair.f[i]).epsilon(1e-11));
  for (std::size_t j = 0; j < q.size(); ++j) CHECK(g.value(q.point(j)) == doctest::Approx(r.pair.g[j]).epsilon(1e-11));
}

TEST_CASE("gradient is x minus the conditional mean") {
  SplitMix64 rng(42);
  const DiscreteMeasure p = testing::random_measure(rng, 4, 2);
  const DiscreteMeasure q = testing::random_measure(rng, 6, 2);
  const SolveResult r = unit_solve(p, q);
  const ExtendedPotential f(r.pair, p, q, PotentialSide::kF);
  const std::vector<double> x{0.2, 0.9};
  const MomentTable mt = f.conditional_moments(x, 1);
  CHECK(f.derivative(x, std::vector<int>{1, 0}) == doctest::Approx(x[0] - mt.at({1, 0})).epsilon(1e-13));
  CHECK(f.derivative(x, std::vector<int>{0, 1}) == doctest::Approx(x[1] - mt.at({0, 1})).epsilon(1e-13));
}

TEST_CASE("Hessian is identity minus the conditional covariance") {
  SplitMix64 rng(43);
  const DiscreteMeasure p = testing::random_measure(rng, 3, 2);
  const DiscreteMeasure q = testing::random_measure(rng, 5, 2);
  const SolveResult r = unit_solve(p, q);
  const ExtendedPotential f(r.pair, p, q, PotentialSide::kF);
  const std::vector<double> x{0.5, 0.5};
  const MomentTable mt = f.conditional_moments(x, 2);
  const double cov01 = mt.at({1, 1}) - mt.at({1, 0}) * mt.at({0, 1});
  const double var0 = mt.at({2, 0}) - mt.at({1, 0}) * mt.at({1, 0});
  CHECK(f.derivative(x, std::vector<int>{1, 1}) == doctest::Approx(-cov01).epsilon(1e-12));
  CHECK(f.derivative(x, std::vector<int>{2, 0}) == doctest::Approx(1.0 - var0).epsilon(1e-12));
}

TEST_CASE("derivatives match finite differences up to order 3") {
  SplitMix64 rng(44);
  const DiscreteMeasure p = testing::random_measure(rng, 5, 2);
  const DiscreteMeasure q = testing::random_measure(rng, 5, 2);
  const SolveResult r = unit_solve(p, q);
  const ExtendedPotential f(r.pair, p, q, PotentialSide::kF);
  const oracle::ScalarField naive = oracle::naive_extension(q, r.pair.g, 1.0);
  const std::vector<double> x{0.31, 0.62};
  for (int order = 1; order <= 3; ++order) {
    for (const MultiIndex& alpha : multi_indices_of_order(2, order)) {
      const double fd = oracle::finite_difference(naive, x, alpha, 1e-4);
      const double exact = f.derivative(x, alpha);
      CHECK(std::abs(exact - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("a single opposite atom gives a pure quadratic") {
  const DiscreteMeasure p = DiscreteMeasure::dirac({0.0, 0.0});
  const DiscreteMeasure q = DiscreteMeasure::dirac({1.0, 2.0});
  const SolveResult r = unit_solve(p, q);
  const ExtendedPotential f(r.pair, p, q, PotentialSide::kF);
  const std::vector<double> x{0.3, -0.4};
  // f(x) = |x - y|^2 / 2 - g, so the gradient is x - y and higher cumulants vanish.
  CHECK(f.derivative(x, std::vector<int>{1, 0}) == doctest::Approx(-0.7));
  CHECK(f.derivative(x, std::vector<int>{0, 2}) == doctest::Approx(1.0));
  CHECK(std::abs(f.derivative(x, std::vector<int>{2, 1})) < 1e-12);
  CHECK(std::abs(f.derivative(x, std::vector<int>{4, 2})) < 1e-12);
}

TEST_CASE("derivative preconditions") {
  const DiscreteMeasure p = DiscreteMeasure::uniform({0.0, 1.0}, 1);
  SolverConfig cfg;
  cfg.eps = 2.0;
  const SolveResult r = solve(p, p, cfg);
  const ExtendedPotential f(r.pair, p, p, PotentialSide::kF);
  const std::vector<double> x{0.5};
  CHECK_NOTHROW(f.value(x));
  CHECK_THROWS_AS(f.derivative(x, std::vector<int>{1}), Error);

  const SolveResult unit = solve(p, p, SolverConfig{});
  const ExtendedPotential fu(unit.pair, p, p, PotentialSide::kF);
  try {
    fu.derivative(x, std::vector<int>{7});
    FAIL("expected UnsupportedOrder");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnsupportedOrder);
  }
}

TEST_CASE("holder norm of an explicit field") {
  // field(x) = x^2 on [0, 1]: sup terms 1, 2, 2 for orders 0, 1, 2.
  const DerivativeField field = [](std::span<const double> x, std::span<const MultiIndex> alphas,
                                   std::span<double> out) {
    for (std::size_t k = 0; k < alphas.size(); ++k) {
      const int a = alphas[k][0];
      out[k] = a == 0 ? x[0] * x[0] : a == 1 ? 2 * x[0] : a == 2 ? 2.0 : 0.0;
    }
  };
  const GridSpec grid{CompactDomain({0.0}, {1.0}), 11};
  const HolderNormEstimate h = holder_norm(field, 1, HolderOrder{2}, grid);
  CHECK(h.value == doctest::Approx(5.0));
  CHECK(h.sup_norm() == doctest::Approx(1.0));
  CHECK(h.grid_points == 11);
  CHECK_THROWS_AS(holder_norm(field, 1, HolderOrder{7}, grid), Error);
}

TEST_CASE("difference of identical fields has zero norm") {
  SplitMix64 rng(45);
  const DiscreteMeasure p = testing::random_measure(rng, 4, 2);
  const DiscreteMeasure q = testing::random_measure(rng, 4, 2);
  const SolveResult r = unit_solve(p, q);
  const DerivativeField f = as_field(ExtendedPotential(r.pair, p, q, PotentialSide::kF));
  const GridSpec grid{CompactDomain({0.0, 0.0}, {1.0, 1.0}), 5};
  CHECK(holder_norm(difference(f, f), 2, HolderOrder{2}, grid).value == 0.0);
  const double base = holder_norm(f, 2, HolderOrder{2}, grid).value;
  CHECK(holder_norm(scaled(f, -2.0), 2, HolderOrder{2}, grid).value == doctest::Approx(2 * base));
  CHECK(holder_norm(sum(f, f), 2, HolderOrder{2}, grid).value == doctest::Approx(2 * base));
}

TEST_CASE("default grid and order") {
  CHECK(HolderOrder::default_for(1).s == 1);
  CHECK(HolderOrder::default_for(2).s == 2);
  CHECK(HolderOrder::default_for(3).s == 2);
  CHECK(GridSpec::default_for(CompactDomain({0.0, 0.0}, {1.0, 1.0})).size() == 41 * 41);
  CHECK(GridSpec::default_for(CompactDomain({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0})).points_per_axis == 21);
}

TEST_CASE("potential bounds hold and require the zero-mean convention") {
  SplitMix64 rng(46);
  const DiscreteMeasure p = testing::random_measure(rng, 6, 2);
  const DiscreteMeasure q = testing::random_measure(rng, 6, 2);
  const SolveResult r = unit_solve(p, q);
  const DiscreteMeasure* both[] = {&p, &q};
  const CompactDomain dom = bounding_domain(both);
  try {
    check_potential_bounds(r.pair, p, q, dom);
    FAIL("expected WrongNormalization");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kWrongNormalization);
  }
  const PotentialBoundsReport rep =
      check_potential_bounds(normalize(r.pair, p, q, Normalization::kZeroMeanG), p, q, dom);
  CHECK(rep.sup_ok);
  CHECK(rep.lipschitz_ok);
  CHECK(rep.sup_bound == doctest::Approx(0.5 * dom.diameter() * dom.diameter()));
}
