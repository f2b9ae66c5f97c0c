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

// Exercises the shared library through its C header only.

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "eot/eot.h"

namespace {

eot_measure* make(std::vector<double> pts, std::size_t dim, std::vector<double> w) {
  eot_measure* m = nullptr;
  REQUIRE(eot_measure_create(pts.data(), w.size(), dim, w.data(), &m) == EOT_OK);
  return m;
}

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(eot_version()) == "0.1.0");
  CHECK(std::string(eot_status_name(EOT_OK)) == "Ok");
  CHECK(std::string(eot_status_name(EOT_NOT_CONVERGED)) == "NotConverged");
}

TEST_CASE("solve and query a Dirac pair") {
  eot_measure* p = make({0.0}, 1, {1.0});
  eot_measure* q = make({3.0}, 1, {1.0});
  eot_solver_options opt;
  eot_solver_options_default(&opt);
  CHECK(opt.eps == 1.0);
  CHECK(opt.cost_scale == 0.5);

  eot_potentials* pot = nullptr;
  eot_solve_report rep{};
  REQUIRE(eot_solve(p, q, &opt, &pot, &rep) == EOT_OK);
  CHECK(rep.converged == 1);
  CHECK(eot_potentials_size(pot, EOT_SIDE_F) == 1);
  CHECK(eot_potentials_normalization(pot) == EOT_NORM_EQ);
  double c = 0.0;
  CHECK(eot_cost(p, q, pot, 1e-9, &c) == EOT_OK);
  CHECK(c == doctest::Approx(4.5));

  double plan[1] = {0.0};
  CHECK(eot_plan(p, q, pot, plan, 1) == EOT_OK);
  CHECK(plan[0] == doctest::Approx(1.0));
  CHECK(eot_plan(p, q, pot, plan, 0) == EOT_OUT_OF_RANGE);
  double primal = 0.0;
  CHECK(eot_primal_cost(p, q, plan, 1.0, 0.5, &primal) == EOT_OK);
  CHECK(primal == doctest::Approx(4.5));

  CHECK(eot_potentials_normalize(pot, p, q, EOT_NORM_G0) == EOT_OK);
  CHECK(eot_potentials_values(pot, EOT_SIDE_G)[0] == 0.0);
  CHECK(eot_potentials_values(pot, EOT_SIDE_F)[0] == doctest::Approx(4.5));

  const double x[] = {1.0};
  const int alpha[] = {1};
  double v = 0.0;
  CHECK(eot_potential_value(pot, p, q, EOT_SIDE_F, x, &v) == EOT_OK);
  CHECK(v == doctest::Approx(2.0));
  CHECK(eot_potential_derivative(pot, p, q, EOT_SIDE_F, x, alpha, &v) == EOT_OK);
  CHECK(v == doctest::Approx(-2.0));

  eot_potentials_free(pot);
  eot_measure_free(p);
  eot_measure_free(q);
}

TEST_CASE("errors set the status and the message") {
  eot_measure* m = nullptr;
  const double pts[] = {0.0, 1.0};
  const double w[] = {0.5, 0.6};
  CHECK(eot_measure_create(pts, 2, 1, w, &m) == EOT_NON_SIMPLEX_WEIGHTS);
  CHECK(std::strlen(eot_last_error()) > 0);
  CHECK(eot_measure_load("/nonexistent.csv", &m) == EOT_IO_ERROR);
  CHECK(eot_measure_parse("w,x1\n1,2,3\n", &m) == EOT_MALFORMED_FILE);
  CHECK(eot_measure_create(pts, 2, 1, nullptr, &m) == EOT_INVALID_ARGUMENT);
  double z = 0.0;
  CHECK(eot_normal_quantile(1.0, &z) == EOT_OUT_OF_RANGE);
  CHECK(eot_normal_quantile(0.975, &z) == EOT_OK);
  CHECK(z == doctest::Approx(1.959963984540054));
}

TEST_CASE("non-convergence still hands back the iterate") {
  eot_measure* p = make({0.0, 1.0, 2.0}, 1, {0.2, 0.3, 0.5});
  eot_measure* q = make({0.5, 3.0}, 1, {0.3, 0.7});
  eot_solver_options opt;
  eot_solver_options_default(&opt);
  opt.eps = 0.01;
  opt.max_iter = 2;
  eot_potentials* pot = nullptr;
  eot_solve_report rep{};
  CHECK(eot_solve(p, q, &opt, &pot, &rep) == EOT_NOT_CONVERGED);
  REQUIRE(pot != nullptr);
  CHECK(rep.iterations == 2);
  CHECK(rep.converged == 0);
  eot_potentials_free(pot);
  opt.eps = -1.0;
  double c = 0.0;
  CHECK(eot_entropic_cost(p, q, &opt, &c) == EOT_NON_POSITIVE_EPS);
  eot_measure_free(p);
  eot_measure_free(q);
}

TEST_CASE("measure sampling and rescaling") {
  eot_measure* src = make({0.0, 4.0}, 1, {0.5, 0.5});
  eot_measure *a = nullptr, *b = nullptr, *r = nullptr;
  REQUIRE(eot_measure_sample(src, 20, 9, 1, &a) == EOT_OK);
  REQUIRE(eot_measure_sample(src, 20, 9, 1, &b) == EOT_OK);
  CHECK(eot_measure_size(a) == 20);
  CHECK(std::memcmp(eot_measure_points(a), eot_measure_points(b), 20 * sizeof(double)) == 0);
  REQUIRE(eot_measure_rescale(src, 4.0, &r) == EOT_OK);
  CHECK(eot_measure_points(r)[1] == 2.0);
  eot_measure_free(a);
  eot_measure_free(b);
  eot_measure_free(r);
  eot_measure_free(src);
}

TEST_CASE("inference entry points") {
  eot_measure* p = make({0.0, 0.5, 1.0, 1.5}, 1, {0.25, 0.25, 0.25, 0.25});
  eot_measure* q = make({1.0, 2.0, 2.5}, 1, {0.3, 0.3, 0.4});
  eot_interval ci{};
  CHECK(eot_ci_two_sample(p, q, nullptr, 0.05, &ci) == EOT_OK);
  CHECK(ci.lower == doctest::Approx(ci.center - ci.half_width));
  CHECK(ci.level == doctest::Approx(0.95));
  CHECK(eot_ci_one_sample(p, q, nullptr, 0.05, &ci) == EOT_OK);
  eot_divergence d{};
  CHECK(eot_divergence_compute(p, p, nullptr, &d) == EOT_OK);
  CHECK(std::abs(d.value) < 1e-10);
  double g = 0.0;
  CHECK(eot_gaussian_cost(2, 2.0, 1.0, &g) == EOT_OK);
  CHECK(g == doctest::Approx(3.548026).epsilon(1e-7));
  CHECK(eot_normal_cdf(0.0) == 0.5);
  eot_measure_free(p);
  eot_measure_free(q);
}

TEST_CASE("experiment round trip") {
  eot_experiment_config* cfg = nullptr;
  REQUIRE(eot_experiment_config_parse("kind = bias_rate\nscenario = discrete_pair\ndims = 1\nn = 10, 20\n"
                                      "replicates = 3\natoms = 3\n",
                                      nullptr, &cfg) == EOT_OK);
  CHECK(std::string(eot_experiment_config_kind(cfg)) == "bias_rate");
  CHECK(eot_experiment_config_set_seed(cfg, 99) == EOT_OK);
  CHECK(eot_experiment_config_set_solver(cfg, -1.0, 10) == EOT_CONFIG_ERROR);
  char* text = nullptr;
  REQUIRE(eot_experiment_config_format(cfg, &text) == EOT_OK);
  CHECK(std::string(text).find("seed = 99") != std::string::npos);
  eot_string_free(text);

  eot_experiment_result* res = nullptr;
  REQUIRE(eot_experiment_run(cfg, 1, &res) == EOT_OK);
  char* csv = nullptr;
  REQUIRE(eot_experiment_result_render(res, EOT_FORMAT_CSV_TABLE, &csv) == EOT_OK);
  CHECK(std::string(csv).rfind("curve,", 0) == 0);
  eot_string_free(csv);
  CHECK(eot_experiment_result_emit(res, "/nonexistent/dir/x.csv", EOT_FORMAT_PLOT_DATA) == EOT_IO_ERROR);
  eot_experiment_result_free(res);
  eot_experiment_config_free(cfg);

  CHECK(eot_experiment_config_parse("kind = nope\n", nullptr, &cfg) == EOT_CONFIG_ERROR);
}
