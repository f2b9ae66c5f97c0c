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

// Runs the eot executable on fixture files. EOT_CLI and EOT_TEST_DATA are
// set by the build.

#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "eot/eot.h"

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " '" EOT_CLI "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t k = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), k);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const std::string& name) { return std::string(EOT_TEST_DATA) + "/" + name; }

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::filesystem::path temp(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST_CASE("solve prints the Dirac cost") {
  const Run r = run("solve --p " + data("dirac0.csv") + " --q " + data("dirac3.csv") + " --eps 1 --tol 1e-9");
  CHECK(r.code == 0);
  CHECK(r.out.find("cost        4.5\n") != std::string::npos);
}

TEST_CASE("solve writes potentials with full precision") {
  const auto out = temp("eot_cli_pot.csv");
  const Run r = run("solve --p " + data("sample_p.csv") + " --q " + data("sample_q.csv") + " --out " + out.string());
  CHECK(r.code == 0);
  const std::string csv = slurp(out);
  CHECK(csv.rfind("side,index,value\nf,0,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 81);
  std::filesystem::remove(out);
}

TEST_CASE("cost output matches the library bit for bit") {
  const Run r = run("cost --p " + data("sample_p.csv") + " --q " + data("sample_q.csv") + " --eps 0.5");
  REQUIRE(r.code == 0);
  eot_measure *p = nullptr, *q = nullptr;
  REQUIRE(eot_measure_load(data("sample_p.csv").c_str(), &p) == EOT_OK);
  REQUIRE(eot_measure_load(data("sample_q.csv").c_str(), &q) == EOT_OK);
  eot_solver_options opt;
  eot_solver_options_default(&opt);
  opt.eps = 0.5;
  double c = 0.0;
  REQUIRE(eot_entropic_cost(p, q, &opt, &c) == EOT_OK);
  CHECK(std::stod(r.out) == c);
  eot_measure_free(p);
  eot_measure_free(q);
}

TEST_CASE("ci prints center, half-width and variance") {
  const Run r = run("ci --p " + data("sample_p.csv") + " --q " + data("sample_q.csv") + " --eps 2 --alpha 0.05");
  CHECK(r.code == 0);
  CHECK(r.out.find("center") != std::string::npos);
  CHECK(r.out.find("half_width") != std::string::npos);
  CHECK(r.out.find("variance") != std::string::npos);
}

TEST_CASE("divergence of a measure with itself is zero") {
  const auto out = temp("eot_cli_div.csv");
  const Run r =
      run("divergence --p " + data("sample_p.csv") + " --q " + data("sample_p.csv") + " --out " + out.string());
  CHECK(r.code == 0);
  std::istringstream lines(slurp(out));
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK(header == "divergence,s_pq,s_pp,s_qq");
  CHECK(std::abs(std::stod(row.substr(0, row.find(',')))) < 1e-10);
  std::filesystem::remove(out);
}

TEST_CASE("exit codes") {
  CHECK(run("").code == 2);
  CHECK(run("solve --p " + data("dirac0.csv")).code == 2);
  CHECK(run("solve --p " + data("dirac0.csv") + " --q " + data("dirac3.csv") + " --eps -1").code == 2);
  CHECK(run("cost --p " + data("missing.csv") + " --q " + data("dirac3.csv")).code == 4);
  CHECK(run("cost --p " + data("bad_weights.csv") + " --q " + data("dirac3.csv")).code == 4);
  CHECK(run("cost --p " + data("malformed.csv") + " --q " + data("dirac3.csv")).code == 4);
  CHECK(run("solve --p " + data("sample_p.csv") + " --q " + data("sample_q.csv") + " --eps 0.01 --max-iter 3").code ==
        3);
  CHECK(run("rate --config " + data("coverage_small.cfg")).code == 4);
  CHECK(run("--help").code == 0);
}

TEST_CASE("coverage file equals the library result") {
  const auto out = temp("eot_cli_cov.csv");
  const Run r = run("coverage --config " + data("coverage_small.cfg") + " --out " + out.string());
  REQUIRE(r.code == 0);

  eot_experiment_config* cfg = nullptr;
  REQUIRE(eot_experiment_config_load(data("coverage_small.cfg").c_str(), &cfg) == EOT_OK);
  eot_experiment_result* res = nullptr;
  REQUIRE(eot_experiment_run(cfg, 1, &res) == EOT_OK);
  char* text = nullptr;
  REQUIRE(eot_experiment_result_render(res, EOT_FORMAT_CSV_TABLE, &text) == EOT_OK);
  CHECK(slurp(out) == std::string(text));
  eot_string_free(text);
  eot_experiment_result_free(res);
  eot_experiment_config_free(cfg);
  std::filesystem::remove(out);
}

TEST_CASE("seed and thread count behave") {
  const auto a = temp("eot_cli_rate_a.csv");
  const auto b = temp("eot_cli_rate_b.csv");
  const auto c = temp("eot_cli_rate_c.csv");
  const std::string base = "rate --config " + data("rate_small.cfg") + " --format plot";
  REQUIRE(run(base + " --threads 1 --out " + a.string()).code == 0);
  REQUIRE(run(base + " --out " + b.string(), "EOT_THREADS=3").code == 0);
  REQUIRE(run(base + " --seed 4 --out " + c.string()).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a) != slurp(c));
  CHECK(run(base, "EOT_THREADS=abc").code == 2);
  for (const auto& p : {a, b, c}) std::filesystem::remove(p);
}
