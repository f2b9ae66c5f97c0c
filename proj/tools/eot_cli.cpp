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

// eot command-line tool. Talks to the library only through the C API.
//
// Exit codes: 0 success, 2 usage or argument error, 3 solver did not
// converge, 4 file or format error, 1 anything else.

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "eot/eot.h"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNotConverged = 3;
constexpr int kExitIo = 4;

struct Failure {
  eot_status status;
  std::string message;
};

void check(eot_status status) {
  if (status != EOT_OK) throw Failure{status, eot_last_error()};
}

int exit_code_for(eot_status status) {
  switch (status) {
    case EOT_NOT_CONVERGED: return kExitNotConverged;
    case EOT_MALFORMED_FILE:
    case EOT_NON_SIMPLEX_WEIGHTS:
    case EOT_EMPTY_SUPPORT:
    case EOT_DIMENSION_MISMATCH:
    case EOT_IO_ERROR:
    case EOT_CONFIG_ERROR: return kExitIo;
    case EOT_INVALID_ARGUMENT:
    case EOT_NON_POSITIVE_EPS:
    case EOT_OUT_OF_RANGE: return kExitUsage;
    default: return 1;
  }
}

struct MeasureDeleter {
  void operator()(eot_measure* m) const { eot_measure_free(m); }
};
struct PotentialsDeleter {
  void operator()(eot_potentials* p) const { eot_potentials_free(p); }
};
struct ConfigDeleter {
  void operator()(eot_experiment_config* c) const { eot_experiment_config_free(c); }
};
struct ResultDeleter {
  void operator()(eot_experiment_result* r) const { eot_experiment_result_free(r); }
};
struct StringDeleter {
  void operator()(char* s) const { eot_string_free(s); }
};
using Measure = std::unique_ptr<eot_measure, MeasureDeleter>;

Measure load(const std::string& path) {
  eot_measure* m = nullptr;
  check(eot_measure_load(path.c_str(), &m));
  return Measure(m);
}

std::string fmt(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string full(double v) { return fmt(v, 17); }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Failure{EOT_IO_ERROR, "cannot write " + path};
}

// Two-column human table, values at 6 significant digits.
void print_pairs(const std::vector<std::pair<std::string, double>>& rows) {
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.first.size());
  for (const auto& [name, value] : rows) {
    std::cout << name << std::string(width - name.size() + 2, ' ') << fmt(value, 6) << '\n';
  }
}

// Re-prints a CSV document as an aligned table with 6 significant digits.
void print_csv_as_table(const std::string& csv) {
  std::vector<std::vector<std::string>> cells;
  std::size_t start = 0;
  while (start < csv.size()) {
    std::size_t eol = csv.find('\n', start);
    if (eol == std::string::npos) eol = csv.size();
    std::vector<std::string> row;
    std::size_t pos = start;
    while (true) {
      const std::size_t comma = csv.find(',', pos);
      const std::size_t end = (comma == std::string::npos || comma > eol) ? eol : comma;
      std::string token = csv.substr(pos, end - pos);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
      if (!token.empty() && ec == std::errc() && ptr == token.data() + token.size() &&
          token.find_first_of(".eEn") != std::string::npos) {
        token = fmt(v, 6);
      }
      row.push_back(std::move(token));
      if (end == eol) break;
      pos = end + 1;
    }
    cells.push_back(std::move(row));
    start = eol + 1;
  }
  std::vector<std::size_t> widths;
  for (const auto& row : cells) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  }
  for (const auto& row : cells) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += row[c];
      if (c + 1 < row.size()) line += std::string(widths[c] - row[c].size() + 2, ' ');
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    std::cout << line << '\n';
  }
}

struct Options {
  std::string p, q, out, config, format = "csv", ground_cost = "half";
  double eps = 1.0;
  double tol = 1e-9;
  std::size_t max_iter = 100000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t threads = 0;
  bool one_sample = false;
};

eot_solver_options solver_options(const Options& o) {
  eot_solver_options s;
  eot_solver_options_default(&s);
  s.eps = o.eps;
  s.tol = o.tol;
  s.max_iter = o.max_iter;
  s.cost_scale = o.ground_cost == "squared" ? 1.0 : 0.5;
  return s;
}

std::size_t threads_from_env() {
  const char* env = std::getenv("EOT_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  std::size_t v = 0;
  const std::string s(env);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Failure{EOT_INVALID_ARGUMENT, "EOT_THREADS must be a nonnegative integer"};
  }
  return v;
}

int cmd_solve(const Options& o) {
  const Measure p = load(o.p), q = load(o.q);
  const eot_solver_options s = solver_options(o);
  eot_potentials* raw = nullptr;
  eot_solve_report report{};
  const eot_status status = eot_solve(p.get(), q.get(), &s, &raw, &report);
  const std::unique_ptr<eot_potentials, PotentialsDeleter> pot(raw);
  if (status != EOT_OK && status != EOT_NOT_CONVERGED) check(status);
  const std::string message = status == EOT_NOT_CONVERGED ? eot_last_error() : "";

  if (!o.out.empty() && pot) {
    std::string csv = "side,index,value\n";
    for (eot_side side : {EOT_SIDE_F, EOT_SIDE_G}) {
      const double* v = eot_potentials_values(pot.get(), side);
      for (std::size_t i = 0; i < eot_potentials_size(pot.get(), side); ++i) {
        csv += std::string(side == EOT_SIDE_F ? "f," : "g,") + std::to_string(i) + ',' + full(v[i]) + '\n';
      }
    }
    write_file(o.out, csv);
  }
  if (status == EOT_NOT_CONVERGED) throw Failure{status, message};

  double c = 0.0;
  check(eot_cost(p.get(), q.get(), pot.get(), o.tol, &c));
  print_pairs({{"cost", c},
               {"dual", report.dual_value},
               {"iterations", static_cast<double>(report.iterations)},
               {"residual", report.final_residual}});
  return 0;
}

int cmd_cost(const Options& o) {
  const Measure p = load(o.p), q = load(o.q);
  const eot_solver_options s = solver_options(o);
  double c = 0.0;
  check(eot_entropic_cost(p.get(), q.get(), &s, &c));
  std::cout << full(c) << '\n';
  if (!o.out.empty()) write_file(o.out, "cost\n" + full(c) + '\n');
  return 0;
}

int cmd_divergence(const Options& o) {
  const Measure p = load(o.p), q = load(o.q);
  const eot_solver_options s = solver_options(o);
  eot_divergence d{};
  check(eot_divergence_compute(p.get(), q.get(), &s, &d));
  print_pairs({{"divergence", d.value}, {"s_pq", d.s_pq}, {"s_pp", d.s_pp}, {"s_qq", d.s_qq}});
  if (!o.out.empty()) {
    write_file(o.out, "divergence,s_pq,s_pp,s_qq\n" + full(d.value) + ',' + full(d.s_pq) + ',' + full(d.s_pp) + ',' +
                          full(d.s_qq) + '\n');
  }
  return 0;
}

int cmd_ci(const Options& o) {
  const Measure p = load(o.p), q = load(o.q);
  const eot_solver_options s = solver_options(o);
  eot_interval ci{};
  if (o.one_sample) {
    check(eot_ci_one_sample(p.get(), q.get(), &s, o.alpha, &ci));
  } else {
    check(eot_ci_two_sample(p.get(), q.get(), &s, o.alpha, &ci));
  }
  print_pairs({{"center", ci.center},
               {"half_width", ci.half_width},
               {"variance", ci.variance},
               {"lower", ci.lower},
               {"upper", ci.upper},
               {"level", ci.level}});
  if (!o.out.empty()) {
    write_file(o.out, "center,half_width,variance,lower,upper,level\n" + full(ci.center) + ',' + full(ci.half_width) +
                          ',' + full(ci.variance) + ',' + full(ci.lower) + ',' + full(ci.upper) + ',' +
                          full(ci.level) + '\n');
  }
  return 0;
}

int cmd_experiment(const Options& o, bool coverage, std::size_t threads) {
  eot_experiment_config* raw_cfg = nullptr;
  check(eot_experiment_config_load(o.config.c_str(), &raw_cfg));
  const std::unique_ptr<eot_experiment_config, ConfigDeleter> cfg(raw_cfg);
  const std::string kind = eot_experiment_config_kind(cfg.get());
  if (coverage != (kind == "coverage")) {
    throw Failure{EOT_CONFIG_ERROR, "config kind '" + kind + "' does not match the '" +
                                        (coverage ? "coverage" : "rate") + "' subcommand"};
  }
  if (o.seed_set) check(eot_experiment_config_set_seed(cfg.get(), o.seed));

  eot_experiment_result* raw_result = nullptr;
  check(eot_experiment_run(cfg.get(), threads, &raw_result));
  const std::unique_ptr<eot_experiment_result, ResultDeleter> result(raw_result);
  const eot_format format = o.format == "plot" ? EOT_FORMAT_PLOT_DATA : EOT_FORMAT_CSV_TABLE;

  char* raw_text = nullptr;
  check(eot_experiment_result_render(result.get(), format, &raw_text));
  const std::unique_ptr<char, StringDeleter> text(raw_text);
  print_csv_as_table(text.get());
  if (!o.out.empty()) check(eot_experiment_result_emit(result.get(), o.out.c_str(), format));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropic optimal transport: solver, inference and Monte Carlo experiments"};
  app.require_subcommand(1, 1);
  Options o;

  const auto add_pair = [&](CLI::App* sub) {
    sub->add_option("--p", o.p, "measure file for P (CSV: w,x1,...,xd)")->required();
    sub->add_option("--q", o.q, "measure file for Q")->required();
    sub->add_option("--eps", o.eps, "regularization strength")->capture_default_str();
    sub->add_option("--tol", o.tol, "stopping tolerance on the marginal residual")->capture_default_str();
    sub->add_option("--max-iter", o.max_iter, "maximum Sinkhorn sweeps")->capture_default_str();
    sub->add_option("--ground-cost", o.ground_cost, "half: |x-y|^2/2, squared: |x-y|^2")
        ->check(CLI::IsMember({"half", "squared"}))
        ->capture_default_str();
    sub->add_option("--out", o.out, "write machine-readable CSV here");
  };
  const auto add_experiment = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "experiment config file")->required();
    sub->add_option("--seed", o.seed, "master seed, overrides the config");
    sub->add_option("--threads", o.threads, "worker threads (0: all cores, 1: serial)");
    sub->add_option("--format", o.format, "output layout")->check(CLI::IsMember({"csv", "plot"}))->capture_default_str();
    sub->add_option("--out", o.out, "write the result CSV here");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve for the dual potentials and print the cost");
  add_pair(solve);
  CLI::App* cost = app.add_subcommand("cost", "print the entropic transportation cost");
  add_pair(cost);
  CLI::App* divergence = app.add_subcommand("divergence", "print the Sinkhorn divergence");
  add_pair(divergence);
  CLI::App* ci = app.add_subcommand("ci", "confidence interval for the cost of the sampled measures");
  add_pair(ci);
  ci->add_option("--alpha", o.alpha, "interval level is 1 - alpha")->capture_default_str();
  ci->add_flag("--one-sample", o.one_sample, "treat --q as the population rather than a sample");
  CLI::App* coverage = app.add_subcommand("coverage", "run a coverage experiment");
  add_experiment(coverage);
  CLI::App* rate = app.add_subcommand("rate", "run a convergence-rate experiment");
  add_experiment(rate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    std::size_t threads = o.threads;
    const bool threads_given =
        (coverage->parsed() && coverage->count("--threads") > 0) || (rate->parsed() && rate->count("--threads") > 0);
    if (!threads_given) threads = threads_from_env();
    o.seed_set = (coverage->parsed() && coverage->count("--seed") > 0) || (rate->parsed() && rate->count("--seed") > 0);

    if (solve->parsed()) return cmd_solve(o);
    if (cost->parsed()) return cmd_cost(o);
    if (divergence->parsed()) return cmd_divergence(o);
    if (ci->parsed()) return cmd_ci(o);
    if (coverage->parsed()) return cmd_experiment(o, true, threads);
    if (rate->parsed()) return cmd_experiment(o, false, threads);
  } catch (const Failure& f) {
    std::cerr << "eot: " << eot_status_name(f.status) << ": " << f.message << '\n';
    return exit_code_for(f.status);
  }
  return kExitUsage;
}
