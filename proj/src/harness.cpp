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

#include "eot/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include "eot/error.hpp"
#include "eot/inference.hpp"
#include "eot/oracle.hpp"
#include "eot/potentials.hpp"
#include "eot/sinkhorn.hpp"
#include "numeric_util.hpp"

namespace eot {

namespace {

constexpr double kTruthTol = 1e-12;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Stream tags keep the populations and the two samples of a replicate apart.
constexpr std::uint64_t kTagPopulationP = 1;
constexpr std::uint64_t kTagPopulationQ = 2;
constexpr std::uint64_t kTagSampleP = 3;
constexpr std::uint64_t kTagSampleQ = 4;

std::uint64_t cell_seed(std::uint64_t master, ExperimentKind kind, std::size_t d, double eps, std::size_t n) {
  std::uint64_t h = hash_combine(master, static_cast<std::uint64_t>(kind));
  h = hash_combine(h, d);
  h = hash_combine(h, std::bit_cast<std::uint64_t>(eps));
  return hash_combine(h, n);
}

SeedSpec replicate_seed(std::uint64_t cell, std::uint64_t tag, std::size_t replicate) {
  return SeedSpec{hash_combine(cell, tag), replicate};
}

// Empirical measure on the population's atoms, weights count / n.
struct Empirical {
  DiscreteMeasure measure;
  std::vector<std::size_t> atoms;
};

Empirical empirical_on_support(const DiscreteMeasure& population, std::size_t n, const SeedSpec& seed) {
  std::vector<std::size_t> counts(population.size(), 0);
  for (std::size_t i : sample_indices(population, n, seed)) ++counts[i];
  std::vector<double> points, weights;
  std::vector<std::size_t> atoms;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    const auto x = population.point(i);
    points.insert(points.end(), x.begin(), x.end());
    weights.push_back(static_cast<double>(counts[i]) / static_cast<double>(n));
    atoms.push_back(i);
  }
  return {DiscreteMeasure(std::move(points), population.dim(), std::move(weights)), std::move(atoms)};
}

SolverConfig with_eps(SolverConfig cfg, double eps) {
  cfg.eps = eps;
  return cfg;
}

SolverConfig truth_config(SolverConfig cfg, double eps) {
  cfg.eps = eps;
  cfg.tol = std::min(cfg.tol, kTruthTol);
  return cfg;
}

struct Moments {
  double mean = kNaN;
  double sd = kNaN;
  std::size_t evaluated = 0;
  std::size_t excluded = 0;
};

Moments fold(std::span<const std::optional<double>> samples) {
  Moments m;
  std::vector<double> ok;
  for (const auto& s : samples) {
    if (s) {
      ok.push_back(*s);
    } else {
      ++m.excluded;
    }
  }
  m.evaluated = ok.size();
  if (ok.empty()) return m;
  m.mean = detail::compensated_sum(ok) / static_cast<double>(ok.size());
  double ss = 0.0;
  for (double v : ok) ss += (v - m.mean) * (v - m.mean);
  m.sd = ok.size() > 1 ? std::sqrt(ss / static_cast<double>(ok.size() - 1)) : 0.0;
  return m;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// One rate curve is a (d, eps) pair with one statistic per sample; a replicate
// may produce several statistics at once (e.g. one- and two-sample divergence).
struct RateJob {
  std::size_t d;
  double eps;
  std::size_t n;
  std::size_t replicate;
  std::size_t slot;  // index into the (d, eps, n) table
};

using ReplicateFn = std::function<std::vector<double>(const RateJob&, std::uint64_t cell)>;

RateResult run_rate(const ExperimentConfig& cfg, std::size_t threads, const std::vector<std::string>& curve_names,
                    const std::function<ReplicateFn(std::size_t d, double eps)>& prepare) {
  cfg.validate();
  RateResult result;
  result.kind = cfg.kind;

  std::vector<RateJob> jobs;
  std::vector<std::tuple<std::size_t, double, std::size_t>> slots;
  std::vector<ReplicateFn> fns;
  std::vector<std::size_t> slot_fn;
  for (std::size_t d : cfg.dims) {
    for (double eps : cfg.eps_list) {
      fns.push_back(prepare(d, eps));
      for (std::size_t n : cfg.n_list) {
        const std::size_t slot = slots.size();
        slots.emplace_back(d, eps, n);
        slot_fn.push_back(fns.size() - 1);
        for (std::size_t r = 0; r < cfg.replicates; ++r) jobs.push_back({d, eps, n, r, slot});
      }
    }
  }

  const std::size_t stats = curve_names.size();
  std::vector<std::vector<std::optional<double>>> samples(slots.size() * stats,
                                                          std::vector<std::optional<double>>(cfg.replicates));
  parallel_for(jobs.size(), threads, [&](std::size_t k) {
    const RateJob& job = jobs[k];
    const std::uint64_t cell = cell_seed(cfg.seed, cfg.kind, job.d, job.eps, job.n);
    try {
      const std::vector<double> values = fns[slot_fn[job.slot]](job, cell);
      for (std::size_t s = 0; s < stats; ++s) samples[job.slot * stats + s][job.replicate] = values[s];
    } catch (const NotConvergedError&) {
      // Left empty: counted as excluded.
    }
  });

  std::size_t slot = 0;
  for (std::size_t d : cfg.dims) {
    for (double eps : cfg.eps_list) {
      std::vector<RateCurve> curves(stats);
      for (std::size_t s = 0; s < stats; ++s) {
        curves[s].name = curve_names[s];
        curves[s].d = d;
        curves[s].eps = eps;
      }
      for (std::size_t t = 0; t < cfg.n_list.size(); ++t, ++slot) {
        for (std::size_t s = 0; s < stats; ++s) {
          const Moments m = fold(samples[slot * stats + s]);
          curves[s].points.push_back({cfg.n_list[t], m.mean, m.sd, m.evaluated, m.excluded});
        }
      }
      for (RateCurve& c : curves) {
        std::vector<double> ns, ys;
        for (const RatePoint& p : c.points) {
          ns.push_back(static_cast<double>(p.n));
          ys.push_back(p.mean);
        }
        c.fit = fit_log_log(ns, ys);
        result.curves.push_back(std::move(c));
      }
    }
  }
  return result;
}

}  // namespace

std::size_t resolve_threads(std::size_t threads) {
  if (threads != 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min(resolve_threads(threads), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

const RateCurve* RateResult::find(std::string_view name, std::size_t d, double eps) const {
  for (const RateCurve& c : curves) {
    if (c.name == name && c.d == d && c.eps == eps) return &c;
  }
  return nullptr;
}

DiscreteScenario discrete_scenario(const ExperimentConfig& cfg, std::size_t d) {
  if (!cfg.p_file.empty()) {
    DiscreteMeasure p = load_measure(cfg.p_file);
    DiscreteMeasure q = load_measure(cfg.q_file);
    if (p.dim() != d || q.dim() != d) {
      fail(ErrorCode::kConfigError, "measure files are in R^" + std::to_string(p.dim()) + ", config asks for d = " +
                                        std::to_string(d));
    }
    return {std::move(p), std::move(q)};
  }
  const auto draw = [&](std::uint64_t tag) {
    SplitMix64 rng(SeedSpec{hash_combine(hash_combine(cfg.seed, d), tag), 0});
    std::vector<double> pts(cfg.atoms * d);
    for (double& v : pts) v = rng.uniform();
    return DiscreteMeasure::uniform(std::move(pts), d);
  };
  return {draw(kTagPopulationP), draw(kTagPopulationQ)};
}

LineFit fit_log_log(std::span<const double> n, std::span<const double> y) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double a = std::abs(y[i]);
    if (n[i] > 0.0 && a > 0.0 && std::isfinite(a)) {
      xs.push_back(std::log(n[i]));
      ys.push_back(std::log(a));
    }
  }
  LineFit fit{kNaN, kNaN, kNaN};
  const std::size_t k = xs.size();
  if (k < 2) return fit;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (k > 2) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double r = ys[i] - fit.intercept - fit.slope * xs[i];
      ssr += r * r;
    }
    fit.slope_se = std::sqrt(ssr / static_cast<double>(k - 2) / sxx);
  }
  return fit;
}

CoverageResult run_coverage(const ExperimentConfig& cfg, std::size_t threads) {
  cfg.validate();
  if (cfg.kind != ExperimentKind::kCoverage) fail(ErrorCode::kConfigError, "run_coverage needs kind = coverage");

  struct Cell {
    CoverageCell info;
    std::optional<DiscreteScenario> populations;
  };
  std::vector<Cell> cells;
  for (std::size_t d : cfg.dims) {
    std::optional<DiscreteScenario> scenario;
    if (cfg.scenario == Scenario::kDiscretePair) scenario = discrete_scenario(cfg, d);
    for (double eps : cfg.eps_list) {
      double truth = 0.0;
      if (scenario) {
        truth = entropic_cost(scenario->p, scenario->q, truth_config(cfg.solver, eps));
      } else {
        truth = oracle::gaussian_cost(oracle::GaussianPairSpec{d, eps}, cfg.solver.cost_scale);
      }
      for (std::size_t n : cfg.n_list) {
        Cell c;
        c.info.d = d;
        c.info.eps = eps;
        c.info.n = n;
        c.info.truth = truth;
        c.info.attempted = cfg.replicates;
        c.populations = scenario;
        cells.push_back(std::move(c));
      }
    }
  }

  struct Outcome {
    bool evaluated = false;
    bool hit = false;
    double half_width = 0.0;
  };
  std::vector<Outcome> outcomes(cells.size() * cfg.replicates);
  parallel_for(outcomes.size(), threads, [&](std::size_t k) {
    const Cell& cell = cells[k / cfg.replicates];
    const std::size_t r = k % cfg.replicates;
    const CoverageCell& info = cell.info;
    const std::uint64_t seed = cell_seed(cfg.seed, cfg.kind, info.d, info.eps, info.n);
    const SolverConfig solver = with_eps(cfg.solver, info.eps);
    try {
      if (cell.populations) {
        const Empirical pn = empirical_on_support(cell.populations->p, info.n, replicate_seed(seed, kTagSampleP, r));
        const Empirical qm = empirical_on_support(cell.populations->q, info.n, replicate_seed(seed, kTagSampleQ, r));
        const SolveResult sol = solve(pn.measure, qm.measure, solver);
        const ConfidenceInterval ci = ci_two_sample_from(pn.measure, qm.measure, sol.pair, cfg.alpha, info.n, info.n);
        outcomes[k] = {true, ci.contains(info.truth), ci.half_width};
      } else {
        const oracle::GaussianPairSpec spec{info.d, info.eps};
        const DiscreteMeasure pn = sample_gaussian(spec.p_mean(), spec.variance_scale, info.n,
                                                   replicate_seed(seed, kTagSampleP, r));
        const DiscreteMeasure qm = sample_gaussian(spec.q_mean(), spec.variance_scale, info.n,
                                                   replicate_seed(seed, kTagSampleQ, r));
        const SolveResult sol = solve(pn, qm, solver);
        const ConfidenceInterval ci = ci_two_sample_from(pn, qm, sol.pair, cfg.alpha);
        outcomes[k] = {true, ci.contains(info.truth), ci.half_width};
      }
    } catch (const NotConvergedError&) {
      outcomes[k] = {};
    }
  });

  CoverageResult result;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    CoverageCell info = cells[c].info;
    double width_sum = 0.0;
    for (std::size_t r = 0; r < cfg.replicates; ++r) {
      const Outcome& o = outcomes[c * cfg.replicates + r];
      if (!o.evaluated) {
        ++info.excluded;
        continue;
      }
      ++info.evaluated;
      info.hits += o.hit ? 1 : 0;
      width_sum += o.half_width;
    }
    info.coverage = info.evaluated ? static_cast<double>(info.hits) / static_cast<double>(info.evaluated) : kNaN;
    info.mean_half_width = info.evaluated ? width_sum / static_cast<double>(info.evaluated) : kNaN;
    result.cells.push_back(info);
  }
  return result;
}

RateResult run_bias_rate(const ExperimentConfig& cfg, std::size_t threads) {
  if (cfg.kind != ExperimentKind::kBiasRate) fail(ErrorCode::kConfigError, "run_bias_rate needs kind = bias_rate");
  return run_rate(cfg, threads, {"bias"}, [&](std::size_t d, double eps) -> ReplicateFn {
    auto scenario = std::make_shared<DiscreteScenario>(discrete_scenario(cfg, d));
    const SolveResult star = solve(scenario->p, scenario->q, truth_config(cfg.solver, eps));
    const double truth = detail::weighted_mean(star.pair.f, scenario->p.weights()) +
                         detail::weighted_mean(star.pair.g, scenario->q.weights());
    const double g_term = detail::weighted_mean(star.pair.g, scenario->q.weights());
    const std::vector<double> f_star = star.pair.f;
    const BiasEstimator estimator = cfg.bias_estimator;
    const SolverConfig solver = with_eps(cfg.solver, eps);
    return [=](const RateJob& job, std::uint64_t cell) {
      const Empirical pn = empirical_on_support(scenario->p, job.n, replicate_seed(cell, kTagSampleP, job.replicate));
      const SolveResult sol = solve(pn.measure, scenario->q, solver);
      const double s_n = detail::weighted_mean(sol.pair.f, pn.measure.weights()) +
                         detail::weighted_mean(sol.pair.g, scenario->q.weights());
      if (estimator == BiasEstimator::kPlain) return std::vector<double>{s_n - truth};
      double linear = 0.0;
      for (std::size_t k = 0; k < pn.atoms.size(); ++k) linear += pn.measure.weight(k) * f_star[pn.atoms[k]];
      return std::vector<double>{s_n - (linear + g_term)};
    };
  });
}

RateResult run_potential_rate(const ExperimentConfig& cfg, std::size_t threads) {
  if (cfg.kind != ExperimentKind::kPotentialRate) {
    fail(ErrorCode::kConfigError, "run_potential_rate needs kind = potential_rate");
  }
  return run_rate(cfg, threads, {"holder_sq", "sup_sq"}, [&](std::size_t d, double eps) -> ReplicateFn {
    auto scenario = std::make_shared<DiscreteScenario>(discrete_scenario(cfg, d));
    const SolveResult star = solve(scenario->p, scenario->q, truth_config(cfg.solver, eps));
    const PotentialPair star_pair = normalize(star.pair, scenario->p, scenario->q, Normalization::kZeroMeanG);
    const DerivativeField star_field =
        as_field(ExtendedPotential(star_pair, scenario->p, scenario->q, PotentialSide::kF));

    const DiscreteMeasure* both[] = {&scenario->p, &scenario->q};
    GridSpec grid = GridSpec::default_for(bounding_domain(both));
    if (cfg.grid_points != 0) grid.points_per_axis = cfg.grid_points;
    const HolderOrder order = cfg.holder_order != 0 ? HolderOrder{cfg.holder_order} : HolderOrder::default_for(d);
    const SolverConfig solver = with_eps(cfg.solver, eps);

    return [=](const RateJob& job, std::uint64_t cell) {
      const Empirical pn = empirical_on_support(scenario->p, job.n, replicate_seed(cell, kTagSampleP, job.replicate));
      const SolveResult sol = solve(pn.measure, scenario->q, solver);
      const PotentialPair pair = normalize(sol.pair, pn.measure, scenario->q, Normalization::kZeroMeanG);
      const DerivativeField field = as_field(ExtendedPotential(pair, pn.measure, scenario->q, PotentialSide::kF));
      const HolderNormEstimate h = holder_norm(difference(field, star_field), job.d, order, grid);
      return std::vector<double>{h.value * h.value, h.sup_norm() * h.sup_norm()};
    };
  });
}

RateResult run_divergence_rate(const ExperimentConfig& cfg, std::size_t threads) {
  if (cfg.kind != ExperimentKind::kDivergenceRate) {
    fail(ErrorCode::kConfigError, "run_divergence_rate needs kind = divergence_rate");
  }
  return run_rate(cfg, threads, {"one_sample", "two_sample"}, [&](std::size_t d, double eps) -> ReplicateFn {
    auto scenario = std::make_shared<DiscreteScenario>(discrete_scenario(cfg, d));
    const SolverConfig solver = with_eps(cfg.solver, eps);
    return [=](const RateJob& job, std::uint64_t cell) {
      const Empirical pn = empirical_on_support(scenario->p, job.n, replicate_seed(cell, kTagSampleP, job.replicate));
      const Empirical pn2 = empirical_on_support(scenario->p, job.n, replicate_seed(cell, kTagSampleQ, job.replicate));
      const DivergenceValue one = sinkhorn_divergence(pn.measure, scenario->p, solver);
      const DivergenceValue two = sinkhorn_divergence(pn.measure, pn2.measure, solver);
      return std::vector<double>{one.value, two.value};
    };
  });
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::size_t threads) {
  cfg.validate();
  ExperimentResult result;
  result.config = cfg;
  if (cfg.scenario == Scenario::kDiscretePair) {
    for (std::size_t d : cfg.dims) result.scenarios.push_back(discrete_scenario(cfg, d));
  }
  switch (cfg.kind) {
    case ExperimentKind::kCoverage: result.data = run_coverage(cfg, threads); break;
    case ExperimentKind::kBiasRate: result.data = run_bias_rate(cfg, threads); break;
    case ExperimentKind::kPotentialRate: result.data = run_potential_rate(cfg, threads); break;
    case ExperimentKind::kDivergenceRate: result.data = run_divergence_rate(cfg, threads); break;
  }
  return result;
}

std::string render(const CoverageResult& result, EmitFormat format) {
  std::string out;
  if (format == EmitFormat::kPlotData) {
    out = "d,eps,n,truth,attempted,evaluated,excluded,hits,coverage,mean_half_width\n";
    for (const CoverageCell& c : result.cells) {
      out += std::to_string(c.d) + ',' + num(c.eps) + ',' + std::to_string(c.n) + ',' + num(c.truth) + ',' +
             std::to_string(c.attempted) + ',' + std::to_string(c.evaluated) + ',' + std::to_string(c.excluded) +
             ',' + std::to_string(c.hits) + ',' + num(c.coverage) + ',' + num(c.mean_half_width) + '\n';
    }
    return out;
  }
  // Wide table: one row per (d, n), one column per eps.
  std::vector<double> eps_cols;
  std::vector<std::pair<std::size_t, std::size_t>> rows;
  for (const CoverageCell& c : result.cells) {
    if (std::find(eps_cols.begin(), eps_cols.end(), c.eps) == eps_cols.end()) eps_cols.push_back(c.eps);
    if (std::find(rows.begin(), rows.end(), std::make_pair(c.d, c.n)) == rows.end()) rows.emplace_back(c.d, c.n);
  }
  out = "d,n";
  for (double e : eps_cols) out += ",eps=" + num(e);
  out += '\n';
  for (const auto& [d, n] : rows) {
    out += std::to_string(d) + ',' + std::to_string(n);
    for (double e : eps_cols) {
      out += ',';
      for (const CoverageCell& c : result.cells) {
        if (c.d == d && c.n == n && c.eps == e) out += num(c.coverage);
      }
    }
    out += '\n';
  }
  return out;
}

std::string render(const RateResult& result, EmitFormat format) {
  std::string out;
  if (format == EmitFormat::kCsvTable) {
    out = "curve,d,eps,row,n,mean,sd,evaluated,excluded,slope,intercept,slope_se\n";
    for (const RateCurve& c : result.curves) {
      const std::string head = c.name + ',' + std::to_string(c.d) + ',' + num(c.eps) + ',';
      for (const RatePoint& p : c.points) {
        out += head + "point," + std::to_string(p.n) + ',' + num(p.mean) + ',' + num(p.sd) + ',' +
               std::to_string(p.evaluated) + ',' + std::to_string(p.excluded) + ",,,\n";
      }
      out += head + "fit,,,,,," + num(c.fit.slope) + ',' + num(c.fit.intercept) + ',' + num(c.fit.slope_se) + '\n';
    }
    return out;
  }
  out = "curve,d,eps,row,log_n,log_error,slope,intercept,slope_se\n";
  for (const RateCurve& c : result.curves) {
    const std::string head = c.name + ',' + std::to_string(c.d) + ',' + num(c.eps) + ',';
    for (const RatePoint& p : c.points) {
      out += head + "point," + num(std::log(static_cast<double>(p.n))) + ',' + num(std::log(std::abs(p.mean))) + ",,,\n";
    }
    out += head + "fit,,," + num(c.fit.slope) + ',' + num(c.fit.intercept) + ',' + num(c.fit.slope_se) + '\n';
  }
  return out;
}

std::string render(const ExperimentResult& result, EmitFormat format) {
  return std::visit([format](const auto& data) { return render(data, format); }, result.data);
}

void emit(const ExperimentResult& result, const std::filesystem::path& path, EmitFormat format) {
  const std::string text = render(result, format);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorCode::kIoError, "write failed for " + path.string());
}

}  // namespace eot
