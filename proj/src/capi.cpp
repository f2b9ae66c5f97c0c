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

#include "eot/eot.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "eot/error.hpp"
#include "eot/experiment_config.hpp"
#include "eot/harness.hpp"
#include "eot/inference.hpp"
#include "eot/measures.hpp"
#include "eot/oracle.hpp"
#include "eot/potentials.hpp"
#include "eot/sinkhorn.hpp"

struct eot_measure {
  eot::DiscreteMeasure m;
};

struct eot_potentials {
  eot::PotentialPair pair;
};

struct eot_experiment_config {
  eot::ExperimentConfig cfg;
};

struct eot_experiment_result {
  eot::ExperimentResult result;
};

namespace {

thread_local std::string last_error;

eot_status set_error(eot_status status, const char* message) {
  last_error = message;
  return status;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
eot_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return EOT_OK;
  } catch (const eot::Error& e) {
    return set_error(static_cast<eot_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(EOT_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return set_error(EOT_INTERNAL_ERROR, e.what());
  } catch (...) {
    return set_error(EOT_INTERNAL_ERROR, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) eot::fail(eot::ErrorCode::kInvalidArgument, std::string("null argument: ") + what);
}

eot::SolverConfig to_config(const eot_solver_options* options) {
  eot::SolverConfig cfg;
  if (options != nullptr) {
    cfg.eps = options->eps;
    cfg.tol = options->tol;
    cfg.max_iter = options->max_iter;
    cfg.cost_scale = options->cost_scale;
  }
  cfg.validate();
  return cfg;
}

eot::Normalization to_normalization(eot_normalization n) {
  switch (n) {
    case EOT_NORM_RAW: return eot::Normalization::kRaw;
    case EOT_NORM_EQ: return eot::Normalization::kEqualMeans;
    case EOT_NORM_G0: return eot::Normalization::kZeroMeanG;
  }
  eot::fail(eot::ErrorCode::kInvalidArgument, "unknown normalization");
}

eot::EmitFormat to_format(eot_format f) {
  switch (f) {
    case EOT_FORMAT_CSV_TABLE: return eot::EmitFormat::kCsvTable;
    case EOT_FORMAT_PLOT_DATA: return eot::EmitFormat::kPlotData;
  }
  eot::fail(eot::ErrorCode::kInvalidArgument, "unknown output format");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

eot_interval to_interval(const eot::ConfidenceInterval& ci) {
  return {ci.center, ci.half_width, ci.level, ci.variance.value, ci.lower(), ci.upper()};
}

}  // namespace

extern "C" {

EOT_API const char* eot_version(void) { return "0.1.0"; }

EOT_API const char* eot_status_name(eot_status status) {
  if (status == EOT_OK) return "Ok";
  if (status == EOT_INTERNAL_ERROR) return "InternalError";
  return eot::error_code_name(static_cast<eot::ErrorCode>(status));
}

EOT_API const char* eot_last_error(void) { return last_error.c_str(); }

EOT_API void eot_string_free(char* s) { std::free(s); }

EOT_API void eot_solver_options_default(eot_solver_options* options) {
  if (options == nullptr) return;
  const eot::SolverConfig cfg;
  *options = {cfg.eps, cfg.tol, cfg.max_iter, cfg.cost_scale};
}

EOT_API eot_status eot_measure_create(const double* points, size_t size, size_t dim, const double* weights,
                                      eot_measure** out) {
  return guarded([&] {
    require(out != nullptr, "out");
    require(size == 0 || (points != nullptr && weights != nullptr), "points/weights");
    std::vector<double> pts(points, points + size * dim);
    std::vector<double> w(weights, weights + size);
    *out = new eot_measure{eot::DiscreteMeasure(std::move(pts), dim, std::move(w))};
  });
}

EOT_API eot_status eot_measure_load(const char* path, eot_measure** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "path/out");
    *out = new eot_measure{eot::load_measure(path)};
  });
}

EOT_API eot_status eot_measure_parse(const char* text, eot_measure** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "text/out");
    *out = new eot_measure{eot::parse_measure(text)};
  });
}

EOT_API eot_status eot_measure_save(const eot_measure* m, const char* path) {
  return guarded([&] {
    require(m != nullptr && path != nullptr, "measure/path");
    eot::save_measure(m->m, path);
  });
}

EOT_API eot_status eot_measure_sample(const eot_measure* source, size_t n, uint64_t seed, uint64_t replicate,
                                      eot_measure** out) {
  return guarded([&] {
    require(source != nullptr && out != nullptr, "source/out");
    *out = new eot_measure{eot::sample_empirical(source->m, n, eot::SeedSpec{seed, replicate})};
  });
}

EOT_API eot_status eot_measure_rescale(const eot_measure* m, double eps, eot_measure** out) {
  return guarded([&] {
    require(m != nullptr && out != nullptr, "measure/out");
    *out = new eot_measure{eot::rescale_measure(m->m, eps)};
  });
}

EOT_API size_t eot_measure_size(const eot_measure* m) { return m ? m->m.size() : 0; }
EOT_API size_t eot_measure_dim(const eot_measure* m) { return m ? m->m.dim() : 0; }
EOT_API const double* eot_measure_points(const eot_measure* m) { return m ? m->m.points().data() : nullptr; }
EOT_API const double* eot_measure_weights(const eot_measure* m) { return m ? m->m.weights().data() : nullptr; }
EOT_API void eot_measure_free(eot_measure* m) { delete m; }

EOT_API eot_status eot_solve(const eot_measure* p, const eot_measure* q, const eot_solver_options* options,
                             eot_potentials** out, eot_solve_report* report) {
  return guarded([&] {
    require(p != nullptr && q != nullptr && out != nullptr, "p/q/out");
    const auto publish = [&](const eot::SolveResult& r) {
      *out = new eot_potentials{r.pair};
      if (report != nullptr) {
        *report = {r.report.iterations, r.report.final_residual, r.report.dual_value, r.report.converged ? 1 : 0};
      }
    };
    try {
      publish(eot::solve(p->m, q->m, to_config(options)));
    } catch (const eot::NotConvergedError& e) {
      publish(e.partial());
      throw;
    }
  });
}

EOT_API eot_status eot_entropic_cost(const eot_measure* p, const eot_measure* q, const eot_solver_options* options,
                                     double* out) {
  return guarded([&] {
    require(p != nullptr && q != nullptr && out != nullptr, "p/q/out");
    *out = eot::entropic_cost(p->m, q->m, to_config(options));
  });
}

EOT_API size_t eot_potentials_size(const eot_potentials* pot, eot_side side) {
  if (pot == nullptr) return 0;
  return side == EOT_SIDE_F ? pot->pair.f.size() : pot->pair.g.size();
}

EOT_API const double* eot_potentials_values(const eot_potentials* pot, eot_side side) {
  if (pot == nullptr) return nullptr;
  return side == EOT_SIDE_F ? pot->pair.f.data() : pot->pair.g.data();
}

EOT_API double eot_potentials_eps(const eot_potentials* pot) { return pot ? pot->pair.eps : 0.0; }

EOT_API eot_normalization eot_potentials_normalization(const eot_potentials* pot) {
  if (pot == nullptr) return EOT_NORM_RAW;
  switch (pot->pair.normalization) {
    case eot::Normalization::kEqualMeans: return EOT_NORM_EQ;
    case eot::Normalization::kZeroMeanG: return EOT_NORM_G0;
    default: return EOT_NORM_RAW;
  }
}

EOT_API eot_status eot_potentials_normalize(eot_potentials* pot, const eot_measure* p, const eot_measure* q,
                                            eot_normalization convention) {
  return guarded([&] {
    require(pot != nullptr && p != nullptr && q != nullptr, "potentials/p/q");
    pot->pair = eot::normalize(pot->pair, p->m, q->m, to_normalization(convention));
  });
}

EOT_API void eot_potentials_free(eot_potentials* pot) { delete pot; }

EOT_API eot_status eot_cost(const eot_measure* p, const eot_measure* q, const eot_potentials* pot, double tol,
                            double* out) {
  return guarded([&] {
    require(p != nullptr && q != nullptr && pot != nullptr && out != nullptr, "p/q/potentials/out");
    *out = eot::cost(p->m, q->m, pot->pair, tol);
  });
}

EOT_API eot_status eot_dual_objective(const eot_measure* p, const eot_measure* q, const eot_potentials* pot,
                                      double* out) {
  return guarded([&] {
    require(p != nullptr && q != nullptr && pot != nullptr && out != nullptr, "p/q/potentials/out");
    *out = eot::dual_objective(p->m, q->m, pot->pair);
  });
}

EOT_API eot_status eot_marginal_residual(const eot_measure* p, const eot_measure* q, const eot_potentials* pot,
                                         double* out) {
  return guarded([&] {
    require(p != nullptr && q != nullptr && pot != nullptr && out != nullptr, "p/q/potentials/out");
    *out = eot::marginal_residual(p->m, q->m, pot->pair);
  });
}

EOT_API eot_status eot_plan(const eot_measure* p, const eot_measure* q, const eot_potentials* pot, double* out,
                            size_t capacity) {
  return guarded([&] {
    require(p != nullptr && q != nullptr && pot != nullptr && out != nullptr, "p/q/potentials/out");
    const eot::TransportPlan t = eot::plan(p->m, q->m, pot->pair);
    if (capacity < t.entries.size()) {
      eot::fail(eot::ErrorCode::kOutOfRange, "plan buffer holds " + std::to_string(capacity) + " entries, needs " +
                                                 std::to_string(t.entries.size()));
    }
    std::memcpy(out, t.entries.data(), t.entries.size() * sizeof(double));
  });
}

EOT_API eot_status eot_primal_cost(const eot_measure* p, const eot_measure* q, const double* plan, double eps,
                                   double cost_scale, double* out) {
  return guarded([&] {
    require(p != nullptr && q != nullptr && plan != nullptr && out != nullptr, "p/q/plan/out");
    eot::TransportPlan t;
    t.rows = p->m.size();
    t.cols = q->m.size();
    t.entries.assign(plan, plan + t.rows * t.cols);
    *out = eot::primal_cost(p->m, q->m, t, eps, cost_scale);
  });
}

EOT_API eot_status eot_potential_value(const eot_potentials* pot, const eot_measure* p, const eot_measure* q,
                                       eot_side side, const double* x, double* out) {
  return guarded([&] {
    require(pot != nullptr && p != nullptr && q != nullptr && x != nullptr && out != nullptr, "arguments");
    const eot::ExtendedPotential ext(pot->pair, p->m, q->m,
                                     side == EOT_SIDE_F ? eot::PotentialSide::kF : eot::PotentialSide::kG);
    *out = ext.value(std::span<const double>(x, ext.dim()));
  });
}

EOT_API eot_status eot_potential_derivative(const eot_potentials* pot, const eot_measure* p, const eot_measure* q,
                                            eot_side side, const double* x, const int* alpha, double* out) {
  return guarded([&] {
    require(pot != nullptr && p != nullptr && q != nullptr && x != nullptr && alpha != nullptr && out != nullptr,
            "arguments");
    const eot::ExtendedPotential ext(pot->pair, p->m, q->m,
                                     side == EOT_SIDE_F ? eot::PotentialSide::kF : eot::PotentialSide::kG);
    *out = ext.derivative(std::span<const double>(x, ext.dim()), std::span<const int>(alpha, ext.dim()));
  });
}

EOT_API eot_status eot_ci_one_sample(const eot_measure* p_n, const eot_measure* q, const eot_solver_options* options,
                                     double alpha, eot_interval* out) {
  return guarded([&] {
    require(p_n != nullptr && q != nullptr && out != nullptr, "p_n/q/out");
    *out = to_interval(eot::ci_one_sample(p_n->m, q->m, to_config(options), alpha));
  });
}

EOT_API eot_status eot_ci_two_sample(const eot_measure* p_n, const eot_measure* q_m,
                                     const eot_solver_options* options, double alpha, eot_interval* out) {
  return guarded([&] {
    require(p_n != nullptr && q_m != nullptr && out != nullptr, "p_n/q_m/out");
    *out = to_interval(eot::ci_two_sample(p_n->m, q_m->m, to_config(options), alpha));
  });
}

EOT_API eot_status eot_divergence_compute(const eot_measure* p, const eot_measure* q,
                                          const eot_solver_options* options, eot_divergence* out) {
  return guarded([&] {
    require(p != nullptr && q != nullptr && out != nullptr, "p/q/out");
    const eot::DivergenceValue v = eot::sinkhorn_divergence(p->m, q->m, to_config(options));
    *out = {v.value, v.s_pq, v.s_pp, v.s_qq};
  });
}

EOT_API double eot_normal_cdf(double x) { return eot::normal_cdf(x); }

EOT_API eot_status eot_normal_quantile(double beta, double* out) {
  return guarded([&] {
    require(out != nullptr, "out");
    *out = eot::normal_quantile(beta);
  });
}

EOT_API eot_status eot_gaussian_cost(size_t d, double eps, double cost_scale, double* out) {
  return guarded([&] {
    require(out != nullptr, "out");
    *out = eot::oracle::gaussian_cost(eot::oracle::GaussianPairSpec{d, eps}, cost_scale);
  });
}

EOT_API eot_status eot_experiment_config_load(const char* path, eot_experiment_config** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "path/out");
    *out = new eot_experiment_config{eot::load_experiment_config(path)};
  });
}

EOT_API eot_status eot_experiment_config_parse(const char* text, const char* base_dir, eot_experiment_config** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "text/out");
    *out = new eot_experiment_config{
        eot::parse_experiment_config(text, base_dir ? std::filesystem::path(base_dir) : std::filesystem::path())};
  });
}

EOT_API const char* eot_experiment_config_kind(const eot_experiment_config* cfg) {
  return cfg ? eot::kind_name(cfg->cfg.kind) : "";
}

EOT_API eot_status eot_experiment_config_set_seed(eot_experiment_config* cfg, uint64_t seed) {
  return guarded([&] {
    require(cfg != nullptr, "config");
    cfg->cfg.seed = seed;
  });
}

EOT_API eot_status eot_experiment_config_set_solver(eot_experiment_config* cfg, double tol, size_t max_iter) {
  return guarded([&] {
    require(cfg != nullptr, "config");
    eot::ExperimentConfig next = cfg->cfg;
    next.solver.tol = tol;
    next.solver.max_iter = max_iter;
    next.validate();
    cfg->cfg = std::move(next);
  });
}

EOT_API eot_status eot_experiment_config_format(const eot_experiment_config* cfg, char** out) {
  return guarded([&] {
    require(cfg != nullptr && out != nullptr, "config/out");
    *out = copy_string(eot::format_experiment_config(cfg->cfg));
  });
}

EOT_API void eot_experiment_config_free(eot_experiment_config* cfg) { delete cfg; }

EOT_API eot_status eot_experiment_run(const eot_experiment_config* cfg, size_t threads, eot_experiment_result** out) {
  return guarded([&] {
    require(cfg != nullptr && out != nullptr, "config/out");
    *out = new eot_experiment_result{eot::run_experiment(cfg->cfg, threads)};
  });
}

EOT_API eot_status eot_experiment_result_render(const eot_experiment_result* result, eot_format format, char** out) {
  return guarded([&] {
    require(result != nullptr && out != nullptr, "result/out");
    *out = copy_string(eot::render(result->result, to_format(format)));
  });
}

EOT_API eot_status eot_experiment_result_emit(const eot_experiment_result* result, const char* path,
                                              eot_format format) {
  return guarded([&] {
    require(result != nullptr && path != nullptr, "result/path");
    eot::emit(result->result, path, to_format(format));
  });
}

EOT_API void eot_experiment_result_free(eot_experiment_result* result) { delete result; }

}  // extern "C"
