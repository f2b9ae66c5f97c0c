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

#ifndef EOT_EOT_H
#define EOT_EOT_H

/*
 * C interface to libeot. Objects are opaque handles owned by the caller and
 * released with the matching *_free function. Every fallible call returns an
 * eot_status; on failure eot_last_error() describes the problem for the
 * calling thread until its next failing call.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(EOT_BUILDING_LIBRARY)
#define EOT_API __attribute__((visibility("default")))
#else
#define EOT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum eot_status {
  EOT_OK = 0,
  EOT_MALFORMED_FILE = 1,
  EOT_NON_SIMPLEX_WEIGHTS = 2,
  EOT_EMPTY_SUPPORT = 3,
  EOT_INVALID_ARGUMENT = 4,
  EOT_NON_POSITIVE_EPS = 5,
  EOT_DIMENSION_MISMATCH = 6,
  EOT_NOT_CONVERGED = 7,
  EOT_NOT_OPTIMAL = 8,
  EOT_NEGATIVE_ENTRY = 9,
  EOT_UNSUPPORTED_ORDER = 10,
  EOT_WRONG_NORMALIZATION = 11,
  EOT_OUT_OF_RANGE = 12,
  EOT_IO_ERROR = 13,
  EOT_CONFIG_ERROR = 14,
  EOT_INTERNAL_ERROR = 99
} eot_status;

typedef enum eot_normalization {
  EOT_NORM_RAW = 0,
  EOT_NORM_EQ = 1, /* <f,a> == <g,b> */
  EOT_NORM_G0 = 2  /* <g,b> == 0 */
} eot_normalization;

typedef enum eot_side { EOT_SIDE_F = 0, EOT_SIDE_G = 1 } eot_side;

typedef enum eot_format { EOT_FORMAT_CSV_TABLE = 0, EOT_FORMAT_PLOT_DATA = 1 } eot_format;

typedef struct eot_measure eot_measure;
typedef struct eot_potentials eot_potentials;
typedef struct eot_experiment_config eot_experiment_config;
typedef struct eot_experiment_result eot_experiment_result;

typedef struct eot_solver_options {
  double eps;
  double tol;
  size_t max_iter;
  double cost_scale; /* 0.5 for |x-y|^2/2, 1 for |x-y|^2 */
} eot_solver_options;

typedef struct eot_solve_report {
  size_t iterations;
  double final_residual;
  double dual_value;
  int converged;
} eot_solve_report;

typedef struct eot_interval {
  double center;
  double half_width;
  double level;
  double variance;
  double lower;
  double upper;
} eot_interval;

typedef struct eot_divergence {
  double value;
  double s_pq;
  double s_pp;
  double s_qq;
} eot_divergence;

EOT_API const char* eot_version(void);
EOT_API const char* eot_status_name(eot_status status);
EOT_API const char* eot_last_error(void);
EOT_API void eot_string_free(char* s);

EOT_API void eot_solver_options_default(eot_solver_options* options);

/* Measures. Points are row-major, size() rows of dim() coordinates. */
EOT_API eot_status eot_measure_create(const double* points, size_t size, size_t dim, const double* weights,
                                      eot_measure** out);
EOT_API eot_status eot_measure_load(const char* path, eot_measure** out);
EOT_API eot_status eot_measure_parse(const char* text, eot_measure** out);
EOT_API eot_status eot_measure_save(const eot_measure* m, const char* path);
EOT_API eot_status eot_measure_sample(const eot_measure* source, size_t n, uint64_t seed, uint64_t replicate,
                                      eot_measure** out);
EOT_API eot_status eot_measure_rescale(const eot_measure* m, double eps, eot_measure** out);
EOT_API size_t eot_measure_size(const eot_measure* m);
EOT_API size_t eot_measure_dim(const eot_measure* m);
EOT_API const double* eot_measure_points(const eot_measure* m);
EOT_API const double* eot_measure_weights(const eot_measure* m);
EOT_API void eot_measure_free(eot_measure* m);

/* Solving. On EOT_NOT_CONVERGED *out still receives the last iterate. */
EOT_API eot_status eot_solve(const eot_measure* p, const eot_measure* q, const eot_solver_options* options,
                             eot_potentials** out, eot_solve_report* report);
EOT_API eot_status eot_entropic_cost(const eot_measure* p, const eot_measure* q, const eot_solver_options* options,
                                     double* out);
EOT_API size_t eot_potentials_size(const eot_potentials* pot, eot_side side);
EOT_API const double* eot_potentials_values(const eot_potentials* pot, eot_side side);
EOT_API double eot_potentials_eps(const eot_potentials* pot);
EOT_API eot_normalization eot_potentials_normalization(const eot_potentials* pot);
EOT_API eot_status eot_potentials_normalize(eot_potentials* pot, const eot_measure* p, const eot_measure* q,
                                            eot_normalization convention);
EOT_API void eot_potentials_free(eot_potentials* pot);

EOT_API eot_status eot_cost(const eot_measure* p, const eot_measure* q, const eot_potentials* pot, double tol,
                            double* out);
EOT_API eot_status eot_dual_objective(const eot_measure* p, const eot_measure* q, const eot_potentials* pot,
                                      double* out);
EOT_API eot_status eot_marginal_residual(const eot_measure* p, const eot_measure* q, const eot_potentials* pot,
                                         double* out);
/* Writes the size(p) x size(q) plan row-major into out (capacity entries). */
EOT_API eot_status eot_plan(const eot_measure* p, const eot_measure* q, const eot_potentials* pot, double* out,
                            size_t capacity);
EOT_API eot_status eot_primal_cost(const eot_measure* p, const eot_measure* q, const double* plan, double eps,
                                   double cost_scale, double* out);

/* Extended potentials at arbitrary x (dim coordinates). */
EOT_API eot_status eot_potential_value(const eot_potentials* pot, const eot_measure* p, const eot_measure* q,
                                       eot_side side, const double* x, double* out);
EOT_API eot_status eot_potential_derivative(const eot_potentials* pot, const eot_measure* p, const eot_measure* q,
                                            eot_side side, const double* x, const int* alpha, double* out);

/* Inference. alpha is the miscoverage level, the interval has level 1-alpha. */
EOT_API eot_status eot_ci_one_sample(const eot_measure* p_n, const eot_measure* q, const eot_solver_options* options,
                                     double alpha, eot_interval* out);
EOT_API eot_status eot_ci_two_sample(const eot_measure* p_n, const eot_measure* q_m,
                                     const eot_solver_options* options, double alpha, eot_interval* out);
EOT_API eot_status eot_divergence_compute(const eot_measure* p, const eot_measure* q,
                                          const eot_solver_options* options, eot_divergence* out);
EOT_API double eot_normal_cdf(double x);
EOT_API eot_status eot_normal_quantile(double beta, double* out);
EOT_API eot_status eot_gaussian_cost(size_t d, double eps, double cost_scale, double* out);

/* Experiments. */
EOT_API eot_status eot_experiment_config_load(const char* path, eot_experiment_config** out);
EOT_API eot_status eot_experiment_config_parse(const char* text, const char* base_dir, eot_experiment_config** out);
EOT_API const char* eot_experiment_config_kind(const eot_experiment_config* cfg);
EOT_API eot_status eot_experiment_config_set_seed(eot_experiment_config* cfg, uint64_t seed);
EOT_API eot_status eot_experiment_config_set_solver(eot_experiment_config* cfg, double tol, size_t max_iter);
EOT_API eot_status eot_experiment_config_format(const eot_experiment_config* cfg, char** out);
EOT_API void eot_experiment_config_free(eot_experiment_config* cfg);

/* threads == 0 uses the machine's parallelism. */
EOT_API eot_status eot_experiment_run(const eot_experiment_config* cfg, size_t threads, eot_experiment_result** out);
EOT_API eot_status eot_experiment_result_render(const eot_experiment_result* result, eot_format format, char** out);
EOT_API eot_status eot_experiment_result_emit(const eot_experiment_result* result, const char* path,
                                              eot_format format);
EOT_API void eot_experiment_result_free(eot_experiment_result* result);

#ifdef __cplusplus
}
#endif

#endif /* EOT_EOT_H */
