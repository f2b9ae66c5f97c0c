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

#ifndef EOT_EXPERIMENT_CONFIG_HPP
#define EOT_EXPERIMENT_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "eot/sinkhorn.hpp"

namespace eot {

enum class ExperimentKind { kCoverage, kBiasRate, kPotentialRate, kDivergenceRate };
enum class Scenario { kGaussianPair, kDiscretePair };

/// How run_bias_rate turns one replicate into a bias sample.
enum class BiasEstimator {
  /// S(P_n, Q) - S(P, Q).
  kPlain,
  /// S(P_n, Q) - <f*, P_n> - <g*, Q>. Same expectation as kPlain since
  /// <f*, P_n - P> has mean zero, but the O(n^-1/2) fluctuation cancels.
  kControlVariate,
};

/// Declarative description of one Monte Carlo sweep.
///
/// Text form is one `key = value` per line, `#` starts a comment, lists are
/// comma-separated and unknown keys are rejected:
///
///   kind        coverage | bias_rate | potential_rate | divergence_rate
///   scenario    gaussian_pair | discrete_pair
///   dims        list of dimensions
///   eps         list of regularization strengths
///   n           list of sample sizes (strictly increasing for rate kinds)
///   replicates  Monte Carlo replicates per cell
///   alpha       CI level is 1 - alpha (coverage only)
///   seed        master seed (unsigned 64-bit)
///   tol, max_iter           solver settings
///   ground_cost half | squared   (c = |x-y|^2 / 2 or |x-y|^2)
///   p, q        measure files for discrete_pair (otherwise generated)
///   atoms       atoms per generated discrete measure
///   holder_order, grid_points   potential_rate overrides (0 = default)
///   bias_estimator plain | control_variate
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kCoverage;
  Scenario scenario = Scenario::kGaussianPair;
  std::vector<std::size_t> dims{2};
  std::vector<double> eps_list{1.0};
  std::vector<std::size_t> n_list{100};
  std::size_t replicates = 100;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  SolverConfig solver;
  std::filesystem::path p_file;
  std::filesystem::path q_file;
  std::size_t atoms = 10;
  int holder_order = 0;
  std::size_t grid_points = 0;
  BiasEstimator bias_estimator = BiasEstimator::kControlVariate;

  /// Throws Error(kConfigError) on violated invariants.
  void validate() const;
};

ExperimentConfig parse_experiment_config(std::string_view text,
                                         const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Canonical text form; parse_experiment_config(format(c)) reproduces c.
std::string format_experiment_config(const ExperimentConfig& cfg);

const char* kind_name(ExperimentKind kind);

}  // namespace eot

#endif  // EOT_EXPERIMENT_CONFIG_HPP
