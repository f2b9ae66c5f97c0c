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

#ifndef EOT_HARNESS_HPP
#define EOT_HARNESS_HPP

// Deterministic Monte Carlo experiments. Replicates run in parallel but every
// aggregate is a fold in replicate-index order, so results do not depend on
// the thread count.

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "eot/experiment_config.hpp"
#include "eot/measures.hpp"

namespace eot {

struct CoverageCell {
  std::size_t d = 0;
  double eps = 0.0;
  std::size_t n = 0;
  double truth = 0.0;
  std::size_t attempted = 0;
  std::size_t evaluated = 0;
  std::size_t excluded = 0;  // NotConverged replicates
  std::size_t hits = 0;
  double coverage = 0.0;
  double mean_half_width = 0.0;
};

struct CoverageResult {
  std::vector<CoverageCell> cells;
};

struct RatePoint {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // replicate standard deviation
  std::size_t evaluated = 0;
  std::size_t excluded = 0;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
};

struct RateCurve {
  std::string name;
  std::size_t d = 0;
  double eps = 0.0;
  std::vector<RatePoint> points;
  LineFit fit;
};

struct RateResult {
  ExperimentKind kind = ExperimentKind::kBiasRate;
  std::vector<RateCurve> curves;

  const RateCurve* find(std::string_view name, std::size_t d, double eps) const;
};

/// Population measures of a discrete scenario in dimension d.
struct DiscreteScenario {
  DiscreteMeasure p;
  DiscreteMeasure q;
};

/// Loads cfg.p_file / cfg.q_file when set; otherwise draws cfg.atoms points
/// uniformly on [0,1]^d for each measure (uniform weights) from streams
/// derived from cfg.seed and d.
DiscreteScenario discrete_scenario(const ExperimentConfig& cfg, std::size_t d);

struct ExperimentResult {
  ExperimentConfig config;
  std::variant<CoverageResult, RateResult> data;
  /// Populations used by discrete scenarios, one entry per dimension.
  std::vector<DiscreteScenario> scenarios;
};

/// 0 means std::thread::hardware_concurrency().
CoverageResult run_coverage(const ExperimentConfig& cfg, std::size_t threads = 0);
RateResult run_bias_rate(const ExperimentConfig& cfg, std::size_t threads = 0);
RateResult run_potential_rate(const ExperimentConfig& cfg, std::size_t threads = 0);
RateResult run_divergence_rate(const ExperimentConfig& cfg, std::size_t threads = 0);

/// Dispatches on cfg.kind.
ExperimentResult run_experiment(const ExperimentConfig& cfg, std::size_t threads = 0);

/// Ordinary least squares of log(|y|) on log(n).
LineFit fit_log_log(std::span<const double> n, std::span<const double> y);

enum class EmitFormat { kCsvTable, kPlotData };

/// CSV_TABLE mirrors the coverage table (rows n, one column per eps, blocks
/// by d) or lists each rate curve's points plus one fit row. PLOT_DATA is
/// long-format: per-cell counts for coverage, (log n, log error) series plus
/// a fit row for rates.
std::string render(const CoverageResult& result, EmitFormat format);
std::string render(const RateResult& result, EmitFormat format);
std::string render(const ExperimentResult& result, EmitFormat format);

/// Writes render(result, format) to path. Throws kIoError.
void emit(const ExperimentResult& result, const std::filesystem::path& path, EmitFormat format);

/// Runs fn(i) for i in [0, count) on up to `threads` workers. The first
/// exception thrown by any call is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn);

std::size_t resolve_threads(std::size_t threads);

}  // namespace eot

#endif  // EOT_HARNESS_HPP
