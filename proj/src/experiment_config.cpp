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

#include "eot/experiment_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "eot/error.hpp"

namespace eot {

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

[[noreturn]] void config_error(std::size_t line, const std::string& msg) {
  fail(ErrorCode::kConfigError, "config line " + std::to_string(line) + ": " + msg);
}

template <typename T>
T parse_number(std::string_view token, std::size_t line) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  T value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
    config_error(line, "cannot parse '" + std::string(token) + "'");
  }
  return value;
}

template <typename T>
std::vector<T> parse_list(std::string_view value, std::size_t line) {
  std::vector<T> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = value.find(',', start);
    out.push_back(parse_number<T>(value.substr(start, comma - start), line));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string real_text(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<T>) {
      out += real_text(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

}  // namespace

const char* kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kCoverage: return "coverage";
    case ExperimentKind::kBiasRate: return "bias_rate";
    case ExperimentKind::kPotentialRate: return "potential_rate";
    case ExperimentKind::kDivergenceRate: return "divergence_rate";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  const auto bad = [](const std::string& msg) { fail(ErrorCode::kConfigError, msg); };
  if (replicates < 1) bad("replicates must be at least 1");
  if (dims.empty() || eps_list.empty() || n_list.empty()) bad("dims, eps and n must be nonempty");
  for (std::size_t d : dims) {
    if (d < 1) bad("dimensions must be at least 1");
  }
  for (double e : eps_list) {
    if (!(e > 0.0) || !std::isfinite(e)) bad("eps values must be positive");
  }
  for (std::size_t n : n_list) {
    if (n < 1) bad("sample sizes must be at least 1");
  }
  if (kind != ExperimentKind::kCoverage) {
    for (std::size_t i = 1; i < n_list.size(); ++i) {
      if (n_list[i] <= n_list[i - 1]) bad("n must be strictly increasing for rate experiments");
    }
    if (scenario != Scenario::kDiscretePair) bad("rate experiments need scenario = discrete_pair");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) bad("alpha must lie in (0, 1)");
  if (atoms < 1) bad("atoms must be at least 1");
  if (p_file.empty() != q_file.empty()) bad("p and q files must be given together");
  if (kind == ExperimentKind::kPotentialRate) {
    for (double e : eps_list) {
      if (e != 1.0) bad("potential_rate runs at eps = 1");
    }
    for (std::size_t d : dims) {
      if (d > 3) bad("potential_rate supports d <= 3");
    }
    if (solver.cost_scale != kHalfSquaredCost) bad("potential_rate needs ground_cost = half");
    if (holder_order < 0 || holder_order > 6) bad("holder_order must lie in [0, 6]");
    if (grid_points == 1) bad("grid_points must be 0 (default) or at least 2");
  }
  try {
    SolverConfig probe = solver;
    probe.eps = 1.0;
    probe.validate();
  } catch (const Error& e) {
    bad(e.what());
  }
}

ExperimentConfig parse_experiment_config(std::string_view text, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) config_error(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (value.empty()) config_error(line_no, "empty value for '" + key + "'");
    if (!seen.insert(key).second) config_error(line_no, "duplicate key '" + key + "'");

    if (key == "kind") {
      if (value == "coverage") cfg.kind = ExperimentKind::kCoverage;
      else if (value == "bias_rate") cfg.kind = ExperimentKind::kBiasRate;
      else if (value == "potential_rate") cfg.kind = ExperimentKind::kPotentialRate;
      else if (value == "divergence_rate") cfg.kind = ExperimentKind::kDivergenceRate;
      else config_error(line_no, "unknown kind '" + std::string(value) + "'");
    } else if (key == "scenario") {
      if (value == "gaussian_pair") cfg.scenario = Scenario::kGaussianPair;
      else if (value == "discrete_pair") cfg.scenario = Scenario::kDiscretePair;
      else config_error(line_no, "unknown scenario '" + std::string(value) + "'");
    } else if (key == "dims") {
      cfg.dims = parse_list<std::size_t>(value, line_no);
    } else if (key == "eps") {
      cfg.eps_list = parse_list<double>(value, line_no);
    } else if (key == "n") {
      cfg.n_list = parse_list<std::size_t>(value, line_no);
    } else if (key == "replicates") {
      cfg.replicates = parse_number<std::size_t>(value, line_no);
    } else if (key == "alpha") {
      cfg.alpha = parse_number<double>(value, line_no);
    } else if (key == "seed") {
      cfg.seed = parse_number<std::uint64_t>(value, line_no);
    } else if (key == "tol") {
      cfg.solver.tol = parse_number<double>(value, line_no);
    } else if (key == "max_iter") {
      cfg.solver.max_iter = parse_number<std::size_t>(value, line_no);
    } else if (key == "ground_cost") {
      if (value == "half") cfg.solver.cost_scale = kHalfSquaredCost;
      else if (value == "squared") cfg.solver.cost_scale = kSquaredCost;
      else config_error(line_no, "ground_cost must be 'half' or 'squared'");
    } else if (key == "p" || key == "q") {
      std::filesystem::path path{std::string(value)};
      if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
      (key == "p" ? cfg.p_file : cfg.q_file) = path;
    } else if (key == "atoms") {
      cfg.atoms = parse_number<std::size_t>(value, line_no);
    } else if (key == "holder_order") {
      cfg.holder_order = parse_number<int>(value, line_no);
    } else if (key == "grid_points") {
      cfg.grid_points = parse_number<std::size_t>(value, line_no);
    } else if (key == "bias_estimator") {
      if (value == "plain") cfg.bias_estimator = BiasEstimator::kPlain;
      else if (value == "control_variate") cfg.bias_estimator = BiasEstimator::kControlVariate;
      else config_error(line_no, "bias_estimator must be 'plain' or 'control_variate'");
    } else {
      config_error(line_no, "unknown key '" + key + "'");
    }
  }
  if (!seen.contains("kind")) fail(ErrorCode::kConfigError, "config must set 'kind'");
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str(), path.parent_path());
}

std::string format_experiment_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "kind = " << kind_name(cfg.kind) << '\n';
  out << "scenario = " << (cfg.scenario == Scenario::kGaussianPair ? "gaussian_pair" : "discrete_pair") << '\n';
  out << "dims = " << join(cfg.dims) << '\n';
  out << "eps = " << join(cfg.eps_list) << '\n';
  out << "n = " << join(cfg.n_list) << '\n';
  out << "replicates = " << cfg.replicates << '\n';
  out << "alpha = " << real_text(cfg.alpha) << '\n';
  out << "seed = " << cfg.seed << '\n';
  out << "tol = " << real_text(cfg.solver.tol) << '\n';
  out << "max_iter = " << cfg.solver.max_iter << '\n';
  out << "ground_cost = " << (cfg.solver.cost_scale == kSquaredCost ? "squared" : "half") << '\n';
  if (!cfg.p_file.empty()) out << "p = " << cfg.p_file.string() << '\n';
  if (!cfg.q_file.empty()) out << "q = " << cfg.q_file.string() << '\n';
  out << "atoms = " << cfg.atoms << '\n';
  out << "holder_order = " << cfg.holder_order << '\n';
  out << "grid_points = " << cfg.grid_points << '\n';
  out << "bias_estimator = " << (cfg.bias_estimator == BiasEstimator::kPlain ? "plain" : "control_variate") << '\n';
  return out.str();
}

}  // namespace eot
