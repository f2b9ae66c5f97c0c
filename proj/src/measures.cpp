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

#include "eot/measures.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>

#include "eot/error.hpp"
#include "numeric_util.hpp"

namespace eot {

namespace {

constexpr double kSimplexTol = 1e-12;
constexpr double kRenormalizeBand = 1e-9;

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_real(std::string_view token, std::size_t line_no) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
    fail(ErrorCode::kMalformedFile,
         "line " + std::to_string(line_no) + ": not a number: '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<double> points, std::size_t dim,
                                 std::vector<double> weights)
    : dim_(dim), points_(std::move(points)), weights_(std::move(weights)) {
  if (weights_.empty()) fail(ErrorCode::kEmptySupport, "measure has no atoms");
  if (dim_ == 0) fail(ErrorCode::kInvalidArgument, "dimension must be at least 1");
  if (points_.size() != weights_.size() * dim_) {
    fail(ErrorCode::kInvalidArgument, "points array does not hold n*d coordinates");
  }
  for (double v : points_) {
    if (!std::isfinite(v)) fail(ErrorCode::kInvalidArgument, "non-finite coordinate");
  }
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) fail(ErrorCode::kNonSimplexWeights, "negative weight");
  }
  const double total = detail::compensated_sum(weights_);
  if (std::abs(total - 1.0) > kSimplexTol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "weights sum to " << total;
    fail(ErrorCode::kNonSimplexWeights, msg.str());
  }
}

DiscreteMeasure DiscreteMeasure::uniform(std::vector<double> points, std::size_t dim) {
  if (dim == 0) fail(ErrorCode::kInvalidArgument, "dimension must be at least 1");
  const std::size_t n = points.size() / dim;
  if (n == 0) fail(ErrorCode::kEmptySupport, "measure has no atoms");
  return DiscreteMeasure(std::move(points), dim, std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

DiscreteMeasure DiscreteMeasure::dirac(std::vector<double> point) {
  const std::size_t d = point.size();
  return DiscreteMeasure(std::move(point), d, {1.0});
}

CompactDomain::CompactDomain(std::vector<double> lo, std::vector<double> hi)
    : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.empty() || lower.size() != upper.size()) {
    fail(ErrorCode::kInvalidArgument, "domain bounds must be nonempty and of equal length");
  }
  for (std::size_t k = 0; k < lower.size(); ++k) {
    if (!(lower[k] <= upper[k])) fail(ErrorCode::kInvalidArgument, "domain lower bound exceeds upper");
  }
  if (!(diameter() > 0.0)) fail(ErrorCode::kInvalidArgument, "domain has zero diameter");
}

double CompactDomain::diameter() const noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < lower.size(); ++k) s += (upper[k] - lower[k]) * (upper[k] - lower[k]);
  return std::sqrt(s);
}

bool CompactDomain::contains(std::span<const double> x, double slack) const noexcept {
  if (x.size() != lower.size()) return false;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] < lower[k] - slack || x[k] > upper[k] + slack) return false;
  }
  return true;
}

CompactDomain bounding_domain(std::span<const DiscreteMeasure* const> measures) {
  if (measures.empty()) fail(ErrorCode::kInvalidArgument, "no measures given");
  const std::size_t d = measures.front()->dim();
  std::vector<double> lo(d, std::numeric_limits<double>::infinity());
  std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
  for (const DiscreteMeasure* m : measures) {
    if (m->dim() != d) fail(ErrorCode::kDimensionMismatch, "measures differ in dimension");
    for (std::size_t i = 0; i < m->size(); ++i) {
      const auto x = m->point(i);
      for (std::size_t k = 0; k < d; ++k) {
        lo[k] = std::min(lo[k], x[k]);
        hi[k] = std::max(hi[k], x[k]);
      }
    }
  }
  bool degenerate = true;
  for (std::size_t k = 0; k < d; ++k) degenerate = degenerate && lo[k] == hi[k];
  if (degenerate) {
    for (std::size_t k = 0; k < d; ++k) {
      lo[k] -= 0.5;
      hi[k] += 0.5;
    }
  }
  return CompactDomain(std::move(lo), std::move(hi));
}

DiscreteMeasure parse_measure(std::string_view text) {
  std::size_t line_no = 0;
  std::size_t dim = 0;
  bool have_header = false;
  std::vector<double> points;
  std::vector<double> weights;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    std::string_view line = trim(raw);
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (line.empty()) continue;

    const auto fields = split_commas(line);
    if (!have_header) {
      if (fields.size() < 2 || fields[0] != "w") {
        fail(ErrorCode::kMalformedFile, "header must be 'w,x1,...,xd'");
      }
      for (std::size_t k = 1; k < fields.size(); ++k) {
        if (fields[k] != "x" + std::to_string(k)) {
          fail(ErrorCode::kMalformedFile, "header column " + std::to_string(k + 1) + " must be 'x" +
                                              std::to_string(k) + "'");
        }
      }
      dim = fields.size() - 1;
      have_header = true;
      continue;
    }
    if (fields.size() != dim + 1) {
      fail(ErrorCode::kMalformedFile, "line " + std::to_string(line_no) + ": expected " +
                                          std::to_string(dim + 1) + " fields, got " +
                                          std::to_string(fields.size()));
    }
    weights.push_back(parse_real(fields[0], line_no));
    for (std::size_t k = 1; k <= dim; ++k) {
      const double v = parse_real(fields[k], line_no);
      if (!std::isfinite(v)) fail(ErrorCode::kMalformedFile, "line " + std::to_string(line_no) + ": non-finite coordinate");
      points.push_back(v);
    }
  }
  if (!have_header) fail(ErrorCode::kMalformedFile, "missing header");
  if (weights.empty()) fail(ErrorCode::kEmptySupport, "measure file has no atoms");

  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) fail(ErrorCode::kNonSimplexWeights, "negative weight in measure file");
  }
  const double total = detail::compensated_sum(weights);
  if (std::abs(total - 1.0) > kRenormalizeBand) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "weights sum to " << total;
    fail(ErrorCode::kNonSimplexWeights, msg.str());
  }
  for (double& w : weights) w /= total;
  return DiscreteMeasure(std::move(points), dim, std::move(weights));
}

DiscreteMeasure load_measure(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open measure file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_measure(buf.str());
}

void save_measure(const DiscreteMeasure& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIoError, "cannot write measure file " + path.string());
  out << 'w';
  for (std::size_t k = 1; k <= m.dim(); ++k) out << ",x" << k;
  out << '\n';
  out.precision(17);
  for (std::size_t i = 0; i < m.size(); ++i) {
    out << m.weight(i);
    for (double v : m.point(i)) out << ',' << v;
    out << '\n';
  }
  if (!out) fail(ErrorCode::kIoError, "write failed for " + path.string());
}

std::vector<std::size_t> sample_indices(const DiscreteMeasure& source, std::size_t n,
                                        const SeedSpec& seed) {
  if (n == 0) fail(ErrorCode::kInvalidArgument, "sample size must be at least 1");
  std::vector<double> cdf(source.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < source.size(); ++i) {
    acc += source.weight(i);
    cdf[i] = acc;
  }
  cdf.back() = std::numeric_limits<double>::infinity();

  SplitMix64 rng(seed);
  std::vector<std::size_t> idx(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double u = rng.uniform();
    // First atom whose cumulative weight exceeds u; zero-weight atoms are never hit.
    idx[t] = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
  }
  return idx;
}

DiscreteMeasure sample_empirical(const DiscreteMeasure& source, std::size_t n, const SeedSpec& seed) {
  const auto idx = sample_indices(source, n, seed);
  std::vector<double> points;
  points.reserve(n * source.dim());
  for (std::size_t i : idx) {
    const auto x = source.point(i);
    points.insert(points.end(), x.begin(), x.end());
  }
  return DiscreteMeasure::uniform(std::move(points), source.dim());
}

DiscreteMeasure sample_gaussian(std::span<const double> mean, double variance_scale, std::size_t n,
                                const SeedSpec& seed) {
  if (!(variance_scale > 0.0)) fail(ErrorCode::kInvalidArgument, "variance scale must be positive");
  if (n == 0) fail(ErrorCode::kInvalidArgument, "sample size must be at least 1");
  if (mean.empty()) fail(ErrorCode::kInvalidArgument, "mean must have dimension at least 1");
  const std::size_t d = mean.size();
  const double sd = std::sqrt(variance_scale);

  SplitMix64 rng(seed);
  std::vector<double> points(n * d);
  for (std::size_t t = 0; t < points.size(); t += 2) {
    const double r = std::sqrt(-2.0 * std::log(rng.uniform_open_zero()));
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    points[t] = mean[t % d] + sd * r * std::cos(theta);
    if (t + 1 < points.size()) points[t + 1] = mean[(t + 1) % d] + sd * r * std::sin(theta);
  }
  return DiscreteMeasure::uniform(std::move(points), d);
}

DiscreteMeasure rescale_measure(const DiscreteMeasure& m, double eps) {
  if (!(eps > 0.0)) fail(ErrorCode::kNonPositiveEps, "eps must be positive");
  const double factor = 1.0 / std::sqrt(eps);
  std::vector<double> points(m.points().begin(), m.points().end());
  if (eps != 1.0) {
    for (double& v : points) v *= factor;
  }
  return DiscreteMeasure(std::move(points), m.dim(), {m.weights().begin(), m.weights().end()});
}

DiscreteMeasure merge_duplicates(const DiscreteMeasure& m) {
  std::map<std::vector<double>, std::size_t> seen;
  std::vector<double> points;
  std::vector<double> weights;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto x = m.point(i);
    std::vector<double> key(x.begin(), x.end());
    const auto [it, inserted] = seen.try_emplace(std::move(key), weights.size());
    if (inserted) {
      points.insert(points.end(), x.begin(), x.end());
      weights.push_back(m.weight(i));
    } else {
      weights[it->second] += m.weight(i);
    }
  }
  return DiscreteMeasure(std::move(points), m.dim(), std::move(weights));
}

}  // namespace eot
