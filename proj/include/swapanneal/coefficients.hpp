// Copyright 2026 The swapanneal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SWAPANNEAL_COEFFICIENTS_HPP
#define SWAPANNEAL_COEFFICIENTS_HPP

/** @file swapanneal/coefficients.hpp
    @brief Accumulated second-order deviation weights of a network.

    Each terminal reduced state is, to O(dt^2),
        |phi_{tau_j dt}><phi_{tau_j dt}| - dt^2 sum_k K(j, k) D[phi_{k' dt}]
    with k' = k - m in 0-based column indexing (k' in -m..m). K depends on the
    schedule only, never on the Hamiltonian.
*/

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "swapanneal/format.hpp"
#include "swapanneal/schedule.hpp"

namespace swapanneal {

struct CoefficientMatrix {
  std::size_t m = 0;
  Eigen::MatrixXd k;  // (2m) x (2m+1)

  /// Column of time index k' in -m..m.
  Eigen::Index column(std::int64_t time_index) const {
    return static_cast<Eigen::Index>(time_index + static_cast<std::int64_t>(m));
  }
  Eigen::VectorXd last_row() const { return k.row(k.rows() - 1).transpose(); }
};

/// Rows start at zero. For every scheduled pair at common tau, a fresh pair
/// first clears both rows; then both rows become their mean plus one unit
/// at column tau.
inline CoefficientMatrix propagate_coefficients(const Schedule& sched) {
  const auto n = static_cast<Eigen::Index>(sched.systems());
  CoefficientMatrix out;
  out.m = sched.m;
  out.k = Eigen::MatrixXd::Zero(n, n + 1);
  Eigen::VectorXd merged(n + 1);
  for (std::size_t step = 0; step < sched.pairs.size(); ++step) {
    const auto& tau = sched.tau[step];
    for (const auto& p : sched.pairs[step]) {
      const auto lo = static_cast<Eigen::Index>(p.low);
      const auto hi = static_cast<Eigen::Index>(p.high);
      if (p.fresh) {
        out.k.row(lo).setZero();
        out.k.row(hi).setZero();
      }
      const Eigen::Index col = out.column(tau[p.low]);
      if (col < 0 || col > n)
        throw std::logic_error("propagate_coefficients: tau outside -m..m");
      merged = 0.5 * (out.k.row(lo) + out.k.row(hi)).transpose();
      merged(col) += 1.0;
      out.k.row(lo) = merged.transpose();
      out.k.row(hi) = merged.transpose();
    }
  }
  return out;
}

/// Last row of K^(2m) estimated from a larger K^(2M) through
/// K^(2m)_{2m, k'} ~ (m/M) K^(2M)_{2M, k' M/m}, linearly interpolated in k'.
inline Eigen::VectorXd rescaled_last_row(const CoefficientMatrix& big,
                                         std::size_t m) {
  if (m < 1) throw std::invalid_argument("rescaled_last_row: m must be >= 1");
  const double lambda = double(big.m) / double(m);
  const Eigen::VectorXd src = big.last_row();
  const auto M = static_cast<double>(big.m);
  Eigen::VectorXd out(static_cast<Eigen::Index>(2 * m + 1));
  for (std::int64_t kp = -std::int64_t(m); kp <= std::int64_t(m); ++kp) {
    const double pos = double(kp) * lambda + M;  // 0-based source column
    const double lo = std::floor(pos);
    const double frac = pos - lo;
    const auto i0 = static_cast<Eigen::Index>(lo);
    const auto i1 = std::min<Eigen::Index>(i0 + 1, src.size() - 1);
    const double v = (1.0 - frac) * src(i0) + frac * src(i1);
    out(static_cast<Eigen::Index>(kp + std::int64_t(m))) = v / lambda;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scaling-law comparison

/// One cut through K^(2m) compared against the rescaled K^(2 lambda m).
struct CrossSection {
  std::string name;
  bool is_row = true;
  std::int64_t index = 0;  // 1-based row j, or time index k'
  std::vector<double> position;  // fractional coordinate along the cut
  std::vector<double> small;
  std::vector<double> rescaled;
  double median_rel_dev = 0;
  double max_rel_dev = 0;
};

struct ScalingReport {
  std::size_t m_small = 0;
  std::size_t m_large = 0;
  std::size_t lambda = 1;
  double floor_fraction = 1e-3;
  std::size_t compared = 0;
  double median_rel_dev = 0;
  double max_rel_dev = 0;
  std::vector<CrossSection> sections;
};

namespace detail {

inline double median(std::vector<double> v) {
  if (v.empty()) return 0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  double hi = *mid;
  if (v.size() % 2) return hi;
  const double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Compares K^(2m)_{j, k'} with K^(2 lambda m)_{lambda j, lambda k'} / lambda.
/// Rows map by 1-based index (j -> lambda j); columns map by time index
/// (k' -> lambda k'), which keeps the column of k' = 0 aligned. Entries below
/// floor_fraction of their row maximum in the small matrix are skipped.
///
/// Eight cuts are exported: rows at j/2m in {1/4, 1/2, 3/4, 1} and columns
/// at k'/m in {-1/2, 0, 1/4, 1/2}.
inline ScalingReport check_scaling_law(const CoefficientMatrix& small,
                                       const CoefficientMatrix& large,
                                       std::size_t lambda,
                                       double floor_fraction = 1e-3) {
  if (lambda < 1) throw std::invalid_argument("check_scaling_law: lambda >= 1");
  if (large.m != lambda * small.m)
    throw std::invalid_argument("check_scaling_law: large.m != lambda * small.m");
  if (small.k.rows() != Eigen::Index(2 * small.m) ||
      large.k.rows() != Eigen::Index(2 * large.m) ||
      small.k.cols() != small.k.rows() + 1 || large.k.cols() != large.k.rows() + 1)
    throw std::invalid_argument("check_scaling_law: shape mismatch");

  const auto m = static_cast<std::int64_t>(small.m);
  const auto L = static_cast<std::int64_t>(lambda);
  auto rescaled = [&](std::int64_t j, std::int64_t kp) {
    return large.k(static_cast<Eigen::Index>(L * j - 1), large.column(L * kp)) /
           double(lambda);
  };
  auto value = [&](std::int64_t j, std::int64_t kp) {
    return small.k(static_cast<Eigen::Index>(j - 1), small.column(kp));
  };
  auto above_floor = [&](std::int64_t j, std::int64_t kp) {
    const double rowmax = small.k.row(static_cast<Eigen::Index>(j - 1)).maxCoeff();
    const double a = value(j, kp);
    return rowmax > 0 && a >= floor_fraction * rowmax && a > 0;
  };

  ScalingReport r;
  r.m_small = small.m;
  r.m_large = large.m;
  r.lambda = lambda;
  r.floor_fraction = floor_fraction;

  std::vector<double> all;
  for (std::int64_t j = 1; j <= 2 * m; ++j)
    for (std::int64_t kp = -m; kp <= m; ++kp) {
      if (!above_floor(j, kp)) continue;
      const double a = value(j, kp);
      all.push_back(std::abs(a - rescaled(j, kp)) / a);
    }
  r.compared = all.size();
  r.median_rel_dev = detail::median(all);
  r.max_rel_dev = all.empty() ? 0 : *std::max_element(all.begin(), all.end());

  auto finish = [&](CrossSection& cs, const std::vector<double>& devs) {
    cs.median_rel_dev = detail::median(devs);
    cs.max_rel_dev = devs.empty() ? 0 : *std::max_element(devs.begin(), devs.end());
    r.sections.push_back(std::move(cs));
  };

  int label = 1;
  for (int q = 1; q <= 4; ++q, ++label) {
    const std::int64_t j = std::max<std::int64_t>(1, (2 * m * q) / 4);
    CrossSection cs;
    cs.name = "cut" + std::to_string(label) + "_row_j" + std::to_string(j);
    cs.is_row = true;
    cs.index = j;
    std::vector<double> devs;
    for (std::int64_t kp = -m; kp <= m; ++kp) {
      cs.position.push_back(double(kp) / double(m));
      cs.small.push_back(value(j, kp));
      cs.rescaled.push_back(rescaled(j, kp));
      if (above_floor(j, kp))
        devs.push_back(std::abs(value(j, kp) - rescaled(j, kp)) / value(j, kp));
    }
    finish(cs, devs);
  }
  for (const double f : {-0.5, 0.0, 0.25, 0.5}) {
    const auto kp = static_cast<std::int64_t>(std::llround(f * double(m)));
    CrossSection cs;
    cs.name = "cut" + std::to_string(label++) + "_col_k" + std::to_string(kp);
    cs.is_row = false;
    cs.index = kp;
    std::vector<double> devs;
    for (std::int64_t j = 1; j <= 2 * m; ++j) {
      cs.position.push_back(double(j) / double(2 * m));
      cs.small.push_back(value(j, kp));
      cs.rescaled.push_back(rescaled(j, kp));
      if (above_floor(j, kp))
        devs.push_back(std::abs(value(j, kp) - rescaled(j, kp)) / value(j, kp));
    }
    finish(cs, devs);
  }
  return r;
}

// ---------------------------------------------------------------------------

/// CSV with a 1-based row label j followed by columns k = 1..2m+1.
inline std::string to_csv(const CoefficientMatrix& K) {
  std::vector<std::string> header{"j"};
  for (Eigen::Index c = 0; c < K.k.cols(); ++c)
    header.push_back("k" + std::to_string(c + 1));
  CsvWriter csv(header);
  for (Eigen::Index r = 0; r < K.k.rows(); ++r) {
    csv.cell(static_cast<long long>(r + 1));
    for (Eigen::Index c = 0; c < K.k.cols(); ++c) csv.cell(K.k(r, c));
    csv.end_row();
  }
  return csv.str();
}

inline CoefficientMatrix coefficients_from_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::size_t start = 0;
  bool header = true;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    const std::string_view line(text.data() + start, end - start);
    start = end + 1;
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<double> row;
    std::size_t p = 0;
    bool first = true;
    while (p <= line.size()) {
      auto q = line.find(',', p);
      if (q == std::string_view::npos) q = line.size();
      if (!first) row.push_back(parse_double(line.substr(p, q - p)));
      first = false;
      p = q + 1;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.size() % 2)
    throw std::invalid_argument("coefficient CSV: expected an even number of rows");
  CoefficientMatrix K;
  K.m = rows.size() / 2;
  K.k.resize(static_cast<Eigen::Index>(rows.size()),
             static_cast<Eigen::Index>(rows.size() + 1));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows.size() + 1)
      throw std::invalid_argument("coefficient CSV: ragged row");
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      K.k(Eigen::Index(r), Eigen::Index(c)) = rows[r][c];
  }
  return K;
}

inline nlohmann::json to_json(const CoefficientMatrix& K) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < K.k.rows(); ++r) {
    std::vector<double> row(K.k.cols());
    for (Eigen::Index c = 0; c < K.k.cols(); ++c) row[std::size_t(c)] = K.k(r, c);
    rows.push_back(std::move(row));
  }
  return {{"m", K.m}, {"k", std::move(rows)}};
}

inline nlohmann::json to_json(const ScalingReport& r) {
  nlohmann::json sections = nlohmann::json::array();
  for (const auto& cs : r.sections)
    sections.push_back({{"name", cs.name},
                        {"axis", cs.is_row ? "row" : "column"},
                        {"index", cs.index},
                        {"position", cs.position},
                        {"small", cs.small},
                        {"rescaled", cs.rescaled},
                        {"median_rel_dev", cs.median_rel_dev},
                        {"max_rel_dev", cs.max_rel_dev}});
  return {{"m_small", r.m_small},
          {"m_large", r.m_large},
          {"lambda", r.lambda},
          {"floor_fraction", r.floor_fraction},
          {"compared", r.compared},
          {"median_rel_dev", r.median_rel_dev},
          {"max_rel_dev", r.max_rel_dev},
          {"sections", std::move(sections)}};
}

}  // namespace swapanneal

#endif  // SWAPANNEAL_COEFFICIENTS_HPP
