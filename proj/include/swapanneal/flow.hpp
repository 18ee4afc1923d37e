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

#ifndef SWAPANNEAL_FLOW_HPP
#define SWAPANNEAL_FLOW_HPP

/** @file swapanneal/flow.hpp
    @brief Norm-preserving nonlinear ground-state flow
    d|phi>/dt = -1/2 (H - <H>_phi) |phi>, its closed-form solution, an RK4
    cross-check, ground-level probabilities and logistic bounds.

    The closed form is exp(-H t / 2)|phi_0> renormalized. The RK4 path
    exists only to check it independently.
*/

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "swapanneal/format.hpp"
#include "swapanneal/spectrum.hpp"
#include "swapanneal/state.hpp"

namespace swapanneal {

/// Flow state at time t (t < 0 runs the flow backwards).
///
/// Each amplitude is scaled by exp(-e_j t / 2); the exponents are shifted by
/// their maximum over the support before exponentiation so that large |t|
/// does not overflow.
inline PureState flow_exact(const PureState& phi0, const Spectrum& spec,
                            double t) {
  detail::require_same_dim(phi0, spec, "flow_exact");
  if (!std::isfinite(t)) throw std::invalid_argument("flow_exact: t not finite");
  const auto n = static_cast<Eigen::Index>(spec.dim());
  std::vector<double> logmag(spec.dim(), -std::numeric_limits<double>::infinity());
  double shift = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double a = std::abs(phi0.amplitudes()(j));
    if (a == 0) continue;
    logmag[j] = std::log(a) - 0.5 * spec[j] * t;
    shift = std::max(shift, logmag[j]);
  }
  Vector v = Vector::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex c = phi0.amplitudes()(j);
    if (c == Complex(0)) continue;
    v(j) = (c / std::abs(c)) * std::exp(logmag[j] - shift);
  }
  const double norm = v.norm();
  if (!(norm > 0) || !std::isfinite(norm))
    throw std::domain_error("flow_exact: all amplitudes underflowed");
  return PureState(v / norm);
}

namespace detail {

// Right-hand side -1/2 (H - <H>) v with <H> taken on the unnormalized v.
inline Vector flow_rhs(const Vector& v, const Spectrum& spec) {
  double num = 0, den = 0;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    const double w = std::norm(v(j));
    num += w * spec[static_cast<std::size_t>(j)];
    den += w;
  }
  const double mean = num / den;
  Vector out(v.size());
  for (Eigen::Index j = 0; j < v.size(); ++j)
    out(j) = -0.5 * (spec[static_cast<std::size_t>(j)] - mean) * v(j);
  return out;
}

inline Vector rk4_step(const Vector& v, const Spectrum& spec, double h) {
  const Vector k1 = flow_rhs(v, spec);
  const Vector k2 = flow_rhs(v + 0.5 * h * k1, spec);
  const Vector k3 = flow_rhs(v + 0.5 * h * k2, spec);
  const Vector k4 = flow_rhs(v + h * k3, spec);
  Vector next = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return next / next.norm();
}

/// RK4 without the step-size guard. Used to report what the integrator
/// would have produced when the guard rejects a request.
inline std::vector<PureState> rk4_path_unchecked(const PureState& phi0,
                                                 const Spectrum& spec, double h,
                                                 std::size_t steps) {
  std::vector<PureState> path;
  path.reserve(steps + 1);
  path.push_back(phi0);
  Vector v = phi0.amplitudes();
  for (std::size_t s = 0; s < steps; ++s) {
    v = rk4_step(v, spec, h);
    path.emplace_back(v);
  }
  return path;
}

inline void check_rk4_step(const Spectrum& spec, double h) {
  if (!(h > 0)) throw std::invalid_argument("flow_rk4: h must be positive");
  if (h * (spec.max() - spec.min()) > 0.1)
    throw std::invalid_argument("flow_rk4: step too large (h * span > 0.1)");
}

}  // namespace detail

/// Classical RK4 on the flow equation with renormalization after every
/// step. |t| is covered in ceil(|t|/h) equal steps of size at most h.
inline PureState flow_rk4(const PureState& phi0, const Spectrum& spec, double t,
                          double h) {
  detail::require_same_dim(phi0, spec, "flow_rk4");
  detail::check_rk4_step(spec, h);
  if (t == 0) return phi0;
  const auto steps =
      static_cast<std::size_t>(std::ceil(std::abs(t) / h - 1e-9));
  const double step = t / static_cast<double>(steps);
  Vector v = phi0.amplitudes();
  for (std::size_t s = 0; s < steps; ++s) v = detail::rk4_step(v, spec, step);
  return PureState(std::move(v));
}

/// States at t = 0, h, 2h, ..., steps*h.
inline std::vector<PureState> flow_rk4_path(const PureState& phi0,
                                            const Spectrum& spec, double h,
                                            std::size_t steps) {
  detail::require_same_dim(phi0, spec, "flow_rk4_path");
  detail::check_rk4_step(spec, h);
  return detail::rk4_path_unchecked(phi0, spec, h, steps);
}

struct GroundProbability {
  double p1 = 0;        // lowest sorted level
  double p_ground = 0;  // whole ground eigenspace
};

inline GroundProbability ground_probability(const PureState& state,
                                            const Spectrum& spec,
                                            double degeneracy_tol = kDegeneracyTol) {
  detail::require_same_dim(state, spec, "ground_probability");
  const std::size_t J = ground_degeneracy(spec, degeneracy_tol);
  GroundProbability g;
  g.p1 = std::norm(state[0]);
  for (std::size_t j = 0; j < J; ++j) g.p_ground += std::norm(state[j]);
  return g;
}

/// Logistic curves 1 / ((1/p0 - 1) exp(-r t) + 1) at the gap rate and at
/// the span rate. The ground probability obeys
/// gap * P (1 - P) <= dP/dt <= span * P (1 - P), so the gap-rate curve is
/// the lower bound and the span-rate curve the upper bound.
struct LogisticBounds {
  double gap_rate = 0;
  double span_rate = 0;
  double lower = 0;
  double upper = 0;
};

inline double logistic_curve(double p0, double rate, double t) {
  return 1.0 / ((1.0 / p0 - 1.0) * std::exp(-rate * t) + 1.0);
}

inline LogisticBounds logistic_bounds_from(double p0, double gap, double span,
                                           double t) {
  if (!(gap > 0)) throw std::invalid_argument("logistic_bounds: gap must be > 0");
  if (gap > span) throw std::invalid_argument("logistic_bounds: gap > span");
  if (!(p0 > 0 && p0 <= 1))
    throw std::invalid_argument("logistic_bounds: p0 must lie in (0, 1]");
  if (t < 0) throw std::invalid_argument("logistic_bounds: t must be >= 0");
  LogisticBounds b;
  b.gap_rate = logistic_curve(p0, gap, t);
  b.span_rate = logistic_curve(p0, span, t);
  b.lower = std::min(b.gap_rate, b.span_rate);
  b.upper = std::max(b.gap_rate, b.span_rate);
  return b;
}

/// Bounds for a uniform start, P(0) = 1/dim.
inline LogisticBounds logistic_bounds(std::size_t dim, double gap, double span,
                                      double t) {
  if (dim < 2) throw std::invalid_argument("logistic_bounds: dim must be >= 2");
  return logistic_bounds_from(1.0 / static_cast<double>(dim), gap, span, t);
}

struct TimeWindow {
  double lower = 0;
  double upper = 0;
};

/// Window for the time at which the ground probability reaches c, from a
/// start at p0: [L/span, L/gap] with L = ln((1/p0 - 1) / (1/c - 1)).
inline TimeWindow t_c_bounds_from(double p0, double gap, double span, double c) {
  if (!(gap > 0) || gap > span)
    throw std::invalid_argument("t_c_bounds: need 0 < gap <= span");
  if (!(c < 1) || c < p0)
    throw std::invalid_argument("t_c_bounds: c must lie in [p0, 1)");
  const double L = std::log((1.0 / p0 - 1.0) / (1.0 / c - 1.0));
  const double l = std::max(L, 0.0);
  return {l / span, l / gap};
}

inline TimeWindow t_c_bounds(std::size_t dim, double gap, double span, double c) {
  if (dim < 2) throw std::invalid_argument("t_c_bounds: dim must be >= 2");
  const double p0 = 1.0 / static_cast<double>(dim);
  if (c < p0) throw std::invalid_argument("t_c_bounds: c below 1/dim");
  return t_c_bounds_from(p0, gap, span, c);
}

struct GridTime {
  std::int64_t steps = 0;
  double time = 0;
};

/// Smallest grid point m * dt_grid at which the ground-eigenspace
/// probability of the flow reaches `target`. Equals the lowest-level
/// probability when the ground level is nondegenerate.
///
/// The probability is nondecreasing along the flow, so a doubling search
/// followed by bisection returns the same m as a linear scan.
inline GridTime find_time_for_p1(const PureState& phi0, const Spectrum& spec,
                                 double target, double dt_grid) {
  detail::require_same_dim(phi0, spec, "find_time_for_p1");
  if (!(dt_grid > 0))
    throw std::invalid_argument("find_time_for_p1: dt_grid must be positive");
  if (!(target < 1))
    throw std::invalid_argument("find_time_for_p1: target must be < 1");
  auto p_at = [&](std::int64_t m) {
    return ground_probability(flow_exact(phi0, spec, double(m) * dt_grid), spec)
        .p_ground;
  };
  if (p_at(0) >= target) return {0, 0.0};
  if (ground_probability(phi0, spec).p_ground == 0)
    throw std::domain_error("find_time_for_p1: no initial ground overlap");

  std::int64_t lo = 0, hi = 1;  // p(lo) < target
  while (p_at(hi) < target) {
    lo = hi;
    hi *= 2;
    if (hi > (std::int64_t{1} << 40))
      throw std::domain_error("find_time_for_p1: target unreachable");
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    (p_at(mid) >= target ? hi : lo) = mid;
  }
  return {hi, double(hi) * dt_grid};
}

/// Tabulated flow on a uniform time grid.
struct FlowResult {
  std::vector<double> times;
  std::vector<PureState> states;  // empty unless requested
  std::vector<double> p1;
  std::vector<double> p_ground;
  std::vector<double> energy;
  std::vector<double> lower_bound;
  std::vector<double> upper_bound;
};

struct FlowTableOptions {
  double dt = 0.01;
  std::size_t steps = 0;
  /// Multiplies the p1 column (the ground degeneracy for model (d) plots).
  double p1_scale = 1.0;
  bool keep_states = false;
};

/// Logistic bounds use the ground-eigenspace probability at t = 0 as the
/// starting value, which is 1/dim for a uniform start on a nondegenerate
/// ground level.
inline FlowResult flow_table(const PureState& phi0, const Spectrum& spec,
                             const FlowTableOptions& opt) {
  const SpectralStats st = spectral_stats(spec);
  const double p0 = ground_probability(phi0, spec).p_ground;
  FlowResult r;
  for (std::size_t s = 0; s <= opt.steps; ++s) {
    const double t = double(s) * opt.dt;
    PureState phi = flow_exact(phi0, spec, t);
    const auto g = ground_probability(phi, spec);
    const auto b = logistic_bounds_from(p0, st.gap, st.span, t);
    r.times.push_back(t);
    r.p1.push_back(g.p1 * opt.p1_scale);
    r.p_ground.push_back(g.p_ground);
    r.energy.push_back(energy_moments(phi, spec).mean);
    r.lower_bound.push_back(b.lower);
    r.upper_bound.push_back(b.upper);
    if (opt.keep_states) r.states.push_back(std::move(phi));
  }
  return r;
}

inline std::string to_csv(const FlowResult& r) {
  CsvWriter csv({"t", "p1", "p_ground", "energy", "lower_bound", "upper_bound"});
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    csv.cell(r.times[i]).cell(r.p1[i]).cell(r.p_ground[i]).cell(r.energy[i])
        .cell(r.lower_bound[i]).cell(r.upper_bound[i]);
    csv.end_row();
  }
  return csv.str();
}

}  // namespace swapanneal

#endif  // SWAPANNEAL_FLOW_HPP
