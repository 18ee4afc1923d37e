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

#ifndef SWAPANNEAL_NETWORK_HPP
#define SWAPANNEAL_NETWORK_HPP

/** @file swapanneal/network.hpp
    @brief Network-level predictions and the exact multi-system oracle.

    Predictions combine flow states with the coefficient matrix. The exact
    oracle keeps the full joint density matrix of all 2m systems, so it only
    runs at toy scale.
*/

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "swapanneal/coefficients.hpp"
#include "swapanneal/flow.hpp"
#include "swapanneal/protocol.hpp"
#include "swapanneal/schedule.hpp"
#include "swapanneal/spectrum.hpp"
#include "swapanneal/state.hpp"

namespace swapanneal {

/// dt^2 sum_k row(k) <psi|D[states(k)]|psi>. `states[k]` is the flow state
/// paired with coefficient `row(k)`; zero coefficients are skipped.
inline double xi_from_states(const PureState& psi,
                             const std::vector<PureState>& states,
                             const Eigen::VectorXd& row, const Spectrum& spec,
                             double dt) {
  if (static_cast<Eigen::Index>(states.size()) != row.size())
    throw std::invalid_argument("xi_from_states: states/row length mismatch");
  double acc = 0;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const double w = row(static_cast<Eigen::Index>(k));
    if (w == 0) continue;
    acc += w * deviation_expectation(psi, states[k], spec);
  }
  return dt * dt * acc;
}

/// xi = <phi_{m dt}| Xi |phi_{m dt}> where Xi aggregates the deviation
/// operators at flow times k' dt, k' = -m..m, weighted by the last row of
/// K^(2m). O(m dim) without forming any dim x dim operator.
inline double xi_statistic(const Spectrum& spec, const PureState& phi0,
                           std::size_t m, double dt, const Eigen::VectorXd& k_row) {
  detail::require_same_dim(phi0, spec, "xi_statistic");
  if (!(dt > 0)) throw std::invalid_argument("xi_statistic: dt must be positive");
  if (k_row.size() != static_cast<Eigen::Index>(2 * m + 1))
    throw std::invalid_argument("xi_statistic: row length must be 2m+1");
  if (m == 0) return 0.0;
  const PureState psi = flow_exact(phi0, spec, double(m) * dt);
  double acc = 0;
  const auto mm = static_cast<std::int64_t>(m);
  for (std::int64_t kp = -mm; kp <= mm; ++kp) {
    const double w = k_row(static_cast<Eigen::Index>(kp + mm));
    if (w == 0) continue;
    acc += w * deviation_expectation(psi, flow_exact(phi0, spec, double(kp) * dt),
                                     spec);
  }
  return dt * dt * acc;
}

/// Ground-probability target 1/2 (log2 8 / log2 dim)^alpha.
inline double m_alpha_target(std::size_t dim, int alpha) {
  return 0.5 * std::pow(3.0 / std::log2(static_cast<double>(dim)), alpha);
}

/// Smallest m with ground probability of phi_{m dt} at least the target;
/// 0 when the initial state already meets it.
inline std::int64_t m_alpha(const Spectrum& spec, const PureState& phi0, double dt,
                            int alpha) {
  if (alpha < 0) throw std::invalid_argument("m_alpha: alpha must be >= 0");
  if (spec.dim() < 8) throw std::invalid_argument("m_alpha: dim must be >= 8");
  return find_time_for_p1(phi0, spec, m_alpha_target(spec.dim(), alpha), dt).steps;
}

inline constexpr std::size_t kDensePredictionMaxDim = 64;

/// |phi_{tau_j dt}><phi_{tau_j dt}| - dt^2 sum_k K(j,k) D[phi_{k' dt}] for
/// 0-based system index j. Unit trace since every D is traceless.
inline DensityOperator predict_reduced_state(const Schedule& sched, std::size_t j,
                                             const CoefficientMatrix& K,
                                             const Spectrum& spec,
                                             const PureState& phi0, double dt) {
  detail::require_same_dim(phi0, spec, "predict_reduced_state");
  if (spec.dim() > kDensePredictionMaxDim)
    throw std::invalid_argument("predict_reduced_state: dim too large for dense output");
  if (j >= sched.systems() || K.m != sched.m)
    throw std::invalid_argument("predict_reduced_state: index or matrix mismatch");
  const double tau = double(sched.terminal_tau()[j]);
  Operator rho = flow_exact(phi0, spec, tau * dt).projector();
  const auto mm = static_cast<std::int64_t>(K.m);
  for (std::int64_t kp = -mm; kp <= mm; ++kp) {
    const double w = K.k(static_cast<Eigen::Index>(j), K.column(kp));
    if (w == 0) continue;
    rho -= dt * dt * w *
           deviation_term(flow_exact(phi0, spec, double(kp) * dt), spec).d;
  }
  return {std::move(rho)};
}

// ---------------------------------------------------------------------------
// Exact joint simulation

inline constexpr std::size_t kJointMaxDim = 729;

struct PairEnergyRecord {
  std::size_t step = 0;
  Pair pair;
  double before = 0;  // E_low + E_high entering the protocol
  double after = 0;   // E_low + E_high leaving it
  double replacement_jump = 0;  // total energy change from fresh replacement
};

struct NetworkSimulation {
  std::vector<DensityOperator> reduced;  // terminal state of each system
  std::vector<PairEnergyRecord> energy_log;
  double initial_total_energy = 0;
  double final_total_energy = 0;
};

namespace detail {

class JointSpace {
 public:
  JointSpace(std::size_t d, std::size_t systems) : d_(d), n_(systems) {
    stride_.assign(n_, 1);
    for (std::size_t s = n_; s-- > 1;) stride_[s - 1] = stride_[s] * d_;
    size_ = stride_[0] * d_;
  }
  std::size_t size() const { return size_; }
  std::size_t digit(std::size_t x, std::size_t sys) const {
    return (x / stride_[sys]) % d_;
  }
  std::size_t with_digit(std::size_t x, std::size_t sys, std::size_t v) const {
    return x - digit(x, sys) * stride_[sys] + v * stride_[sys];
  }

  Operator reduced(const Operator& rho, std::size_t sys) const {
    const auto d = static_cast<Eigen::Index>(d_);
    Operator out = Operator::Zero(d, d);
    for (std::size_t x = 0; x < size_; ++x) {
      if (digit(x, sys) != 0) continue;  // x enumerates the complement
      for (std::size_t a = 0; a < d_; ++a)
        for (std::size_t b = 0; b < d_; ++b)
          out(Eigen::Index(a), Eigen::Index(b)) +=
              rho(Eigen::Index(with_digit(x, sys, a)), Eigen::Index(with_digit(x, sys, b)));
    }
    return out;
  }

  /// Embeds a two-site operator (index a*d + b for sites first, second).
  Operator embed(const Operator& u2, std::size_t first, std::size_t second) const {
    Operator U = Operator::Zero(Eigen::Index(size_), Eigen::Index(size_));
    for (std::size_t y = 0; y < size_; ++y) {
      const std::size_t ya = digit(y, first), yb = digit(y, second);
      for (std::size_t a = 0; a < d_; ++a)
        for (std::size_t b = 0; b < d_; ++b) {
          const std::size_t x = with_digit(with_digit(y, first, a), second, b);
          U(Eigen::Index(x), Eigen::Index(y)) =
              u2(Eigen::Index(a * d_ + b), Eigen::Index(ya * d_ + yb));
        }
    }
    return U;
  }

  /// Traces out two sites and tensors in `fresh` on each.
  Operator replace(const Operator& rho, std::size_t s1, std::size_t s2,
                   const Operator& fresh) const {
    const auto n = static_cast<Eigen::Index>(size_);
    Operator out(n, n);
    for (std::size_t x = 0; x < size_; ++x)
      for (std::size_t y = 0; y < size_; ++y) {
        Complex r = 0;
        for (std::size_t u = 0; u < d_; ++u)
          for (std::size_t v = 0; v < d_; ++v)
            r += rho(Eigen::Index(with_digit(with_digit(x, s1, u), s2, v)),
                     Eigen::Index(with_digit(with_digit(y, s1, u), s2, v)));
        out(Eigen::Index(x), Eigen::Index(y)) =
            r * fresh(Eigen::Index(digit(x, s1)), Eigen::Index(digit(y, s1))) *
            fresh(Eigen::Index(digit(x, s2)), Eigen::Index(digit(y, s2)));
      }
    return out;
  }

 private:
  std::size_t d_, n_, size_ = 1;
  std::vector<std::size_t> stride_;
};

inline double diag_energy(const Operator& rho, const Spectrum& spec) {
  double e = 0;
  for (std::size_t i = 0; i < spec.dim(); ++i)
    e += rho(Eigen::Index(i), Eigen::Index(i)).real() * spec[i];
  return e;
}

}  // namespace detail

/// Runs the schedule on the full joint density matrix. Each pair gets the
/// protocol unitary with the higher index as the forward (cooled) system;
/// fresh pairs are traced out and replaced by |phi0><phi0| before the
/// protocol acts. Correlations between systems are kept throughout.
inline NetworkSimulation simulate_network_exact(const Schedule& sched,
                                                const Spectrum& spec,
                                                const PureState& phi0, double dt) {
  detail::require_same_dim(phi0, spec, "simulate_network_exact");
  const std::size_t d = spec.dim();
  const std::size_t n = sched.systems();
  double joint = 1;
  for (std::size_t s = 0; s < n; ++s) {
    joint *= double(d);
    if (joint > double(kJointMaxDim))
      throw std::invalid_argument("simulate_network_exact: joint dimension " +
                                  std::string("exceeds ") + std::to_string(kJointMaxDim));
  }
  const detail::JointSpace space(d, n);

  Vector psi = Vector::Ones(1);
  for (std::size_t s = 0; s < n; ++s) {
    Vector next(psi.size() * Eigen::Index(d));
    for (Eigen::Index x = 0; x < psi.size(); ++x)
      for (std::size_t a = 0; a < d; ++a)
        next(x * Eigen::Index(d) + Eigen::Index(a)) = psi(x) * phi0.amplitudes()(Eigen::Index(a));
    psi = std::move(next);
  }
  Operator rho = psi * psi.adjoint();
  const Operator fresh = phi0.projector();
  const Operator u2 = protocol_unitary(spec, dt);  // factor order (forward, backward)
  const double e0 = energy_moments(phi0, spec).mean;

  auto total_energy = [&] {
    double e = 0;
    for (std::size_t s = 0; s < n; ++s) e += detail::diag_energy(space.reduced(rho, s), spec);
    return e;
  };

  NetworkSimulation out;
  out.initial_total_energy = total_energy();
  for (std::size_t step = 0; step < sched.pairs.size(); ++step) {
    for (const auto& p : sched.pairs[step]) {
      PairEnergyRecord rec;
      rec.step = step;
      rec.pair = p;
      if (p.fresh) {
        const double old = detail::diag_energy(space.reduced(rho, p.low), spec) +
                           detail::diag_energy(space.reduced(rho, p.high), spec);
        rho = space.replace(rho, p.low, p.high, fresh);
        rec.replacement_jump = 2 * e0 - old;
      }
      rec.before = detail::diag_energy(space.reduced(rho, p.low), spec) +
                   detail::diag_energy(space.reduced(rho, p.high), spec);
      const Operator U = space.embed(u2, p.high, p.low);
      rho = U * rho * U.adjoint();
      rec.after = detail::diag_energy(space.reduced(rho, p.low), spec) +
                  detail::diag_energy(space.reduced(rho, p.high), spec);
      out.energy_log.push_back(rec);
    }
  }
  for (std::size_t s = 0; s < n; ++s) out.reduced.push_back({space.reduced(rho, s)});
  out.final_total_energy = total_energy();
  return out;
}

}  // namespace swapanneal

#endif  // SWAPANNEAL_NETWORK_HPP
