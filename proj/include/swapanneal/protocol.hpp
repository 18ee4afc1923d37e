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

#ifndef SWAPANNEAL_PROTOCOL_HPP
#define SWAPANNEAL_PROTOCOL_HPP

/** @file swapanneal/protocol.hpp
    @brief Two-system energy-transfer protocol.

    Two copies of |phi0> are evolved forward and backward,
    F = exp(-iH dt/2)|phi0>, B = exp(+iH dt/2)|phi0>, and then rotated by
    exp(+i S pi/4) where S swaps the two factors. The reduced states live in
    span{F, B}:

        rho_a = (FF^+ + BB^+)/2 + (i/2) A |B><F| - (i/2) A^* |F><B|
        rho_b = (FF^+ + BB^+)/2 - (i/2) A |B><F| + (i/2) A^* |F><B|

    with A = <phi0|exp(-iH dt)|phi0>. System a is cooled and b heated by
    half the derivative of the survival probability; their sum is conserved.
*/

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "swapanneal/flow.hpp"
#include "swapanneal/spectrum.hpp"
#include "swapanneal/state.hpp"

namespace swapanneal {

struct ProtocolOutput {
  LowRankDensity rho_a;
  LowRankDensity rho_b;
  double E_a = 0;
  double E_b = 0;
  double E0 = 0;
  double dt = 0;
};

/// Closed-form protocol in rank-2 form. Negative dt swaps the cooled and
/// heated roles.
inline ProtocolOutput apply_protocol(const PureState& phi0, const Spectrum& spec,
                                     double dt) {
  detail::require_same_dim(phi0, spec, "apply_protocol");
  const PureState fwd = evolve_phase(phi0, spec, 0.5 * dt, +1);
  const PureState bwd = evolve_phase(phi0, spec, 0.5 * dt, -1);
  const Survival sv = survival(phi0, spec, dt);
  const Complex A = sv.amplitude;  // <B|F>
  const Complex I(0, 1);

  // basis order: 0 -> F, 1 -> B
  Eigen::MatrixXcd ca(2, 2), cb(2, 2);
  ca << 0.5, -0.5 * I * std::conj(A), 0.5 * I * A, 0.5;
  cb << 0.5, 0.5 * I * std::conj(A), -0.5 * I * A, 0.5;

  ProtocolOutput out;
  out.rho_a = {{fwd.amplitudes(), bwd.amplitudes()}, ca};
  out.rho_b = {{fwd.amplitudes(), bwd.amplitudes()}, cb};
  out.E0 = energy_moments(phi0, spec).mean;
  out.E_a = out.E0 + 0.5 * sv.derivative;
  out.E_b = out.E0 - 0.5 * sv.derivative;
  out.dt = dt;
  return out;
}

/// Reduced states from the explicit joint unitary; the independent check
/// of apply_protocol.
struct OracleOutput {
  DensityOperator rho_a;
  DensityOperator rho_b;
  double E_a = 0;
  double E_b = 0;
  double E0 = 0;
  double joint_purity = 0;  // Tr(rho_joint^2)
};

inline constexpr std::size_t kOracleMaxDim = 64;

/// Dense matrix of exp(+i S pi/4) (exp(-iH dt/2) (x) exp(+iH dt/2)) on
/// C^d (x) C^d, joint index i*d + k for |i>|k>.
inline Operator protocol_unitary(const Spectrum& spec, double dt) {
  const auto d = static_cast<Eigen::Index>(spec.dim());
  const auto n = d * d;
  const double c = std::cos(std::numbers::pi / 4);
  const double s = std::sin(std::numbers::pi / 4);
  Operator U = Operator::Zero(n, n);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index k = 0; k < d; ++k) {
      const Eigen::Index col = i * d + k;
      const Complex phase =
          std::polar(1.0, -0.5 * dt * (spec[std::size_t(i)] - spec[std::size_t(k)]));
      U(col, col) += c * phase;
      U(k * d + i, col) += Complex(0, s) * phase;  // S |i>|k> = |k>|i>
    }
  return U;
}

inline OracleOutput protocol_oracle(const PureState& phi0, const Spectrum& spec,
                                    double dt) {
  detail::require_same_dim(phi0, spec, "protocol_oracle");
  if (spec.dim() > kOracleMaxDim)
    throw std::invalid_argument("protocol_oracle: dim " +
                                std::to_string(spec.dim()) +
                                " exceeds the dense oracle limit");
  const auto d = static_cast<Eigen::Index>(spec.dim());
  Vector psi_in(d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index k = 0; k < d; ++k)
      psi_in(i * d + k) = phi0.amplitudes()(i) * phi0.amplitudes()(k);
  Vector psi_out;
  {
    const Operator U = protocol_unitary(spec, dt);
    psi_out = U * psi_in;
  }
  const Operator joint = psi_out * psi_out.adjoint();

  OracleOutput out;
  out.rho_a = partial_trace(joint, TraceSide::a);
  out.rho_b = partial_trace(joint, TraceSide::b);
  out.joint_purity = (joint * joint).trace().real();
  Eigen::VectorXd h(d);
  for (Eigen::Index i = 0; i < d; ++i) h(i) = spec[std::size_t(i)];
  out.E_a = (out.rho_a.matrix.diagonal().real().array() * h.array()).sum();
  out.E_b = (out.rho_b.matrix.diagonal().real().array() * h.array()).sum();
  out.E0 = energy_moments(phi0, spec).mean;
  return out;
}

// ---------------------------------------------------------------------------
// Second-order deviation operator

/// Gamma = (H - <H>_phi)^2 / 4 (diagonal) and
/// D[phi] = {Gamma, P} - 2 <Gamma>_phi P with P = |phi><phi|.
/// D is Hermitian and traceless.
struct DeviationTerm {
  Eigen::VectorXd gamma;
  double gamma_mean = 0;
  Operator d;
};

inline Eigen::VectorXd gamma_diagonal(const PureState& phi, const Spectrum& spec,
                                      double* mean_out = nullptr) {
  const double e = energy_moments(phi, spec).mean;
  Eigen::VectorXd g(static_cast<Eigen::Index>(spec.dim()));
  double mean = 0;
  for (std::size_t j = 0; j < spec.dim(); ++j) {
    const double x = spec[j] - e;
    g(Eigen::Index(j)) = 0.25 * x * x;
    mean += g(Eigen::Index(j)) * std::norm(phi[j]);
  }
  if (mean_out) *mean_out = mean;
  return g;
}

inline DeviationTerm deviation_term(const PureState& phi, const Spectrum& spec) {
  detail::require_same_dim(phi, spec, "deviation_term");
  DeviationTerm t;
  t.gamma = gamma_diagonal(phi, spec, &t.gamma_mean);
  const Operator P = phi.projector();
  const Operator gp = t.gamma.cast<Complex>().asDiagonal() * P;
  t.d = gp + gp.adjoint() - 2.0 * t.gamma_mean * P;
  return t;
}

/// <psi|D[phi]|psi> in O(dim) without forming D.
inline double deviation_expectation(const PureState& psi, const PureState& phi,
                                    const Spectrum& spec) {
  double gmean = 0;
  const Eigen::VectorXd g = gamma_diagonal(phi, spec, &gmean);
  const Complex overlap = phi.amplitudes().dot(psi.amplitudes());  // <phi|psi>
  Complex psi_g_phi = 0;                                           // <psi|G|phi>
  for (Eigen::Index j = 0; j < g.size(); ++j)
    psi_g_phi += std::conj(psi.amplitudes()(j)) * g(j) * phi.amplitudes()(j);
  return 2.0 * (psi_g_phi * overlap).real() - 2.0 * gmean * std::norm(overlap);
}

struct PredictedPair {
  DensityOperator rho_a;
  DensityOperator rho_b;
};

/// rho_{a,b} ~ |phi_{+-dt}><phi_{+-dt}| - dt^2 D[phi0], with phi_t the flow
/// state. Accurate to O(dt^3).
inline PredictedPair expand_short_time(const PureState& phi0, const Spectrum& spec,
                                       double dt) {
  detail::require_same_dim(phi0, spec, "expand_short_time");
  if (std::abs(dt) * (spec.max() - spec.min()) > 0.5)
    throw std::invalid_argument("expand_short_time: |dt| * span exceeds 0.5");
  const Operator correction = dt * dt * deviation_term(phi0, spec).d;
  return {{flow_exact(phi0, spec, +dt).projector() - correction},
          {flow_exact(phi0, spec, -dt).projector() - correction}};
}

/// Plain Taylor expansion of the reduced states to second order in dt:
///   rho_{a,b} = P -+ i dt [G, P] - dt^2/8 ({H^2, P} - c H P H)
/// with G = -i [H/2, P]. The trace-preserving expansion has c = 2; other
/// values are accepted so the check against the exact states can reject
/// them.
inline PredictedPair taylor_second_order(const PureState& phi0,
                                         const Spectrum& spec, double dt,
                                         double hph_coefficient = 2.0) {
  detail::require_same_dim(phi0, spec, "taylor_second_order");
  const auto n = static_cast<Eigen::Index>(spec.dim());
  Eigen::VectorXcd hd(n);
  for (Eigen::Index j = 0; j < n; ++j) hd(j) = spec[std::size_t(j)];
  const auto H = hd.asDiagonal();
  const Operator P = phi0.projector();
  const Operator HP = H * P;
  const Operator G = Complex(0, -1) * 0.5 * (HP - HP.adjoint());
  const Operator first = Complex(0, 1) * dt * (G * P - P * G);
  const Operator H2P = H * HP;
  const Operator second = (dt * dt / 8.0) *
      (H2P + H2P.adjoint() - hph_coefficient * (HP * H));
  return {{P - first - second}, {P + first - second}};
}

struct EnergyPair {
  double E_a = 0;
  double E_b = 0;
};

/// First-order transfer: E_a ~ E0 - var dt, E_b ~ E0 + var dt.
inline EnergyPair transfer_first_order(const PureState& phi0, const Spectrum& spec,
                                       double dt) {
  const auto m = energy_moments(phi0, spec);
  return {m.mean - m.variance * dt, m.mean + m.variance * dt};
}

// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const LowRankDensity& r) {
  nlohmann::json basis = nlohmann::json::array();
  for (const auto& v : r.basis) basis.push_back(to_json(PureState::normalized(v)));
  return {{"basis", std::move(basis)}, {"coefficients", operator_to_json(r.coeff)}};
}

inline nlohmann::json to_json(const ProtocolOutput& o) {
  return {{"E0", o.E0}, {"Ea", o.E_a}, {"Eb", o.E_b}, {"dt", o.dt},
          {"rho_a", to_json(o.rho_a)}, {"rho_b", to_json(o.rho_b)}};
}

}  // namespace swapanneal

#endif  // SWAPANNEAL_PROTOCOL_HPP
