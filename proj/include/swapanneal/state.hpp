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

#ifndef SWAPANNEAL_STATE_HPP
#define SWAPANNEAL_STATE_HPP

/** @file swapanneal/state.hpp
    @brief Pure states and density operators in the energy eigenbasis.

    Amplitudes are coefficients on the sorted eigenvectors of a Spectrum.
    Phase evolution is exact and never renormalized; iterative integrators
    elsewhere renormalize explicitly.
*/

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "swapanneal/spectrum.hpp"

namespace swapanneal {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Operator = Eigen::MatrixXcd;

inline constexpr double kNormTol = 1e-10;

/// Unit-norm amplitude vector.
class PureState {
 public:
  PureState() = default;

  /// Throws std::invalid_argument if the norm differs from 1 by more than
  /// kNormTol.
  explicit PureState(Vector amplitudes) : amp_(std::move(amplitudes)) {
    if (amp_.size() == 0) throw std::invalid_argument("empty state");
    if (std::abs(amp_.norm() - 1.0) > kNormTol)
      throw std::invalid_argument("state is not normalized");
  }

  /// Scales `v` to unit norm; throws std::domain_error for zero or
  /// non-finite input.
  static PureState normalized(Vector v) {
    const double n = v.norm();
    if (!(n > 0) || !std::isfinite(n))
      throw std::domain_error("cannot normalize a zero or non-finite vector");
    v /= n;
    return PureState(std::move(v));
  }

  static PureState basis(std::size_t dim, std::size_t index) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return PureState(std::move(v));
  }

  std::size_t dim() const { return static_cast<std::size_t>(amp_.size()); }
  const Vector& amplitudes() const { return amp_; }
  Complex operator[](std::size_t i) const {
    return amp_(static_cast<Eigen::Index>(i));
  }

  Operator projector() const { return amp_ * amp_.adjoint(); }

 private:
  Vector amp_;
};

/// Dense Hermitian operator intended to have unit trace. Perturbative
/// predictions are carried in this type too, so positivity is checked on
/// request rather than enforced.
struct DensityOperator {
  Operator matrix;

  std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
  Complex trace() const { return matrix.trace(); }
};

/// Support of at most two vectors and a Hermitian coefficient matrix:
/// rho = sum_{pq} coeff(p, q) |v_p><v_q|.
struct LowRankDensity {
  std::vector<Vector> basis;
  Eigen::MatrixXcd coeff;

  Operator to_dense() const {
    const auto n = basis.front().size();
    Operator rho = Operator::Zero(n, n);
    for (std::size_t p = 0; p < basis.size(); ++p)
      for (std::size_t q = 0; q < basis.size(); ++q)
        rho += coeff(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) *
               basis[p] * basis[q].adjoint();
    return rho;
  }

  Complex trace() const {
    Complex t = 0;
    for (std::size_t p = 0; p < basis.size(); ++p)
      for (std::size_t q = 0; q < basis.size(); ++q)
        t += coeff(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) *
             basis[q].dot(basis[p]);
    return t;
  }

  /// Tr(rho H) for diagonal H.
  double energy(const Spectrum& spec) const {
    Complex e = 0;
    for (std::size_t p = 0; p < basis.size(); ++p)
      for (std::size_t q = 0; q < basis.size(); ++q) {
        Complex hq = 0;
        for (std::size_t i = 0; i < spec.dim(); ++i) {
          const auto k = static_cast<Eigen::Index>(i);
          hq += std::conj(basis[q](k)) * spec[i] * basis[p](k);
        }
        e += coeff(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) * hq;
      }
    return e.real();
  }
};

struct DensityCheck {
  double hermiticity = 0;     // max |rho - rho^dagger|
  double trace_error = 0;     // |Tr rho - 1|
  double min_eigenvalue = 0;

  bool ok(double herm_tol = 1e-12, double trace_tol = 1e-10,
          double psd_tol = 1e-10) const {
    return hermiticity <= herm_tol && trace_error <= trace_tol &&
           min_eigenvalue >= -psd_tol;
  }
};

inline DensityCheck check_density(const Operator& rho) {
  DensityCheck c;
  c.hermiticity = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  c.trace_error = std::abs(rho.trace() - Complex(1.0));
  const Operator h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> es(h, Eigen::EigenvaluesOnly);
  c.min_eigenvalue = es.eigenvalues().minCoeff();
  return c;
}

/// Spectral norm of a Hermitian (or near-Hermitian) operator.
inline double hermitian_norm(const Operator& a) {
  const Operator h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// Half the trace norm of a - b.
inline double trace_distance(const Operator& a, const Operator& b) {
  const Operator d = a - b;
  const Operator h = 0.5 * (d + d.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> es(h, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

namespace detail {

inline void require_same_dim(const PureState& s, const Spectrum& spec,
                             const char* where) {
  if (s.dim() != spec.dim())
    throw std::invalid_argument(std::string(where) + ": state dim " +
                                std::to_string(s.dim()) + " != spectrum dim " +
                                std::to_string(spec.dim()));
}

}  // namespace detail

inline PureState uniform_state(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("uniform_state: dim must be >= 1");
  const auto n = static_cast<Eigen::Index>(dim);
  return PureState(Vector::Constant(n, Complex(1.0 / std::sqrt(double(dim)))));
}

/// Applies exp(-i sign H t) in the eigenbasis.
inline PureState evolve_phase(const PureState& state, const Spectrum& spec,
                              double t, int sign = +1) {
  detail::require_same_dim(state, spec, "evolve_phase");
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("evolve_phase: sign must be +1 or -1");
  Vector v = state.amplitudes();
  for (std::size_t j = 0; j < spec.dim(); ++j)
    v(static_cast<Eigen::Index>(j)) *= std::polar(1.0, -sign * spec[j] * t);
  return PureState(std::move(v));
}

struct EnergyMoments {
  double mean = 0;
  double variance = 0;
};

inline EnergyMoments energy_moments(const PureState& state,
                                    const Spectrum& spec) {
  detail::require_same_dim(state, spec, "energy_moments");
  double e1 = 0;
  for (std::size_t j = 0; j < spec.dim(); ++j)
    e1 += std::norm(state[j]) * spec[j];
  // central second moment; equals <H^2> - <H>^2 without the cancellation
  double var = 0;
  for (std::size_t j = 0; j < spec.dim(); ++j) {
    const double d = spec[j] - e1;
    var += std::norm(state[j]) * d * d;
  }
  return {e1, var};
}

struct Survival {
  double probability = 1;  // |<phi|exp(-iHt)|phi>|^2
  double derivative = 0;   // its analytic time derivative
  Complex amplitude = 1;   // <phi|exp(-iHt)|phi>
};

inline Survival survival(const PureState& state, const Spectrum& spec,
                         double t) {
  detail::require_same_dim(state, spec, "survival");
  Complex a = 0, da = 0;
  for (std::size_t j = 0; j < spec.dim(); ++j) {
    const Complex term = std::norm(state[j]) * std::polar(1.0, -spec[j] * t);
    a += term;
    da += Complex(0, -1) * spec[j] * term;
  }
  return {std::norm(a), 2.0 * (std::conj(a) * da).real(), a};
}

enum class TraceSide { a, b };

/// Partial trace of an operator on C^d (x) C^d. `keep` names the factor
/// that survives: TraceSide::a traces out b and vice versa.
inline DensityOperator partial_trace(const Operator& joint, TraceSide keep) {
  const auto n = joint.rows();
  if (joint.cols() != n)
    throw std::invalid_argument("partial_trace: operator must be square");
  const auto d = static_cast<Eigen::Index>(
      std::llround(std::sqrt(static_cast<double>(n))));
  if (d * d != n)
    throw std::invalid_argument("partial_trace: dimension is not a square");
  Operator out = Operator::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index ip = 0; ip < d; ++ip) {
      Complex s = 0;
      for (Eigen::Index k = 0; k < d; ++k)
        s += keep == TraceSide::a ? joint(i * d + k, ip * d + k)
                                  : joint(k * d + i, k * d + ip);
      out(i, ip) = s;
    }
  return {std::move(out)};
}

struct Eigensystem {
  Spectrum spectrum;
  Operator basis;  // columns are eigenvectors, ordered like the spectrum

  /// Amplitudes of a computational-basis vector in the eigenbasis.
  Vector to_eigenbasis(const Vector& v) const { return basis.adjoint() * v; }
  Vector from_eigenbasis(const Vector& c) const { return basis * c; }
};

/// Eigendecomposition of a dense Hermitian matrix; the entry point for
/// Hamiltonians not given in diagonal form.
inline Eigensystem eigendecompose(const Operator& h, double herm_tol = 1e-10) {
  if (h.rows() != h.cols() || h.rows() < 2)
    throw std::invalid_argument("eigendecompose: need a square matrix, dim >= 2");
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > herm_tol)
    throw std::invalid_argument("eigendecompose: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Operator> es(0.5 * (h + h.adjoint()));
  if (es.info() != Eigen::Success)
    throw std::domain_error("eigendecompose: solver did not converge");
  const auto& ev = es.eigenvalues();
  std::vector<double> values(ev.data(), ev.data() + ev.size());
  return {Spectrum(std::move(values), "dense"), es.eigenvectors()};
}

// ---------------------------------------------------------------------------
// JSON: complex entries are interleaved [re, im] pairs, matrices row-major.

inline nlohmann::json to_json(const PureState& s) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t i = 0; i < s.dim(); ++i) {
    arr.push_back(s[i].real());
    arr.push_back(s[i].imag());
  }
  return {{"dim", s.dim()}, {"amplitudes", std::move(arr)}};
}

inline PureState pure_state_from_json(const nlohmann::json& j) {
  const auto dim = j.at("dim").get<std::size_t>();
  const auto& arr = j.at("amplitudes");
  if (arr.size() != 2 * dim)
    throw std::invalid_argument("state JSON: amplitude count mismatch");
  Vector v(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i)
    v(static_cast<Eigen::Index>(i)) =
        Complex(arr[2 * i].get<double>(), arr[2 * i + 1].get<double>());
  return PureState(std::move(v));
}

inline nlohmann::json operator_to_json(const Operator& m) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      arr.push_back(m(r, c).real());
      arr.push_back(m(r, c).imag());
    }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(arr)}};
}

inline Operator operator_from_json(const nlohmann::json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& arr = j.at("entries");
  if (static_cast<Eigen::Index>(arr.size()) != 2 * rows * cols)
    throw std::invalid_argument("operator JSON: entry count mismatch");
  Operator m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c, k += 2)
      m(r, c) = Complex(arr[k].get<double>(), arr[k + 1].get<double>());
  return m;
}

inline nlohmann::json to_json(const DensityOperator& rho) {
  return operator_to_json(rho.matrix);
}

inline DensityOperator density_from_json(const nlohmann::json& j) {
  return {operator_from_json(j)};
}

}  // namespace swapanneal

#endif  // SWAPANNEAL_STATE_HPP
