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

#ifndef SWAPANNEAL_SPECTRUM_HPP
#define SWAPANNEAL_SPECTRUM_HPP

/** @file swapanneal/spectrum.hpp
    @brief Diagonal problem Hamiltonians: the benchmark model family, the
    doubled Hamiltonian, and spectrum-derived constants.

    Every Hamiltonian in this library is carried by its sorted eigenvalue
    list. Dynamics is evaluated in the energy eigenbasis.
*/

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "swapanneal/format.hpp"

namespace swapanneal {

/// Default absolute tolerance (in units of the model energy scale) used to
/// decide whether two eigenvalues belong to the same degenerate level.
inline constexpr double kDegeneracyTol = 1e-12;

/// Benchmark Hamiltonian families.
///  - a: database search, a single level at -delta above a flat zero band.
///  - b: (a) with one extra level at +delta on top.
///  - c: binomial spectrum from bit counts of the level index.
///  - d: J levels at -delta, J levels at +delta, zeros between,
///       J = floor(sqrt(dim)) - 1.
enum class ModelKind { a, b, c, d };

inline char to_char(ModelKind kind) {
  switch (kind) {
    case ModelKind::a: return 'a';
    case ModelKind::b: return 'b';
    case ModelKind::c: return 'c';
    case ModelKind::d: return 'd';
  }
  return '?';
}

inline ModelKind parse_model_kind(std::string_view text) {
  if (text == "a") return ModelKind::a;
  if (text == "b") return ModelKind::b;
  if (text == "c") return ModelKind::c;
  if (text == "d") return ModelKind::d;
  throw std::invalid_argument("unknown model kind '" + std::string(text) +
                              "' (expected a, b, c or d)");
}

/// Sorted eigenvalue list of a diagonal Hamiltonian.
class Spectrum {
 public:
  Spectrum() = default;

  /// Throws std::invalid_argument unless the values are finite, sorted
  /// ascending and at least two in number.
  explicit Spectrum(std::vector<double> eigenvalues, std::string label = {},
                    double delta = 1.0)
      : eigenvalues_(std::move(eigenvalues)),
        label_(std::move(label)),
        delta_(delta) {
    if (eigenvalues_.size() < 2)
      throw std::invalid_argument("spectrum needs at least two eigenvalues");
    for (double e : eigenvalues_)
      if (!std::isfinite(e))
        throw std::invalid_argument("spectrum contains a non-finite value");
    if (!std::is_sorted(eigenvalues_.begin(), eigenvalues_.end()))
      throw std::invalid_argument("spectrum must be sorted ascending");
  }

  /// Sorts before validating.
  static Spectrum from_unsorted(std::vector<double> values,
                                std::string label = {}, double delta = 1.0) {
    std::sort(values.begin(), values.end());
    return Spectrum(std::move(values), std::move(label), delta);
  }

  std::size_t dim() const { return eigenvalues_.size(); }
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  double operator[](std::size_t i) const { return eigenvalues_[i]; }
  double min() const { return eigenvalues_.front(); }
  double max() const { return eigenvalues_.back(); }
  const std::string& label() const { return label_; }
  double delta() const { return delta_; }

  friend bool operator==(const Spectrum&, const Spectrum&) = default;

 private:
  std::vector<double> eigenvalues_;
  std::string label_;
  double delta_ = 1.0;
};

struct SpectralStats {
  double ground_energy = 0;
  double top_energy = 0;
  double gap = 0;   // first level above the ground eigenspace minus ground
  double span = 0;  // top minus ground
  std::size_t ground_degeneracy = 0;
};

namespace detail {

inline bool is_power_of_two(std::size_t n) { return n && !(n & (n - 1)); }

inline std::size_t log2_exact(std::size_t n) {
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  return bits;
}

inline std::size_t isqrt(std::size_t n) {
  auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace detail

/// Ground-band size J of model (d).
inline std::size_t model_d_band(std::size_t dim) {
  return detail::isqrt(dim) - 1;
}

inline Spectrum build_model(ModelKind kind, std::size_t dim, double delta) {
  if (!(delta > 0) || !std::isfinite(delta))
    throw std::invalid_argument("delta must be a positive finite number");
  if (dim < 2) throw std::invalid_argument("dim must be at least 2");

  std::vector<double> e(dim, 0.0);
  switch (kind) {
    case ModelKind::a:
      e[0] = -delta;
      break;
    case ModelKind::b:
      if (dim < 3) throw std::invalid_argument("model b needs dim >= 3");
      e[0] = -delta;
      e[dim - 1] = delta;
      break;
    case ModelKind::c: {
      if (!detail::is_power_of_two(dim))
        throw std::invalid_argument("model c needs dim to be a power of 2");
      const auto digits = static_cast<int>(detail::log2_exact(dim));
      for (std::size_t x = 0; x < dim; ++x) {
        const int ones = std::popcount(x);
        const int zeros = digits - ones;
        e[x] = -delta * static_cast<double>(zeros - ones);
      }
      std::sort(e.begin(), e.end());
      break;
    }
    case ModelKind::d: {
      if (dim < 4) throw std::invalid_argument("model d needs dim >= 4");
      const std::size_t band = model_d_band(dim);
      for (std::size_t j = 0; j < band; ++j) {
        e[j] = -delta;
        e[dim - 1 - j] = delta;
      }
      break;
    }
  }
  return Spectrum(std::move(e), std::string(1, to_char(kind)), delta);
}

/// Spectrum of H (x) I - I (x) H: every pairwise difference, sorted.
inline Spectrum doubled(const Spectrum& spec) {
  const auto& e = spec.eigenvalues();
  std::vector<double> out;
  out.reserve(e.size() * e.size());
  for (double ei : e)
    for (double ej : e) out.push_back(ei - ej);
  std::sort(out.begin(), out.end());
  return Spectrum(std::move(out), spec.label() + "~", spec.delta());
}

inline std::size_t ground_degeneracy(const Spectrum& spec,
                                     double tol = kDegeneracyTol) {
  const auto& e = spec.eigenvalues();
  std::size_t j = 1;
  while (j < e.size() && e[j] - e[0] <= tol) ++j;
  return j;
}

inline SpectralStats spectral_stats(const Spectrum& spec,
                                    double degeneracy_tol = kDegeneracyTol) {
  const std::size_t J = ground_degeneracy(spec, degeneracy_tol);
  if (J == spec.dim())
    throw std::domain_error("constant spectrum: gap is zero");
  SpectralStats s;
  s.ground_energy = spec.min();
  s.top_energy = spec.max();
  s.gap = spec[J] - spec.min();
  s.span = spec.max() - spec.min();
  s.ground_degeneracy = J;
  return s;
}

/// Lower bound on the half-size m of a network that conserves the total
/// energy of its 2m members while driving one member to the ground level.
inline double min_m_bound(const Spectrum& spec, double e0) {
  const double headroom = spec.max() - e0;
  if (!(headroom > 0))
    throw std::domain_error("min_m_bound: e0 must lie below the top level");
  return 0.5 * (spec.max() - spec.min()) / headroom;
}

// ---------------------------------------------------------------------------
// Serialization

/// Text format: one header line `# model=<label> delta=<delta> dim=<dim>`
/// followed by one eigenvalue per line. Lines starting with '#' are comments.
inline void write_text(std::ostream& os, const Spectrum& spec) {
  os << "# model=" << (spec.label().empty() ? "custom" : spec.label())
     << " delta=" << format_double(spec.delta()) << " dim=" << spec.dim()
     << '\n';
  for (double e : spec.eigenvalues()) os << format_double(e) << '\n';
}

inline Spectrum read_text(std::istream& is) {
  std::string line, label;
  double delta = 1.0;
  std::vector<double> values;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string tok;
      while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const auto key = tok.substr(0, eq);
        const auto val = tok.substr(eq + 1);
        if (key == "model") label = val == "custom" ? "" : val;
        if (key == "delta") delta = parse_double(val);
      }
      continue;
    }
    values.push_back(parse_double(line));
  }
  return Spectrum::from_unsorted(std::move(values), std::move(label), delta);
}

inline nlohmann::json to_json(const Spectrum& spec) {
  return nlohmann::json(spec.eigenvalues());
}

inline Spectrum spectrum_from_json(const nlohmann::json& j,
                                   std::string label = {},
                                   double delta = 1.0) {
  if (!j.is_array()) throw std::invalid_argument("spectrum JSON must be an array");
  return Spectrum::from_unsorted(j.get<std::vector<double>>(), std::move(label),
                                 delta);
}

}  // namespace swapanneal

#endif  // SWAPANNEAL_SPECTRUM_HPP
