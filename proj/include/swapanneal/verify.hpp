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

#ifndef SWAPANNEAL_VERIFY_HPP
#define SWAPANNEAL_VERIFY_HPP

/** @file swapanneal/verify.hpp
    @brief Oracle and convergence-order checks shared by the `verify`
    command and the acceptance suite.
*/

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "swapanneal/coefficients.hpp"
#include "swapanneal/flow.hpp"
#include "swapanneal/network.hpp"
#include "swapanneal/protocol.hpp"
#include "swapanneal/schedule.hpp"
#include "swapanneal/spectrum.hpp"
#include "swapanneal/state.hpp"

namespace swapanneal {

/// Portable random source: the engine is fully specified by the standard
/// and the transforms below avoid implementation-defined distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t lo, std::size_t hi) {  // inclusive
    return lo + std::size_t(eng_() % std::uint64_t(hi - lo + 1));
  }
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 eng_;
};

inline Spectrum random_spectrum(Rng& rng, std::size_t dim) {
  std::vector<double> e(dim);
  for (auto& x : e) x = rng.uniform(-1.0, 1.0);
  return Spectrum::from_unsorted(std::move(e), "random");
}

inline PureState random_state(Rng& rng, std::size_t dim) {
  Vector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(rng.normal(), rng.normal());
  return PureState::normalized(v);
}

/// Errors at successive halvings of dt and the ratios between neighbours.
struct OrderMeasurement {
  std::vector<double> dts;
  std::vector<double> errors;
  std::vector<double> ratios;

  bool within(double lo, double hi) const {
    return !ratios.empty() && std::all_of(ratios.begin(), ratios.end(),
                                          [&](double r) { return r >= lo && r <= hi; });
  }
  double observed_order() const {
    if (ratios.empty()) return 0;
    return std::log2(ratios.back());
  }
};

template <class F>
OrderMeasurement measure_order(const std::vector<double>& dts, F&& error_at) {
  OrderMeasurement m;
  m.dts = dts;
  for (double dt : dts) m.errors.push_back(error_at(dt));
  for (std::size_t i = 1; i < m.errors.size(); ++i)
    m.ratios.push_back(m.errors[i - 1] / m.errors[i]);
  return m;
}

inline nlohmann::json to_json(const OrderMeasurement& m) {
  return {{"dt", m.dts}, {"error", m.errors}, {"ratio", m.ratios}};
}

inline const std::vector<double>& default_halving_dts() {
  static const std::vector<double> dts{0.02, 0.01, 0.005};
  return dts;
}

// ---------------------------------------------------------------------------
// Protocol

struct ProtocolOracleStats {
  std::size_t samples = 0;
  double max_state_error = 0;    // operator norm, closed form vs dense unitary
  double max_energy_error = 0;   // |E_closed - E_oracle|
  double max_conservation = 0;   // |E_a + E_b - 2 E0| over both paths
  double seconds = 0;
};

/// Random (spectrum, state, dt) triples with dim in [2, max_dim].
inline ProtocolOracleStats check_protocol_oracle(std::uint64_t seed, std::size_t samples,
                                                 std::size_t max_dim = 8) {
  Rng rng(seed);
  ProtocolOracleStats s;
  s.samples = samples;
  for (std::size_t n = 0; n < samples; ++n) {
    const std::size_t dim = rng.index(2, max_dim);
    const Spectrum spec = random_spectrum(rng, dim);
    const PureState phi = random_state(rng, dim);
    const double dt = rng.uniform(-2.0, 2.0);
    const ProtocolOutput closed = apply_protocol(phi, spec, dt);
    const OracleOutput oracle = protocol_oracle(phi, spec, dt);
    s.max_state_error = std::max({s.max_state_error,
                                  hermitian_norm(closed.rho_a.to_dense() - oracle.rho_a.matrix),
                                  hermitian_norm(closed.rho_b.to_dense() - oracle.rho_b.matrix)});
    s.max_energy_error = std::max({s.max_energy_error, std::abs(closed.E_a - oracle.E_a),
                                   std::abs(closed.E_b - oracle.E_b)});
    s.max_conservation =
        std::max({s.max_conservation, std::abs(closed.E_a + closed.E_b - 2 * closed.E0),
                  std::abs(oracle.E_a + oracle.E_b - 2 * oracle.E0)});
  }
  return s;
}

/// |E_a - (E0 - var dt)| under dt halving.
inline OrderMeasurement first_order_transfer_order(const Spectrum& spec,
                                                   const PureState& phi0,
                                                   const std::vector<double>& dts) {
  return measure_order(dts, [&](double dt) {
    const auto out = apply_protocol(phi0, spec, dt);
    return std::abs(out.E_a - transfer_first_order(phi0, spec, dt).E_a);
  });
}

/// Operator-norm gap between the exact reduced states and the short-time
/// prediction (max over both systems).
inline OrderMeasurement short_time_order(const Spectrum& spec, const PureState& phi0,
                                         const std::vector<double>& dts) {
  return measure_order(dts, [&](double dt) {
    const auto exact = protocol_oracle(phi0, spec, dt);
    const auto pred = expand_short_time(phi0, spec, dt);
    return std::max(hermitian_norm(exact.rho_a.matrix - pred.rho_a.matrix),
                    hermitian_norm(exact.rho_b.matrix - pred.rho_b.matrix));
  });
}

/// Same gap for the plain second-order Taylor expansion.
inline OrderMeasurement taylor_order(const Spectrum& spec, const PureState& phi0,
                                     const std::vector<double>& dts,
                                     double hph_coefficient) {
  return measure_order(dts, [&](double dt) {
    const auto exact = protocol_oracle(phi0, spec, dt);
    const auto pred = taylor_second_order(phi0, spec, dt, hph_coefficient);
    return std::max(hermitian_norm(exact.rho_a.matrix - pred.rho_a.matrix),
                    hermitian_norm(exact.rho_b.matrix - pred.rho_b.matrix));
  });
}

// ---------------------------------------------------------------------------
// Flow

/// Flow time at which the ground probability reaches 0.99.
inline double flow_horizon(const Spectrum& spec, const PureState& phi0, double h) {
  return find_time_for_p1(phi0, spec, 0.99, h).time;
}

struct Rk4Comparison {
  double horizon = 0;
  std::size_t steps = 0;
  double max_error = 0;  // max over grid points of |rk4 - exact|
  bool guard_ok = true;  // h * span <= 0.1
};

/// RK4 path at step h against the closed form, up to the 0.99 horizon.
/// The step guard is reported, not enforced, so the raw error is always
/// available.
inline Rk4Comparison compare_rk4(const Spectrum& spec, const PureState& phi0, double h) {
  Rk4Comparison c;
  c.horizon = flow_horizon(spec, phi0, h);
  c.steps = static_cast<std::size_t>(std::llround(c.horizon / h));
  c.guard_ok = h * (spec.max() - spec.min()) <= 0.1 + 1e-15;
  Vector v = phi0.amplitudes();
  for (std::size_t s = 1; s <= c.steps; ++s) {
    v = detail::rk4_step(v, spec, h);
    const Vector exact = flow_exact(phi0, spec, double(s) * h).amplitudes();
    c.max_error = std::max(c.max_error, (v - exact).norm());
  }
  return c;
}

/// Error of RK4 at a fixed time t under halving of h.
inline OrderMeasurement rk4_order(const Spectrum& spec, const PureState& phi0, double t,
                                  const std::vector<double>& hs) {
  return measure_order(hs, [&](double h) {
    return (flow_rk4(phi0, spec, t, h).amplitudes() -
            flow_exact(phi0, spec, t).amplitudes()).norm();
  });
}

struct SandwichCheck {
  std::size_t points = 0;
  double worst_violation = 0;  // max(lower - p, p - upper, 0)
  double max_bound_gap = 0;    // max |bound - p| (both bounds)
};

/// Logistic bounds against the ground-eigenspace probability on a grid
/// reaching 1.25 times the slowest 0.99 window edge.
inline SandwichCheck check_sandwich(const Spectrum& spec, const PureState& phi0,
                                    double dt) {
  const auto st = spectral_stats(spec);
  const double p0 = ground_probability(phi0, spec).p_ground;
  const double horizon = 1.25 * t_c_bounds_from(p0, st.gap, st.span, 0.99).upper;
  FlowTableOptions opt;
  opt.dt = dt;
  opt.steps = static_cast<std::size_t>(std::ceil(horizon / dt));
  const FlowResult r = flow_table(phi0, spec, opt);
  SandwichCheck c;
  c.points = r.times.size();
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    const double p = r.p_ground[i];
    c.worst_violation = std::max({c.worst_violation, r.lower_bound[i] - p,
                                  p - r.upper_bound[i]});
    c.max_bound_gap = std::max({c.max_bound_gap, std::abs(r.lower_bound[i] - p),
                                std::abs(r.upper_bound[i] - p)});
  }
  return c;
}

struct CrossingCheck {
  double c = 0;
  double crossing = 0;  // first grid time with p_ground >= c
  TimeWindow window;    // ground-degeneracy-aware window
  TimeWindow literal;   // window computed with p0 = 1/dim
  bool inside = false;
  bool inside_literal = false;
};

inline CrossingCheck check_crossing(const Spectrum& spec, const PureState& phi0,
                                    double c, double dt) {
  const auto st = spectral_stats(spec);
  CrossingCheck r;
  r.c = c;
  r.crossing = find_time_for_p1(phi0, spec, c, dt).time;
  r.window = t_c_bounds_from(ground_probability(phi0, spec).p_ground, st.gap, st.span, c);
  r.literal = t_c_bounds_from(1.0 / double(spec.dim()), st.gap, st.span, c);
  auto in = [&](const TimeWindow& w) {
    return r.crossing >= w.lower - dt && r.crossing <= w.upper + dt;
  };
  r.inside = in(r.window);
  r.inside_literal = in(r.literal);
  return r;
}

// ---------------------------------------------------------------------------
// Network

struct NetworkOrderCheck {
  OrderMeasurement first_term;  // exact rho_{2m} vs |phi_{tau dt}><phi_{tau dt}|
  OrderMeasurement residual;    // exact rho_{2m} vs full K prediction
  double max_pair_energy_drift = 0;
  double bookkeeping_error = 0;  // |sum of jumps - total energy change|
};

/// Exact toy network against the K-based prediction for the last system.
inline NetworkOrderCheck check_network_order(const Spectrum& spec, const PureState& phi0,
                                             std::size_t m,
                                             const std::vector<double>& dts) {
  const Schedule sched = build_improved_schedule(m);
  const CoefficientMatrix K = propagate_coefficients(sched);
  const std::size_t last = sched.systems() - 1;
  const double tau = double(sched.terminal_tau()[last]);
  NetworkOrderCheck c;
  std::vector<double> first, resid;
  for (double dt : dts) {
    const NetworkSimulation sim = simulate_network_exact(sched, spec, phi0, dt);
    const Operator& exact = sim.reduced[last].matrix;
    first.push_back(trace_distance(exact, flow_exact(phi0, spec, tau * dt).projector()));
    resid.push_back(trace_distance(
        exact, predict_reduced_state(sched, last, K, spec, phi0, dt).matrix));
    double jumps = 0;
    for (const auto& rec : sim.energy_log) {
      c.max_pair_energy_drift = std::max(c.max_pair_energy_drift,
                                         std::abs(rec.after - rec.before));
      jumps += rec.replacement_jump;
    }
    c.bookkeeping_error =
        std::max(c.bookkeeping_error,
                 std::abs(sim.final_total_energy - sim.initial_total_energy - jumps));
  }
  std::size_t i = 0;
  c.first_term = measure_order(dts, [&](double) { return first[i++]; });
  i = 0;
  c.residual = measure_order(dts, [&](double) { return resid[i++]; });
  return c;
}

/// Qubit state used by the toy-network order check. The uniform qubit has
/// a flat (H - E)^2 and therefore no second-order deviation at all.
inline PureState toy_network_state() {
  Vector v(2);
  v << std::cos(0.3), std::sin(0.3);
  return PureState::normalized(v);
}

// ---------------------------------------------------------------------------
// Aggregated suite

struct CheckResult {
  std::string name;
  bool passed = false;
  nlohmann::json detail;
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  std::size_t protocol_samples = 200;
  double hph_coefficient = 2.0;
  std::size_t max_schedule_m = 64;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.passed; });
  }
  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
      if (!c.passed) out.push_back(c.name);
    return out;
  }
};

inline nlohmann::json to_json(const VerifyReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return {{"passed", r.passed()}, {"checks", std::move(checks)}};
}

inline VerifyReport run_verification(const VerifyOptions& opt) {
  VerifyReport report;
  const auto& dts = default_halving_dts();
  const std::vector<ModelKind> kinds{ModelKind::a, ModelKind::b, ModelKind::c,
                                     ModelKind::d};

  {
    const auto s = check_protocol_oracle(opt.seed, opt.protocol_samples);
    report.checks.push_back(
        {"protocol_closed_form_vs_unitary",
         s.max_state_error <= 1e-12 && s.max_energy_error <= 1e-12,
         {{"samples", s.samples},
          {"max_operator_norm_error", s.max_state_error},
          {"max_energy_error", s.max_energy_error},
          {"tolerance", 1e-12}}});
    report.checks.push_back({"energy_conservation",
                             s.max_conservation <= 1e-10,
                             {{"max_abs_error", s.max_conservation}, {"tolerance", 1e-10}}});
  }

  {
    nlohmann::json detail = nlohmann::json::object();
    bool ok = true;
    for (auto k : kinds) {
      const Spectrum spec = build_model(k, 8, 1.0);
      const auto m = first_order_transfer_order(spec, uniform_state(8), dts);
      ok = ok && m.within(6, 10);
      detail[std::string(1, to_char(k))] = to_json(m);
    }
    detail["bracket"] = {6, 10};
    report.checks.push_back({"first_order_transfer_cubic_remainder", ok, detail});
  }

  {
    nlohmann::json detail = nlohmann::json::object();
    bool ok_short = true, ok_taylor = true;
    nlohmann::json taylor = nlohmann::json::object();
    for (auto k : kinds) {
      const Spectrum spec = build_model(k, 8, 1.0);
      const PureState phi = uniform_state(8);
      const auto m = short_time_order(spec, phi, dts);
      const auto t = taylor_order(spec, phi, dts, opt.hph_coefficient);
      ok_short = ok_short && m.within(6, 10);
      ok_taylor = ok_taylor && t.within(6, 10);
      detail[std::string(1, to_char(k))] = to_json(m);
      taylor[std::string(1, to_char(k))] = to_json(t);
    }
    detail["bracket"] = {6, 10};
    taylor["bracket"] = {6, 10};
    taylor["hph_coefficient"] = opt.hph_coefficient;
    report.checks.push_back({"short_time_emulation_cubic", ok_short, detail});
    report.checks.push_back({"taylor_second_order_vs_oracle", ok_taylor, taylor});
  }

  {
    const Spectrum spec = build_model(ModelKind::b, 16, 1.0);
    const auto m = rk4_order(spec, uniform_state(16), 1.0, {0.04, 0.02, 0.01});
    nlohmann::json detail = to_json(m);
    detail["bracket"] = {12, 20};
    bool ok = m.within(12, 20);
    double worst = 0;
    for (auto k : kinds)
      for (std::size_t dim = 8; dim <= 512; dim *= 2) {
        const Spectrum s = build_model(k, dim, 1.0);
        if (0.01 * (s.max() - s.min()) > 0.1) continue;  // outside the step guard
        worst = std::max(worst, compare_rk4(s, uniform_state(dim), 0.01).max_error);
      }
    detail["max_error_h001"] = worst;
    detail["tolerance"] = 1e-8;
    ok = ok && worst <= 1e-8;
    report.checks.push_back({"rk4_vs_exact_flow", ok, detail});
  }

  {
    double worst = 0, model_a_gap = 0;
    for (auto k : kinds)
      for (std::size_t dim = 8; dim <= 512; dim *= 2) {
        const auto c = check_sandwich(build_model(k, dim, 1.0), uniform_state(dim), 0.01);
        worst = std::max(worst, c.worst_violation);
        if (k == ModelKind::a) model_a_gap = std::max(model_a_gap, c.max_bound_gap);
      }
    report.checks.push_back({"logistic_sandwich",
                             worst <= 1e-12 && model_a_gap <= 1e-9,
                             {{"worst_violation", worst},
                              {"model_a_bound_gap", model_a_gap}}});
  }

  {
    std::string first_error;
    std::size_t bad_m = 0;
    for (std::size_t m = 1; m <= opt.max_schedule_m && first_error.empty(); ++m) {
      first_error = validate(build_improved_schedule(m));
      bad_m = m;
    }
    const bool small_ok = build_improved_schedule(1).step_star == 1 &&
                          build_improved_schedule(2).step_star == 3;
    nlohmann::json detail{{"max_m", opt.max_schedule_m}, {"small_step_star_ok", small_ok}};
    if (!first_error.empty()) detail["error"] = "m=" + std::to_string(bad_m) + ": " + first_error;
    report.checks.push_back({"terminal_profiles", first_error.empty() && small_ok, detail});
  }

  {
    const Spectrum spec = build_model(ModelKind::a, 2, 1.0);
    const auto c = check_network_order(spec, toy_network_state(), 2, dts);
    const bool ok = c.first_term.within(3.2, 4.8) && c.max_pair_energy_drift <= 1e-10 &&
                    c.bookkeeping_error <= 1e-10;
    report.checks.push_back({"tiny_network_vs_coefficients", ok,
                             {{"first_term", to_json(c.first_term)},
                              {"residual", to_json(c.residual)},
                              {"residual_order", c.residual.observed_order()},
                              {"bracket", {3.2, 4.8}},
                              {"max_pair_energy_drift", c.max_pair_energy_drift},
                              {"bookkeeping_error", c.bookkeeping_error}}});
  }
  return report;
}

}  // namespace swapanneal

#endif  // SWAPANNEAL_VERIFY_HPP
