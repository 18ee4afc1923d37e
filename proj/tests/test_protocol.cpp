// Copyright 2026 The swapanneal Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "swapanneal/protocol.hpp"
#include "swapanneal/verify.hpp"

namespace sa = swapanneal;
using sa::ModelKind;

namespace {

double opnorm(const sa::Operator& a) { return sa::hermitian_norm(a); }

}  // namespace

TEST(ApplyProtocol, ZeroDtIsIdentity) {
  const auto spec = sa::build_model(ModelKind::b, 8, 1.0);
  const auto u = sa::uniform_state(8);
  const auto out = sa::apply_protocol(u, spec, 0.0);
  EXPECT_LT(opnorm(out.rho_a.to_dense() - u.projector()), 1e-15);
  EXPECT_LT(opnorm(out.rho_b.to_dense() - u.projector()), 1e-15);
  EXPECT_EQ(out.E_a, out.E0);
  EXPECT_EQ(out.E_b, out.E0);
}

TEST(ApplyProtocol, EigenstateIsStationary) {
  const auto spec = sa::build_model(ModelKind::c, 8, 1.0);
  const auto e = sa::PureState::basis(8, 3);
  const auto out = sa::apply_protocol(e, spec, 0.37);
  EXPECT_LT(opnorm(out.rho_a.to_dense() - e.projector()), 1e-15);
  EXPECT_LT(opnorm(out.rho_b.to_dense() - e.projector()), 1e-15);
  EXPECT_NEAR(out.E_a, spec[3], 1e-15);
}

TEST(ApplyProtocol, DatabaseEnergies) {
  const auto out = sa::apply_protocol(sa::uniform_state(8), sa::build_model(ModelKind::a, 8, 1.0), 0.1);
  EXPECT_NEAR(out.E_a, -0.125 - 0.109375 * std::sin(0.1), 1e-15);
  EXPECT_NEAR(out.E_a, -0.1359192, 1e-7);
  EXPECT_NEAR(out.E_b, -0.1140808, 1e-7);
  EXPECT_NEAR(out.rho_a.energy(sa::build_model(ModelKind::a, 8, 1.0)), out.E_a, 1e-15);
}

TEST(ApplyProtocol, NegativeDtSwapsRoles) {
  const auto spec = sa::build_model(ModelKind::b, 8, 1.0);
  const auto u = sa::uniform_state(8);
  const auto fwd = sa::apply_protocol(u, spec, 0.2);
  const auto bwd = sa::apply_protocol(u, spec, -0.2);
  EXPECT_NEAR(fwd.E_a, bwd.E_b, 1e-15);
  EXPECT_NEAR(fwd.E_b, bwd.E_a, 1e-15);
}

TEST(ApplyProtocol, ReducedStatesAreDensityOperators) {
  sa::Rng rng(21);
  for (int n = 0; n < 50; ++n) {
    const std::size_t dim = rng.index(2, 8);
    const auto spec = sa::random_spectrum(rng, dim);
    const auto phi = sa::random_state(rng, dim);
    const auto out = sa::apply_protocol(phi, spec, rng.uniform(-3, 3));
    EXPECT_TRUE(sa::check_density(out.rho_a.to_dense()).ok());
    EXPECT_TRUE(sa::check_density(out.rho_b.to_dense()).ok());
    EXPECT_NEAR(std::abs(out.rho_a.trace() - 1.0), 0, 1e-10);
    EXPECT_NEAR(out.E_a + out.E_b, 2 * out.E0, 1e-10);
  }
}

TEST(ProtocolOracle, AgreesWithClosedForm) {
  const auto s = sa::check_protocol_oracle(42, 300);
  EXPECT_LE(s.max_state_error, 1e-12);
  EXPECT_LE(s.max_energy_error, 1e-12);
  EXPECT_LE(s.max_conservation, 1e-10);
}

TEST(ProtocolOracle, PureJointStateAndZeroDt) {
  sa::Rng rng(4);
  const auto spec = sa::random_spectrum(rng, 5);
  const auto phi = sa::random_state(rng, 5);
  EXPECT_NEAR(sa::protocol_oracle(phi, spec, 0.8).joint_purity, 1.0, 1e-12);
  const auto zero = sa::protocol_oracle(phi, spec, 0.0);
  EXPECT_LT(opnorm(zero.rho_a.matrix - phi.projector()), 1e-15);
  EXPECT_THROW(sa::protocol_oracle(sa::uniform_state(65), sa::build_model(ModelKind::a, 65, 1.0), 0.1),
               std::invalid_argument);
}

TEST(DeviationTerm, TracelessHermitian) {
  sa::Rng rng(8);
  for (int n = 0; n < 10; ++n) {
    const auto spec = sa::random_spectrum(rng, 6);
    const auto phi = sa::random_state(rng, 6);
    const auto d = sa::deviation_term(phi, spec).d;
    EXPECT_LT(std::abs(d.trace()), 1e-12);
    EXPECT_LT((d - d.adjoint()).norm(), 1e-14);
    const auto psi = sa::random_state(rng, 6);
    const double dense = (psi.amplitudes().adjoint() * d * psi.amplitudes())(0, 0).real();
    EXPECT_NEAR(sa::deviation_expectation(psi, phi, spec), dense, 1e-13);
    EXPECT_NEAR(sa::deviation_expectation(phi, phi, spec), 0.0, 1e-14);
  }
}

TEST(ExpandShortTime, EigenstateExact) {
  const auto spec = sa::build_model(ModelKind::d, 16, 1.0);
  const auto e = sa::PureState::basis(16, 5);
  const auto p = sa::expand_short_time(e, spec, 0.1);
  EXPECT_LT(opnorm(p.rho_a.matrix - e.projector()), 1e-15);
  EXPECT_LT(opnorm(p.rho_b.matrix - e.projector()), 1e-15);
}

TEST(ExpandShortTime, UnitTraceAndCubicRemainder) {
  const auto spec = sa::build_model(ModelKind::a, 8, 1.0);
  const auto u = sa::uniform_state(8);
  EXPECT_NEAR(std::abs(sa::expand_short_time(u, spec, 0.05).rho_a.matrix.trace() - 1.0), 0, 1e-14);
  const auto m = sa::short_time_order(spec, u, {0.02, 0.01});
  EXPECT_GE(m.ratios[0], 6);
  EXPECT_LE(m.ratios[0], 10);
  EXPECT_THROW(sa::expand_short_time(u, spec, 0.6), std::invalid_argument);
}

TEST(TaylorSecondOrder, PrintedCoefficientIsRejected) {
  const auto spec = sa::build_model(ModelKind::b, 8, 1.0);
  const auto u = sa::uniform_state(8);
  EXPECT_TRUE(sa::taylor_order(spec, u, sa::default_halving_dts(), 2.0).within(6, 10));
  const auto bad = sa::taylor_order(spec, u, sa::default_halving_dts(), 1.0);
  EXPECT_FALSE(bad.within(6, 10));
  EXPECT_NEAR(bad.ratios.back(), 4.0, 0.2);
}

TEST(TransferFirstOrder, Examples) {
  const auto spec = sa::build_model(ModelKind::a, 8, 1.0);
  const auto u = sa::uniform_state(8);
  EXPECT_NEAR(sa::transfer_first_order(u, spec, 0.01).E_a, -0.12609375, 1e-15);
  const auto e = sa::transfer_first_order(sa::PureState::basis(8, 0), spec, 0.3);
  EXPECT_EQ(e.E_a, -1.0);
  EXPECT_EQ(e.E_b, -1.0);
  const auto m = sa::first_order_transfer_order(spec, u, sa::default_halving_dts());
  EXPECT_TRUE(m.within(6, 10));
}

TEST(ProtocolJson, Keys) {
  const auto out = sa::apply_protocol(sa::uniform_state(4), sa::build_model(ModelKind::b, 4, 1.0), 0.1);
  const auto j = sa::to_json(out);
  for (const char* k : {"E0", "Ea", "Eb", "dt", "rho_a", "rho_b"}) EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j["rho_a"]["basis"].size(), 2u);
  EXPECT_EQ(j["Ea"].get<double>(), out.E_a);
}
