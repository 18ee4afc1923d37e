// Copyright 2026 The swapanneal Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "swapanneal/spectrum.hpp"
#include "swapanneal/state.hpp"
#include "swapanneal/verify.hpp"

namespace sa = swapanneal;
using sa::Complex;
using sa::ModelKind;

TEST(PureState, Validation) {
  sa::Vector v(2);
  v << 1.0, 1.0;
  EXPECT_THROW(sa::PureState{v}, std::invalid_argument);
  EXPECT_NEAR(sa::PureState::normalized(v).amplitudes().norm(), 1.0, 1e-15);
  EXPECT_THROW(sa::PureState::normalized(sa::Vector::Zero(3)), std::domain_error);
}

TEST(UniformState, Amplitudes) {
  const auto s4 = sa::uniform_state(4);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(s4[i], Complex(0.5));
  const auto s8 = sa::uniform_state(8);
  EXPECT_NEAR(s8[3].real(), 0.3535534, 1e-7);
  for (std::size_t d = 1; d < 100; d += 7)
    EXPECT_NEAR(sa::uniform_state(d).amplitudes().norm(), 1.0, 1e-14);
}

TEST(EvolvePhase, Examples) {
  const auto spec = sa::build_model(ModelKind::a, 8, 1.0);
  const auto u = sa::uniform_state(8);
  const auto out = sa::evolve_phase(u, spec, std::numbers::pi, +1);
  EXPECT_NEAR(std::abs(out[0] - Complex(-1.0 / std::sqrt(8.0))), 0, 1e-15);
  for (std::size_t i = 1; i < 8; ++i) EXPECT_NEAR(std::abs(out[i] - u[i]), 0, 1e-15);
  EXPECT_EQ(sa::evolve_phase(u, spec, 0.0, -1).amplitudes(), u.amplitudes());
  const auto e0 = sa::PureState::basis(8, 0);
  EXPECT_NEAR(sa::survival(e0, spec, 0.7).probability, 1.0, 1e-15);
}

TEST(EnergyMoments, Examples) {
  const auto u = sa::uniform_state(8);
  auto a = sa::energy_moments(u, sa::build_model(ModelKind::a, 8, 1.0));
  EXPECT_NEAR(a.mean, -0.125, 1e-15);
  EXPECT_NEAR(a.variance, 0.109375, 1e-15);
  auto b = sa::energy_moments(u, sa::build_model(ModelKind::b, 8, 1.0));
  EXPECT_NEAR(b.mean, 0.0, 1e-15);
  EXPECT_NEAR(b.variance, 0.25, 1e-15);
  auto e = sa::energy_moments(sa::PureState::basis(8, 7), sa::build_model(ModelKind::b, 8, 1.0));
  EXPECT_EQ(e.mean, 1.0);
  EXPECT_EQ(e.variance, 0.0);
}

TEST(Survival, ClosedForm) {
  const auto spec = sa::build_model(ModelKind::a, 8, 1.0);
  const auto u = sa::uniform_state(8);
  for (double t : {0.0, 0.3, 1.0, std::numbers::pi, 5.0}) {
    const auto s = sa::survival(u, spec, t);
    EXPECT_NEAR(s.probability, (50 + 14 * std::cos(t)) / 64, 1e-14);
    EXPECT_NEAR(s.derivative, -(7.0 / 32.0) * std::sin(t), 1e-14);
  }
  EXPECT_NEAR(sa::survival(u, spec, std::numbers::pi).probability, 0.5625, 1e-14);
  EXPECT_NEAR(sa::survival(u, spec, std::numbers::pi / 2).derivative, -0.21875, 1e-14);
}

TEST(Survival, DerivativeMatchesFiniteDifference) {
  sa::Rng rng(7);
  for (int n = 0; n < 20; ++n) {
    const auto spec = sa::random_spectrum(rng, 6);
    const auto phi = sa::random_state(rng, 6);
    const double t = rng.uniform(-3, 3), h = 1e-5;
    const double fd = (sa::survival(phi, spec, t + h).probability -
                       sa::survival(phi, spec, t - h).probability) / (2 * h);
    EXPECT_NEAR(sa::survival(phi, spec, t).derivative, fd, 1e-8);
  }
}

TEST(PartialTrace, ProductState) {
  sa::Rng rng(3);
  const auto a = sa::random_state(rng, 3).projector();
  const auto b = sa::random_state(rng, 3).projector();
  sa::Operator joint(9, 9);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l) joint(i * 3 + k, j * 3 + l) = a(i, j) * b(k, l);
  EXPECT_LT((sa::partial_trace(joint, sa::TraceSide::a).matrix - a).norm(), 1e-15);
  EXPECT_LT((sa::partial_trace(joint, sa::TraceSide::b).matrix - b).norm(), 1e-15);
}

TEST(PartialTrace, BellPair) {
  sa::Vector psi = sa::Vector::Zero(4);
  psi(0) = psi(3) = 1 / std::sqrt(2.0);
  const auto r = sa::partial_trace(psi * psi.adjoint(), sa::TraceSide::a);
  EXPECT_LT((r.matrix - 0.5 * sa::Operator::Identity(2, 2)).norm(), 1e-15);
  EXPECT_THROW(sa::partial_trace(sa::Operator::Identity(3, 3), sa::TraceSide::a),
               std::invalid_argument);
}

TEST(DensityChecks, ProjectorPasses) {
  sa::Rng rng(11);
  EXPECT_TRUE(sa::check_density(sa::random_state(rng, 5).projector()).ok());
  sa::Operator bad = sa::Operator::Zero(2, 2);
  bad(0, 0) = 1.5;
  bad(1, 1) = -0.5;
  EXPECT_FALSE(sa::check_density(bad).ok());
}

TEST(LowRank, TraceAndEnergyMatchDense) {
  sa::Rng rng(5);
  const auto spec = sa::random_spectrum(rng, 4);
  sa::LowRankDensity r;
  r.basis = {sa::random_state(rng, 4).amplitudes(), sa::random_state(rng, 4).amplitudes()};
  r.coeff.resize(2, 2);
  r.coeff << 0.3, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.7;
  const auto dense = r.to_dense();
  EXPECT_NEAR(std::abs(r.trace() - dense.trace()), 0, 1e-14);
  double e = 0;
  for (int i = 0; i < 4; ++i) e += dense(i, i).real() * spec[std::size_t(i)];
  EXPECT_NEAR(r.energy(spec), e, 1e-14);
}

TEST(Eigendecompose, Examples) {
  sa::Operator x(2, 2);
  x << 0, 1, 1, 0;
  const auto es = sa::eigendecompose(x);
  EXPECT_NEAR(es.spectrum[0], -1, 1e-14);
  EXPECT_NEAR(es.spectrum[1], 1, 1e-14);

  sa::Operator diag = sa::Operator::Zero(3, 3);
  diag(0, 0) = 2;
  diag(1, 1) = -1;
  diag(2, 2) = 0.5;
  EXPECT_EQ(sa::eigendecompose(diag).spectrum.eigenvalues(), (std::vector<double>{-1, 0.5, 2}));

  sa::Rng rng(9);
  sa::Operator h(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) h(i, j) = Complex(rng.normal(), rng.normal());
  h = (h + h.adjoint()).eval();
  const auto e = sa::eigendecompose(h);
  sa::Vector lam(8);
  for (int i = 0; i < 8; ++i) lam(i) = e.spectrum[std::size_t(i)];
  EXPECT_LT((e.basis * lam.asDiagonal() * e.basis.adjoint() - h).norm(), 1e-8);

  sa::Operator nonherm = h;
  nonherm(0, 1) += 1.0;
  EXPECT_THROW(sa::eigendecompose(nonherm), std::invalid_argument);
}

TEST(StateJson, RoundTrip) {
  sa::Rng rng(2);
  const auto s = sa::random_state(rng, 5);
  const auto back = sa::pure_state_from_json(sa::to_json(s));
  EXPECT_EQ(back.amplitudes(), s.amplitudes());
  const sa::DensityOperator rho{s.projector()};
  EXPECT_EQ(sa::density_from_json(sa::to_json(rho)).matrix, rho.matrix);
  const auto j = sa::to_json(rho);
  EXPECT_EQ(j.at("entries").size(), 2u * 25u);  // interleaved re/im
}
