// Copyright 2026 The swapanneal Authors
// SPDX-License-Identifier: Apache-2.0

#include <vector>

#include <gtest/gtest.h>

#include "swapanneal/coefficients.hpp"
#include "swapanneal/schedule.hpp"

namespace sa = swapanneal;

namespace {

std::vector<double> row(const sa::CoefficientMatrix& K, Eigen::Index j) {
  std::vector<double> out(static_cast<std::size_t>(K.k.cols()));
  for (Eigen::Index c = 0; c < K.k.cols(); ++c) out[std::size_t(c)] = K.k(j, c);
  return out;
}

}  // namespace

TEST(ImprovedSchedule, OnePair) {
  const auto s = sa::build_improved_schedule(1);
  EXPECT_EQ(s.step_star, 1u);
  ASSERT_EQ(s.pairs.size(), 1u);
  EXPECT_EQ(s.pairs[0], (std::vector<sa::Pair>{{0, 1, false}}));
  EXPECT_EQ(s.terminal_tau(), (std::vector<std::int64_t>{-1, 1}));
}

TEST(ImprovedSchedule, TwoPairs) {
  const auto s = sa::build_improved_schedule(2);
  EXPECT_EQ(s.step_star, 3u);
  ASSERT_EQ(s.pairs.size(), 3u);
  EXPECT_EQ(s.pairs[0], (std::vector<sa::Pair>{{0, 1, false}, {2, 3, false}}));
  EXPECT_EQ(s.pairs[1], (std::vector<sa::Pair>{{0, 2, false}, {1, 3, false}}));
  EXPECT_EQ(s.pairs[2], (std::vector<sa::Pair>{{1, 2, true}}));
  EXPECT_EQ(s.terminal_tau(), (std::vector<std::int64_t>{-2, -1, 1, 2}));
}

TEST(ImprovedSchedule, ValidUpTo256) {
  for (std::size_t m = 1; m <= 256; ++m) {
    const auto s = sa::build_improved_schedule(m);
    ASSERT_EQ(sa::validate(s), "") << "m=" << m;
    EXPECT_EQ(s.terminal_tau(), sa::expected_terminal_tau(m));
  }
}

TEST(ImprovedSchedule, StepStarIsQuadratic) {
  for (std::size_t m = 4; m <= 256; m *= 2) {
    const double r = double(sa::build_improved_schedule(m).step_star) / double(m * m);
    EXPECT_GT(r, 0.5) << m;
    EXPECT_LT(r, 1.0) << m;
  }
}

TEST(ImprovedSchedule, RejectsZero) {
  EXPECT_THROW(sa::build_improved_schedule(0), std::invalid_argument);
}

TEST(Validate, DetectsCorruption) {
  auto s = sa::build_improved_schedule(3);
  s.pairs[1][0].fresh = !s.pairs[1][0].fresh;
  EXPECT_NE(sa::validate(s), "");
  auto t = sa::build_improved_schedule(3);
  t.tau.back()[0] += 1;
  EXPECT_NE(sa::validate(t), "");
}

TEST(TournamentSchedule, Structure) {
  const auto s = sa::build_tournament_schedule(4);
  EXPECT_EQ(s.systems(), 16u);
  EXPECT_EQ(s.step_star, 4u);
  EXPECT_EQ(s.terminal_tau().back(), 4);
  EXPECT_EQ(sa::validate(s), "");
  for (const auto& step : s.pairs)
    for (const auto& p : step) EXPECT_FALSE(p.fresh);
  const auto one = sa::build_tournament_schedule(1);
  const auto imp = sa::build_improved_schedule(1);
  EXPECT_EQ(one.pairs, imp.pairs);
  EXPECT_EQ(one.tau, imp.tau);
}

TEST(ScheduleJson, RoundTrip) {
  const auto s = sa::build_improved_schedule(5);
  const auto j = sa::to_json(s);
  EXPECT_EQ(j["pairs"][0][0]["j"], 1);
  const auto back = sa::schedule_from_json(j);
  EXPECT_EQ(back.tau, s.tau);
  EXPECT_EQ(back.pairs, s.pairs);
  EXPECT_EQ(back.step_star, s.step_star);
}

TEST(Coefficients, SmallNetworks) {
  const auto k2 = sa::propagate_coefficients(sa::build_improved_schedule(1));
  EXPECT_EQ(row(k2, 0), (std::vector<double>{0, 1, 0}));
  EXPECT_EQ(row(k2, 1), (std::vector<double>{0, 1, 0}));
  const auto k4 = sa::propagate_coefficients(sa::build_improved_schedule(2));
  EXPECT_EQ(row(k4, 3), (std::vector<double>{0, 0, 1, 1, 0}));
  EXPECT_EQ(row(k4, 0), (std::vector<double>{0, 1, 1, 0, 0}));
}

TEST(Coefficients, TournamentUnitRows) {
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto s = sa::build_tournament_schedule(n);
    const auto K = sa::propagate_coefficients(s);
    for (std::int64_t kp = -std::int64_t(s.m); kp <= std::int64_t(s.m); ++kp)
      EXPECT_EQ(K.k(K.k.rows() - 1, K.column(kp)), kp >= 0 && kp < std::int64_t(n) ? 1.0 : 0.0)
          << n << " " << kp;
  }
}

TEST(Coefficients, NonNegativeAndPairedRowsEqual) {
  const auto s = sa::build_improved_schedule(12);
  const auto K = sa::propagate_coefficients(s);
  EXPECT_GE(K.k.minCoeff(), 0.0);
  // the last pair of the schedule leaves its two rows identical
  const auto& last = s.pairs.back().back();
  EXPECT_EQ(K.k.row(Eigen::Index(last.low)), K.k.row(Eigen::Index(last.high)));
}

TEST(Coefficients, CsvAndJsonRoundTrip) {
  const auto K = sa::propagate_coefficients(sa::build_improved_schedule(6));
  const auto csv = sa::to_csv(K);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "j,k1,k2,k3,k4,k5,k6,k7,k8,k9,k10,k11,k12,k13");
  const auto back = sa::coefficients_from_csv(csv);
  EXPECT_EQ(back.m, K.m);
  EXPECT_EQ(back.k, K.k);
  EXPECT_EQ(sa::to_json(K)["m"], 6);
}

TEST(ScalingLaw, IdentityHasZeroDeviation) {
  const auto K = sa::propagate_coefficients(sa::build_improved_schedule(16));
  const auto r = sa::check_scaling_law(K, K, 1);
  EXPECT_EQ(r.median_rel_dev, 0.0);
  EXPECT_EQ(r.max_rel_dev, 0.0);
  EXPECT_EQ(r.sections.size(), 8u);
}

TEST(ScalingLaw, ShapeMismatch) {
  const auto a = sa::propagate_coefficients(sa::build_improved_schedule(4));
  const auto b = sa::propagate_coefficients(sa::build_improved_schedule(6));
  EXPECT_THROW(sa::check_scaling_law(a, b, 2), std::invalid_argument);
}

TEST(ScalingLaw, SixteenVersusThirtyTwo) {
  const auto a = sa::propagate_coefficients(sa::build_improved_schedule(16));
  const auto b = sa::propagate_coefficients(sa::build_improved_schedule(32));
  const auto r = sa::check_scaling_law(a, b, 2);
  EXPECT_LT(r.median_rel_dev, 0.10);
  EXPECT_GT(r.compared, 100u);
}

TEST(RescaledRow, IdentityAndLength) {
  const auto K = sa::propagate_coefficients(sa::build_improved_schedule(8));
  const auto same = sa::rescaled_last_row(K, 8);
  EXPECT_LT((same - K.last_row()).norm(), 1e-15);
  EXPECT_EQ(sa::rescaled_last_row(K, 3).size(), 7);
  EXPECT_EQ(sa::rescaled_last_row(K, 20).size(), 41);
}
