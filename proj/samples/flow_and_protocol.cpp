// Copyright 2026 The swapanneal Authors
// SPDX-License-Identifier: Apache-2.0

// Flows a uniform state toward the ground level and applies one
// forward/backward swap step to two copies of it.

#include <cmath>
#include <cstdio>

#include "swapanneal/swapanneal.hpp"

int main() {
  namespace sa = swapanneal;
  const auto spec = sa::build_model(sa::ModelKind::b, 16, 1.0);
  const auto phi0 = sa::uniform_state(16);

  const auto half = sa::find_time_for_p1(phi0, spec, 0.5, 0.01);
  std::printf("model b, dim 16: P1 reaches 0.5 at t = %.2f\n", half.time);
  for (double t : {0.0, 1.0, 2.0, 4.0, 8.0}) {
    const auto p = sa::ground_probability(sa::flow_exact(phi0, spec, t), spec);
    std::printf("  t = %4.1f  P1 = %.6f\n", t, p.p1);
  }

  const double dt = 0.1;
  const auto out = sa::apply_protocol(phi0, spec, dt);
  std::printf("protocol dt = %.2f: E0 = %.6f, E_a = %.6f, E_b = %.6f, drift = %.2e\n", dt,
              out.E0, out.E_a, out.E_b, std::abs(out.E_a + out.E_b - 2 * out.E0));
  return 0;
}
