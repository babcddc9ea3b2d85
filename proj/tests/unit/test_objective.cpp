// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <random>
#include <vector>

#include "dockmpc/error.hpp"
#include "dockmpc/objective.hpp"
#include "doctest.h"

using namespace dockmpc;

TEST_SUITE("objective") {
  TEST_CASE("coupling cost examples") {
    const WeightVector w;
    std::vector<ResidualVector> zero(5);
    CHECK(coupling_cost(zero, w) == 0.0);
    const std::vector<ResidualVector> one{{1, 1, 1, 1}};
    CHECK(coupling_cost(one, w) == doctest::Approx(1231.0));
  }

  TEST_CASE("coupling cost ignores time order") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-2, 2);
    std::vector<ResidualVector> s(12);
    for (auto& r : s) r = {u(rng), u(rng), u(rng), u(rng)};
    const double before = coupling_cost(s, WeightVector{});
    std::shuffle(s.begin(), s.end(), rng);
    CHECK(coupling_cost(s, WeightVector{}) == doctest::Approx(before).epsilon(1e-14));
  }

  TEST_CASE("smoothing cost examples") {
    const WeightVector w;
    const TimeStep dt(0.25);
    const CentralInput c{{0.3, -0.2, 0.1}, {0.5, 0.0, -0.4}};
    std::vector<CentralInput> constant(6, c);
    CHECK(input_smoothing_cost(constant, {c, c}, w, dt) == doctest::Approx(0.0));

    // Linear ramp in vx: second differences vanish.
    std::vector<CentralInput> ramp;
    for (int k = 0; k < 6; ++k) ramp.push_back({{0.1 * (k + 2), 0, 0}, {}});
    const InputHistory hist{{{0.0, 0, 0}, {}}, {{0.1, 0, 0}, {}}};
    CHECK(input_smoothing_cost(ramp, hist, w, dt) == doctest::Approx(0.0).epsilon(1e-12));

    // omega = (0, 1, 0, ...) for robot 1 only.
    std::vector<CentralInput> spin(6);
    spin[1].robot1.omega = 1.0;
    CHECK(input_smoothing_cost(spin, {}, w, dt) == doctest::Approx(32.0));
  }

  TEST_CASE("terminal cost examples") {
    const TerminalWeights tw;
    const CentralState goal{{4, 0, 0}, {4, 0.2, 0}};
    CHECK(terminal_cost(goal, {goal}, tw) == 0.0);
    const CentralState off{{4, 0, 1.0}, {4, 0.2, 0}};
    CHECK(terminal_cost(off, {goal}, tw) == doctest::Approx(200.0));
    const PosePair<double> g = goal.poses();
    PosePair<double> spun = g;
    spun.r1.theta += kTwoPi;
    CHECK(cost_terms::terminal(spun, g, tw) == doctest::Approx(0.0).scale(1.0));
  }

  TEST_CASE("terminal cost is periodic in the goal heading") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-3, 3);
    const TerminalWeights tw;
    for (int i = 0; i < 1000; ++i) {
      const PosePair<double> z{{u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)}};
      PosePair<double> g{{u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)}};
      const double base = cost_terms::terminal(z, g, tw);
      g.r2.theta += kTwoPi;
      REQUIRE(cost_terms::terminal(z, g, tw) == doctest::Approx(base).epsilon(1e-9));
    }
  }

  TEST_CASE("total cost composes its parts and is nonnegative") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-1, 1);
    const WeightVector w;
    const TerminalWeights tw;
    const TimeStep dt(0.25);
    for (int i = 0; i < 200; ++i) {
      std::vector<ResidualVector> s(4);
      std::vector<CentralInput> in(4);
      for (auto& r : s) r = {u(rng), u(rng), u(rng), u(rng)};
      for (auto& v : in) v = {{u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)}};
      const CentralState zN{{u(rng), u(rng), 1}, {u(rng), u(rng), 2}};
      const GoalState goal{{{u(rng), u(rng), 0}, {u(rng), u(rng), 3}}};
      const auto c = total_cost(s, in, {}, zN, goal, w, tw, dt);
      REQUIRE(c.total() >= 0.0);
      REQUIRE(c.coupling == doctest::Approx(coupling_cost(s, w)));
      REQUIRE(c.smoothing == doctest::Approx(input_smoothing_cost(in, {}, w, dt)));
      REQUIRE(c.terminal == doctest::Approx(terminal_cost(zN, goal, tw)));
    }
    std::vector<ResidualVector> s(3);
    std::vector<CentralInput> in(3);
    const CentralState z{{1, 2, 3}, {4, 5, 6}};
    CHECK(total_cost(s, in, {}, z, {z}, w, tw, dt).total() == 0.0);
  }

  TEST_CASE("weight validation") {
    WeightVector w;
    w.lambda_dr = -1.0;
    CHECK_THROWS_AS(w.validate(), DomainError);
    TerminalWeights tw;
    tw.w[2] = std::nan("");
    CHECK_THROWS_AS(tw.validate(), DomainError);
    const WeightVector nc = WeightVector{}.without_coupling();
    CHECK(nc.lambda_dtheta == 0.0);
    CHECK(nc.lambda_j == doctest::Approx(0.1));
  }
}
