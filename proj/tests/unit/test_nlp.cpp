// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>
#include <vector>

#include "dockmpc/autodiff.hpp"
#include "dockmpc/error.hpp"
#include "dockmpc/gradcheck.hpp"
#include "dockmpc/nlp.hpp"
#include "doctest.h"

using namespace dockmpc;

namespace {

CentralState docked() { return {{1, 1, 0}, {1, 1.2, 0}}; }

NlpProblem docked_problem(int horizon = 20) {
  ProblemParams p;
  p.horizon = horizon;
  p.caps = SlackCaps::docked();
  return build_problem(docked(), {docked()}, p, {});
}

}  // namespace

TEST_SUITE("nlp") {
  TEST_CASE("layout for the default horizon") {
    const auto p = docked_problem();
    CHECK(p.dimension() == 120);
    CHECK(p.num_constraints() == 100);
    int corridor = 0, two_sided = 0;
    for (std::size_t r = 0; r < p.num_constraints(); ++r) {
      const bool lo = std::isfinite(p.constraint_lower()[r]);
      const bool hi = std::isfinite(p.constraint_upper()[r]);
      if (lo && !hi) ++corridor;
      if (lo && hi) ++two_sided;
    }
    CHECK(corridor == 20);
    CHECK(two_sided == 80);
    CHECK(p.cap_row(0, 0) == 20);
    CHECK(p.cap_row(19, 3) == 99);
    for (std::size_t i = 0; i < p.dimension(); ++i) {
      CHECK(p.lower()[i] == -p.upper()[i]);
    }
  }

  TEST_CASE("docked fixed point is feasible with zero objective") {
    const auto p = docked_problem();
    const std::vector<double> x(p.dimension(), 0.0);
    const auto obj = eval_objective(p, x);
    CHECK(obj.value == doctest::Approx(0.0).epsilon(1e-12));
    const auto con = eval_constraints(p, x);
    for (std::size_t r = 0; r < p.num_constraints(); ++r) {
      CHECK(con.values[r] >= p.constraint_lower()[r]);
      CHECK(con.values[r] <= p.constraint_upper()[r]);
    }
    double gmax = 0.0;
    for (double g : obj.gradient) gmax = std::max(gmax, std::abs(g));
    CHECK(gmax < 1e-9);
  }

  TEST_CASE("moving together along the axis stays feasible") {
    ProblemParams pp;
    pp.caps = SlackCaps::docked();
    const CentralState z = docked();
    const CentralState goal{{1, 3, 0}, {1, 3.2, 0}};
    const auto p = build_problem(z, {goal}, pp, {});
    std::vector<CentralInput> in(20, CentralInput{{0, 0.4, 0}, {0, 0.4, 0}});
    const auto x = p.pack(in);
    const auto con = eval_constraints(p, x);
    for (std::size_t r = 0; r < p.num_constraints(); ++r) {
      CHECK(con.values[r] >= p.constraint_lower()[r]);
      CHECK(con.values[r] <= p.constraint_upper()[r]);
    }
  }

  TEST_CASE("pack, unpack and predict") {
    const auto p = docked_problem(5);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> x(p.dimension());
    for (double& v : x) v = u(rng);
    const auto in = p.unpack(x);
    CHECK(p.pack(in) == x);
    const auto traj = p.predict(x);
    REQUIRE(traj.size() == 5);
    double px = docked().robot1.px();
    for (std::size_t k = 0; k < 5; ++k) px += 0.25 * x[6 * k];
    CHECK(traj.back().r1.x == doctest::Approx(px));
  }

  TEST_CASE("inactive robot is pinned") {
    ProblemParams pp;
    pp.horizon = 5;
    pp.robot_active = {true, false};
    const auto p = build_problem(docked(), {docked()}, pp, {});
    for (std::size_t k = 0; k < 5; ++k) {
      for (std::size_t j = 3; j < 6; ++j) {
        CHECK(p.lower()[6 * k + j] == 0.0);
        CHECK(p.upper()[6 * k + j] == 0.0);
      }
    }
  }

  TEST_CASE("AD gradients and Jacobians match central differences") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
      const auto inst = random_instance(rng, trial % 2 ? 20 : 5);
      REQUIRE(check_gradient(inst.problem, inst.x, 1e-6) < 1e-6);
      REQUIRE(check_jacobian(inst.problem, inst.x, 1e-6) < 1e-6);
    }
  }

  TEST_CASE("forward and reverse mode agree") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
      const auto inst = random_instance(rng, 5);
      const auto& p = inst.problem;
      std::vector<double> fwd(p.dimension());
      const double fv = ad::gradient(
          [&](std::span<const ad::D> xd) { return p.objective<ad::D>(xd); }, inst.x, fwd);
      const auto rev = eval_objective(p, inst.x);
      REQUIRE(fv == doctest::Approx(rev.value).epsilon(1e-13));
      for (std::size_t i = 0; i < fwd.size(); ++i) {
        REQUIRE(std::abs(fwd[i] - rev.gradient[i]) <= 1e-9 * (1.0 + std::abs(fwd[i])));
      }
    }
  }

  TEST_CASE("finite-difference error grows with the step") {
    std::mt19937_64 rng(5);
    const auto inst = random_instance(rng, 5);
    CHECK(check_gradient(inst.problem, inst.x, 1.0) > check_gradient(inst.problem, inst.x, 1e-5));
  }

  TEST_CASE("evaluation is deterministic") {
    std::mt19937_64 rng(6);
    const auto inst = random_instance(rng, 20);
    const auto a = eval_objective(inst.problem, inst.x);
    const auto b = eval_objective(inst.problem, inst.x);
    CHECK(a.value == b.value);
    CHECK(a.gradient == b.gradient);
    const auto ca = eval_constraints(inst.problem, inst.x);
    const auto cb = eval_constraints(inst.problem, inst.x);
    CHECK(ca.values == cb.values);
    CHECK(ca.jacobian == cb.jacobian);
  }

  TEST_CASE("non-finite input raises a numeric error") {
    const auto p = docked_problem(5);
    std::vector<double> x(p.dimension(), 0.0);
    x[7] = std::nan("");
    CHECK_THROWS_AS(eval_objective(p, x), NumericError);
    CHECK_THROWS_AS(eval_objective(p, std::vector<double>(3, 0.0)), DomainError);
  }

  TEST_CASE("warm start shift") {
    std::vector<double> prev(18);
    for (std::size_t i = 0; i < prev.size(); ++i) prev[i] = static_cast<double>(i);
    const auto s = shift_warm_start(prev, 3);
    REQUIRE(s.size() == 18);
    for (std::size_t i = 0; i < 12; ++i) CHECK(s[i] == prev[i + 6]);
    for (std::size_t i = 12; i < 18; ++i) CHECK(s[i] == prev[i]);
  }

  TEST_CASE("parameter validation") {
    ProblemParams pp;
    pp.horizon = 0;
    CHECK_THROWS_AS(build_problem(docked(), {docked()}, pp, {}), DomainError);
    pp = {};
    pp.bounds.v_max = -1.0;
    CHECK_THROWS_AS(build_problem(docked(), {docked()}, pp, {}), DomainError);
    SlackCaps caps;
    caps.eps[1] = -0.1;
    CHECK_THROWS_AS(caps.validate(), DomainError);
  }

  TEST_CASE("gradient check campaign") {
    const auto rep = run_gradient_checks(40, 3);
    CHECK(rep.trials == 40);
    CHECK(rep.max_gradient_error < 1e-6);
    CHECK(rep.max_jacobian_error < 1e-6);
  }
}
