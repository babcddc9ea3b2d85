// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "dockmpc/error.hpp"
#include "dockmpc/nlp.hpp"
#include "dockmpc/scenario.hpp"
#include "dockmpc/solver.hpp"
#include "doctest.h"
#include "solver_oracles.hpp"

using namespace dockmpc;

using oracle::bowl;
using oracle::HalfLine;

TEST_SUITE("solver") {
  TEST_CASE("unconstrained quadratic matches the closed form") {
    const auto q = oracle::quadratic_oracle();
    REQUIRE(q.interior);
    CHECK(q.status == SolveStatus::Converged);
    CHECK(q.max_error < 1e-6);
  }

  TEST_CASE("textbook inequality x >= 1") {
    const auto res = solve(HalfLine{}, {3.0}, oracle::tight_settings());
    CHECK(res.status == SolveStatus::Converged);
    CHECK(res.x[0] == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(res.multipliers[0] == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(res.complementarity <= 1e-3);
  }

  TEST_CASE("bowl with inactive box") {
    const std::vector<double> c{0.3, -0.2, 0.5, 0.1, -0.4, 0.0, 0.25, -0.1};
    const std::vector<double> lo(8, -1.0), hi(8, 1.0);
    SolverSettings s;
    const auto r = inner_minimize(bowl(c), lo, hi, std::vector<double>(8, 0.9), s, 1e-12);
    CHECK(r.iterations < 50);
    CHECK(r.monotone);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::abs(r.x[i] - c[i]) < 1e-8);
  }

  TEST_CASE("bowl centered outside the box lands on the face") {
    const std::vector<double> c{2.0, 0.3, -3.0};
    const std::vector<double> lo(3, -1.0), hi(3, 1.0);
    const auto r = inner_minimize(bowl(c), lo, hi, {0.0, 0.0, 0.0}, SolverSettings{}, 1e-10);
    CHECK(r.converged);
    CHECK(r.x[0] == 1.0);
    CHECK(r.x[1] == doctest::Approx(0.3).epsilon(1e-8));
    CHECK(r.x[2] == -1.0);
  }

  TEST_CASE("Rosenbrock") {
    const ValueGrad rosen = oracle::rosenbrock;
    const std::vector<double> lo(2, -5.0), hi(2, 5.0);
    SolverSettings s;
    const auto r = inner_minimize(rosen, lo, hi, {-1.2, 1.0}, s, 1e-10);
    std::vector<double> g(2);
    CHECK(rosen(r.x, g) < 1e-6);
    CHECK(r.iterations <= s.max_inner);
    CHECK(r.monotone);
  }

  TEST_CASE("docking instance from a contact-adjacent start converges") {
    ProblemParams pp;
    pp.horizon = 5;
    const CentralState z0{{0, 0, 0}, {0, 0.26, 0}};
    const CentralState goal{{0.5, 0, 0}, {0.5, 0.2, 0}};
    const auto p = build_problem(z0, {goal}, pp, {});
    const auto res = solve(p, std::vector<double>(p.dimension(), 0.0), SolverSettings{});
    CHECK(res.status == SolveStatus::Converged);
    CHECK(res.max_violation <= 1e-4);
    CHECK(res.complementarity <= 1e-3);
    CHECK(res.monotone);
  }

  TEST_CASE("outer violation decreases on the first experiment instance") {
    const ScenarioConfig cfg = preset("exp1");
    ProblemParams pp;
    pp.coupling = cfg.coupling;
    pp.weights = cfg.weights;
    pp.terminal = cfg.terminal;
    pp.caps = cfg.caps;
    const CentralState goal{{4, 0, 0}, {4, 0.2, 0}};
    const auto p = build_problem(cfg.initial, {goal}, pp, {});
    const auto res = solve(p, std::vector<double>(p.dimension(), 0.0), cfg.solver);
    CHECK(res.status == SolveStatus::Converged);
    for (std::size_t i = 1; i < res.violation_history.size(); ++i) {
      CHECK(res.violation_history[i] <=
            1.1 * res.violation_history[i - 1] + cfg.solver.constraint_tol);
    }
  }

  TEST_CASE("identical solves are bit-identical") {
    ProblemParams pp;
    pp.horizon = 8;
    const CentralState z0{{0, -1, 0.3}, {0.5, 1, 0.2}};
    const CentralState goal{{2, 0, 0}, {2, 0.2, 0}};
    const auto p = build_problem(z0, {goal}, pp, {});
    const std::vector<double> x0(p.dimension(), 0.1);
    const auto a = solve(p, x0, SolverSettings{});
    const auto b = solve(p, x0, SolverSettings{});
    CHECK(a.x == b.x);
    CHECK(a.multipliers == b.multipliers);
    CHECK(a.objective == b.objective);
    CHECK(a.status == b.status);
    CHECK(a.inner_iterations == b.inner_iterations);
  }

  TEST_CASE("settings validation") {
    SolverSettings s;
    s.mu_growth = 1.0;
    CHECK_THROWS_AS(s.validate(), DomainError);
    s = {};
    s.armijo = 1.5;
    CHECK_THROWS_AS(s.validate(), DomainError);
    CHECK(to_string(SolveStatus::InfeasibleStall) == "infeasible_stall");
  }
}
