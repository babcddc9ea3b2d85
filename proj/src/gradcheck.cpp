// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockmpc/gradcheck.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "dockmpc/angles.hpp"
#include "dockmpc/coupling.hpp"

namespace dockmpc {

double branch_cut_margin(const NlpProblem& p, std::span<const double> x) {
  const auto& cp = p.params().coupling;
  double margin = kPi;
  const auto states = p.predict(x);
  for (const auto& z : states) {
    margin = std::min(margin, kPi - std::abs(smooth::axis(z, cp)));
  }
  const auto& last = states.back();
  const auto& g = p.goal().target;
  for (double e : {last.r1.theta - g.robot1.theta(), last.r2.theta - g.robot2.theta()}) {
    margin = std::min(margin, kPi - std::abs(std::atan2(std::sin(e), std::cos(e))));
  }
  return margin;
}

RandomInstance random_instance(std::mt19937_64& rng, int horizon, double cut_margin) {
  std::uniform_real_distribution<double> pos(-3.0, 3.0);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, 2);

  for (;;) {
    ProblemParams pp;
    pp.horizon = horizon;
    pp.collision = static_cast<CollisionMode>(pick(rng));
    const int caps = pick(rng);
    pp.caps = caps == 0 ? SlackCaps::approach() : caps == 1 ? SlackCaps::docked() : SlackCaps::unbounded();
    pp.coupling.literal_distance = unit(rng) < 0.25;
    if (unit(rng) < 0.2) pp.weights = pp.weights.without_coupling();

    CentralState z0{{pos(rng), pos(rng), ang(rng)}, {pos(rng), pos(rng), ang(rng)}};
    if (center_distance(z0) < 0.05) continue;
    // Occasionally start near contact so the gate and caps are exercised.
    if (unit(rng) < 0.3) {
      const double th = ang(rng), r = 0.15 + 0.4 * unit(rng);
      z0.robot2.set_position(z0.robot1.px() + r * std::cos(th), z0.robot1.py() + r * std::sin(th));
    }
    const GoalState goal{{{pos(rng), pos(rng), ang(rng)}, {pos(rng), pos(rng), ang(rng)}}};
    auto input = [&] {
      return ControlInput(pp.bounds.v_max * (2 * unit(rng) - 1), pp.bounds.v_max * (2 * unit(rng) - 1),
                          pp.bounds.omega_max * (2 * unit(rng) - 1));
    };
    const InputHistory hist{{input(), input()}, {input(), input()}};

    NlpProblem p = build_problem(z0, goal, pp, hist);
    std::vector<double> x(p.dimension());
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = p.lower()[i] + (p.upper()[i] - p.lower()[i]) * unit(rng);
    }
    if (branch_cut_margin(p, x) < cut_margin) continue;
    return {std::move(p), std::move(x)};
  }
}

GradientCheckReport run_gradient_checks(int trials, std::uint64_t seed, double h) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(seed);
  GradientCheckReport rep;
  for (int i = 0; i < trials; ++i) {
    const auto inst = random_instance(rng, i % 2 == 0 ? 5 : 20);
    rep.max_gradient_error = std::max(rep.max_gradient_error, check_gradient(inst.problem, inst.x, h));
    rep.max_jacobian_error = std::max(rep.max_jacobian_error, check_jacobian(inst.problem, inst.x, h));
    ++rep.trials;
  }
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace dockmpc
