// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockmpc/dynamics.hpp"

#include <cmath>

#include "dockmpc/error.hpp"

namespace dockmpc {

TimeStep::TimeStep(double dt) : dt_(dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("time step must be positive and finite");
}

RobotState step_single(const RobotState& x, const ControlInput& u, TimeStep dt) {
  const double h = dt.dt();
  return {x.px() + h * u.vx, x.py() + h * u.vy, x.theta() + h * u.omega};
}

CentralState step_central(const CentralState& z, const CentralInput& nu, TimeStep dt) {
  return {step_single(z.robot1, nu.robot1, dt), step_single(z.robot2, nu.robot2, dt)};
}

std::vector<PosePair<double>> rollout(const CentralState& z0, std::span<const CentralInput> inputs,
                                      TimeStep dt) {
  if (inputs.empty()) throw DomainError("rollout: empty input sequence");
  std::vector<PosePair<double>> out;
  out.reserve(inputs.size());
  PosePair<double> z = z0.poses();
  for (const auto& nu : inputs) {
    z = integrate(z, nu.twists(), dt.dt());
    out.push_back(z);
  }
  return out;
}

}  // namespace dockmpc
