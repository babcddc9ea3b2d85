// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "dockmpc/types.hpp"

namespace dockmpc {

/// Integration step duration in seconds, strictly positive.
class TimeStep {
 public:
  explicit TimeStep(double dt);
  double dt() const { return dt_; }

 private:
  double dt_;
};

/// Euler-forward step of one omnidirectional robot. Publishes a wrapped heading.
RobotState step_single(const RobotState& x, const ControlInput& u, TimeStep dt);

CentralState step_central(const CentralState& z, const CentralInput& nu, TimeStep dt);

/// Rolls the stacked integrator forward over the input sequence; element k is
/// the state after k+1 steps. Headings stay unwrapped. Throws on empty input.
std::vector<PosePair<double>> rollout(const CentralState& z0, std::span<const CentralInput> inputs,
                                      TimeStep dt);

// Generic one-step integrator on raw records, used by the evaluators.
template <class T>
inline PosePair<T> integrate(const PosePair<T>& z, const TwistPair<T>& nu, double dt) {
  return {{z.r1.x + dt * nu.r1.vx, z.r1.y + dt * nu.r1.vy, z.r1.theta + dt * nu.r1.omega},
          {z.r2.x + dt * nu.r2.vx, z.r2.y + dt * nu.r2.vy, z.r2.theta + dt * nu.r2.omega}};
}

}  // namespace dockmpc
