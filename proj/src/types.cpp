// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockmpc/types.hpp"

#include <cmath>

#include "dockmpc/error.hpp"

namespace dockmpc {

namespace {
void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}
}  // namespace

RobotState::RobotState(double px, double py, double theta) {
  set_position(px, py);
  set_theta(theta);
}

void RobotState::set_position(double px, double py) {
  require_finite(px, "px");
  require_finite(py, "py");
  px_ = px;
  py_ = py;
}

void RobotState::set_theta(double theta) { theta_ = wrap_to_2pi(theta); }

ControlInput::ControlInput(double vx_, double vy_, double omega_) : vx(vx_), vy(vy_), omega(omega_) {
  require_finite(vx, "vx");
  require_finite(vy, "vy");
  require_finite(omega, "omega");
}

DockingInterface::DockingInterface(double delta_phi, double radius)
    : delta_phi_(delta_phi), radius_(radius) {
  require_finite(delta_phi, "delta_phi");
  if (delta_phi < -kPi || delta_phi >= kPi) {
    throw DomainError("delta_phi must lie in [-pi, pi)");
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("radius must be positive");
}

double docking_heading(const RobotState& s, const DockingInterface& d) {
  return wrap_to_2pi(s.theta() + d.delta_phi());
}

Point2 docking_point(const RobotState& s, const DockingInterface& d) {
  const double th = docking_heading(s, d);
  return {s.px() + d.radius() * std::cos(th), s.py() + d.radius() * std::sin(th)};
}

}  // namespace dockmpc
