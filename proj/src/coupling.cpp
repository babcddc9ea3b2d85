// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockmpc/coupling.hpp"

#include <cmath>

#include "dockmpc/error.hpp"

namespace dockmpc {

void CouplingParams::validate() const {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(delta_r)) throw DomainError("delta_r must be positive");
  if (!positive(r_ca)) throw DomainError("r_ca must be positive");
  if (r_ca < delta_r) throw DomainError("r_ca must not be smaller than delta_r");
  if (!positive(half_cone) || half_cone >= kPi / 2.0) {
    throw DomainError("half_cone must lie in (0, pi/2)");
  }
  if (!positive(sharpness)) throw DomainError("sharpness must be positive");
  if (!(corridor_tol >= 0.0) || !std::isfinite(corridor_tol)) {
    throw DomainError("corridor_tol must be nonnegative");
  }
  if (!(contact_allowance >= 0.0) || !std::isfinite(contact_allowance)) {
    throw DomainError("contact_allowance must be nonnegative");
  }
  if (!(contact_min_distance >= 0.0) || !(contact_min_distance < delta_r)) {
    throw DomainError("contact_min_distance must lie in [0, delta_r)");
  }
}

double center_distance(const CentralState& z) {
  return std::hypot(z.robot2.px() - z.robot1.px(), z.robot2.py() - z.robot1.py());
}

double bearing_angle(const CentralState& z) {
  if (center_distance(z) < kCoincidenceGuard) {
    throw CoincidentRobotsError("bearing undefined for coincident robots");
  }
  return wrap_to_2pi(std::atan2(z.robot2.py() - z.robot1.py(), z.robot2.px() - z.robot1.px()));
}

double residual_docking_axis(const CentralState& z, const CouplingParams& p) {
  return wrap_to_pm_pi(docking_heading(z.robot1, p.iface1) - bearing_angle(z));
}

double residual_alignment(const CentralState& z, const CouplingParams& p) {
  return map_to_0_pi(docking_heading(z.robot1, p.iface1) - docking_heading(z.robot2, p.iface2)) -
         kPi;
}

double residual_distance(const CentralState& z, const CouplingParams& p) {
  return smooth::distance(z.poses(), p);
}

double residual_soft_docking(const CentralInput& nu) { return smooth::soft_docking(nu.twists()); }

double off_axis_angle(const CentralState& z, const CouplingParams& p) {
  return map_to_0_pi(docking_heading(z.robot1, p.iface1) - bearing_angle(z));
}

double corridor_value(const CentralState& z, const CouplingParams& p) {
  const double alpha_ca = smooth::collision_term(z.poses(), p);
  const double alpha_ce = 1.0 + std::tanh(p.sharpness * (off_axis_angle(z, p) - p.half_cone));
  return alpha_ca * 0.5 * alpha_ce;
}

ResidualVector residual_vector(const CentralState& z, const CentralInput& nu,
                               const CouplingParams& p) {
  return {residual_docking_axis(z, p), residual_alignment(z, p), residual_distance(z, p),
          residual_soft_docking(nu)};
}

}  // namespace dockmpc
