// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

// Coupling residuals I-IV and the approach-corridor gate.
//
// Two families are provided. The exact forms operate on published states and
// use wrapped angle differences; they back the docking latch and the
// simulation-side checks. The smooth forms are templates over the scalar type
// and are what the optimizer differentiates:
//   axis      atan2 of the sin/cos of the heading/bearing difference
//   alignment 1 + cos(theta1_d - theta2_d), zero exactly at anti-parallel axes
//   off-axis  sqrt(axis^2 + eps^2), a rounded |axis| feeding the tanh gate

#pragma once

#include <cmath>

#include "dockmpc/types.hpp"

namespace dockmpc {

struct CouplingParams {
  double delta_r = 0.2;
  double r_ca = 0.4;
  double half_cone = deg2rad(15.0);
  double sharpness = 10.0;
  DockingInterface iface1{deg2rad(90.0), 0.1};
  DockingInterface iface2{deg2rad(-90.0), 0.1};
  /// Corridor inequality slack: the gate is enforced as value >= -corridor_tol.
  double corridor_tol = 1e-3;
  /// Inside-cone allowance of the optimizer's corridor row, and the center
  /// distance below which that allowance turns negative.
  double contact_allowance = 3e-3;
  double contact_min_distance = 0.18;
  /// Residual III as d^2 - delta_r (literal reading) instead of d^2 - delta_r^2.
  bool literal_distance = false;

  /// Throws DomainError when any field is out of range.
  void validate() const;
};

struct ResidualVector {
  double r_axis = 0.0;
  double r_align = 0.0;
  double r_dist = 0.0;
  double r_soft = 0.0;
};

inline constexpr double kCoincidenceGuard = 1e-9;
inline constexpr double kOffAxisRounding = 1e-5;
/// The corridor row is divided by this so its violations weigh against the
/// coupling cost; the feasible set is unchanged.
inline constexpr double kCorridorRowScale = 1e-3;

/// Bearing of robot 2 seen from robot 1, in [0, 2pi).
double bearing_angle(const CentralState& z);
double center_distance(const CentralState& z);

double residual_docking_axis(const CentralState& z, const CouplingParams& p);
double residual_alignment(const CentralState& z, const CouplingParams& p);
double residual_distance(const CentralState& z, const CouplingParams& p);
double residual_soft_docking(const CentralInput& nu);

/// Exact off-axis angle map_to_0_pi(theta1_d - phi12).
double off_axis_angle(const CentralState& z, const CouplingParams& p);

/// alpha_ca * alpha_ce / 2; feasible iff >= -corridor_tol.
double corridor_value(const CentralState& z, const CouplingParams& p);

ResidualVector residual_vector(const CentralState& z, const CentralInput& nu,
                               const CouplingParams& p);

namespace smooth {

using std::atan2;
using std::cos;
using std::sin;
using std::sqrt;
using std::tanh;

template <class T>
T axis(const PosePair<T>& z, const CouplingParams& p) {
  const T dx = z.r2.x - z.r1.x;
  const T dy = z.r2.y - z.r1.y;
  const T th = z.r1.theta + p.iface1.delta_phi();
  const T s = sin(th);
  const T c = cos(th);
  return atan2(s * dx - c * dy, c * dx + s * dy);
}

template <class T>
T alignment(const PosePair<T>& z, const CouplingParams& p) {
  const T diff = (z.r1.theta + p.iface1.delta_phi()) - (z.r2.theta + p.iface2.delta_phi());
  return 1.0 + cos(diff);
}

template <class T>
T distance(const PosePair<T>& z, const CouplingParams& p) {
  const T dx = z.r1.x - z.r2.x;
  const T dy = z.r1.y - z.r2.y;
  const double offset = p.literal_distance ? p.delta_r : p.delta_r * p.delta_r;
  return dx * dx + dy * dy - offset;
}

template <class T>
T soft_docking(const TwistPair<T>& nu) {
  const T ex = nu.r1.vx - nu.r2.vx;
  const T ey = nu.r1.vy - nu.r2.vy;
  return ex * ex + ey * ey;
}

template <class T>
T collision_term(const PosePair<T>& z, const CouplingParams& p) {
  const T dx = z.r1.x - z.r2.x;
  const T dy = z.r1.y - z.r2.y;
  return dx * dx + dy * dy - p.r_ca * p.r_ca;
}

/// Half the cone term: ~0 inside the corridor, ~1 outside.
template <class T>
T gate(const PosePair<T>& z, const CouplingParams& p) {
  const T a = axis(z, p);
  const T off = sqrt(a * a + kOffAxisRounding * kOffAxisRounding);
  return 0.5 * (1.0 + tanh(p.sharpness * (off - p.half_cone)));
}

template <class T>
T corridor(const PosePair<T>& z, const CouplingParams& p) {
  return collision_term(z, p) * gate(z, p);
}

/// Corridor row handed to the solver, required >= 0. Inside the cone the
/// keep-out term is relaxed by an allowance that shrinks with distance and
/// is negative below contact_min_distance, so robots cannot pass through each
/// other along the axis. The allowance is weighted by 1 - gate and bounded,
/// so outside the cone the keep-out disk is nearly exact.
template <class T>
T corridor_row(const PosePair<T>& z, const CouplingParams& p) {
  const T g = gate(z, p);
  const T dx = z.r1.x - z.r2.x;
  const T dy = z.r1.y - z.r2.y;
  const double m2 = p.contact_min_distance * p.contact_min_distance;
  const T u = (dx * dx + dy * dy - m2) / (p.delta_r * p.delta_r - m2);
  const T row = collision_term(z, p) * g + p.contact_allowance * (1.0 - g) * tanh(u);
  return row * (1.0 / kCorridorRowScale);
}

}  // namespace smooth

}  // namespace dockmpc
