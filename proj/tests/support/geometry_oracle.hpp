// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

// Independent vector-geometry checker for the exact coupling residuals.
//
// Every quantity is rebuilt from unit vectors, dot and cross products rather
// than from heading arithmetic and wrapping, so agreement with the library is
// a meaningful cross-check.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "dockmpc/coupling.hpp"

namespace oracle {

struct Vec {
  double x = 0.0;
  double y = 0.0;
};

inline Vec unit(double a) { return {std::cos(a), std::sin(a)}; }
inline double dot(Vec a, Vec b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec a, Vec b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec a) { return std::sqrt(dot(a, a)); }
/// Unsigned angle between two vectors, in [0, pi].
inline double angle_between(Vec a, Vec b) { return std::atan2(std::abs(cross(a, b)), dot(a, b)); }

struct Geometry {
  Vec axis1;    // docking-axis direction of robot 1
  Vec axis2;    // docking-axis direction of robot 2
  Vec bearing;  // robot 1 to robot 2
  double distance = 0.0;
  Vec rel_vel;
};

inline Geometry geometry(const dockmpc::CentralState& z, const dockmpc::CentralInput& nu,
                         const dockmpc::CouplingParams& p) {
  Geometry g;
  // Interface offsets enter as rotations of the heading vector.
  const Vec h1 = unit(z.robot1.theta());
  const Vec h2 = unit(z.robot2.theta());
  const Vec o1 = unit(p.iface1.delta_phi());
  const Vec o2 = unit(p.iface2.delta_phi());
  g.axis1 = {h1.x * o1.x - h1.y * o1.y, h1.x * o1.y + h1.y * o1.x};
  g.axis2 = {h2.x * o2.x - h2.y * o2.y, h2.x * o2.y + h2.y * o2.x};
  const Vec d{z.robot2.px() - z.robot1.px(), z.robot2.py() - z.robot1.py()};
  g.distance = norm(d);
  g.bearing = {d.x / g.distance, d.y / g.distance};
  g.rel_vel = {nu.robot1.vx - nu.robot2.vx, nu.robot1.vy - nu.robot2.vy};
  return g;
}

/// Docking definition: the axis of robot 1 points at robot 2, the interfaces
/// face each other, centers touch and the relative velocity vanishes.
inline bool docked(const Geometry& g, const dockmpc::CouplingParams& p, double tol) {
  return angle_between(g.axis1, g.bearing) <= tol &&
         angle_between(g.axis1, Vec{-g.axis2.x, -g.axis2.y}) <= tol &&
         std::abs(g.distance - p.delta_r) <= tol && norm(g.rel_vel) <= tol;
}

struct EquivalenceReport {
  int cases = 0;
  int sign_mismatches = 0;
  int zero_set_mismatches = 0;
  int magnitude_mismatches = 0;
  int docked_cases = 0;
  /// Largest |argmin of the smooth alignment surrogate - exact root| [rad].
  double surrogate_root_error = 0.0;
};

inline int sign_of(double v, double band) { return v > band ? 1 : (v < -band ? -1 : 0); }

/// Samples `cases` configurations: a quarter exactly docked, a quarter small
/// perturbations of docked states, the rest uniform. Compares signs, zero sets
/// and magnitudes of the exact residuals with the vector checker.
inline EquivalenceReport check_residuals(int cases, std::uint64_t seed) {
  using namespace dockmpc;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-5.0, 5.0), ang(0.0, kTwoPi), off(-kPi, kPi);
  std::uniform_real_distribution<double> vel(-1.0, 1.0), tiny(-1e-3, 1e-3);
  std::uniform_int_distribution<int> kind(0, 3);
  const double zero_tol = 1e-9;
  EquivalenceReport rep;
  for (int i = 0; i < cases; ++i) {
    CouplingParams p;
    p.iface1 = DockingInterface(off(rng), 0.1);
    p.iface2 = DockingInterface(off(rng), 0.1);
    const int k = kind(rng);
    CentralState z;
    CentralInput nu;
    const double x = pos(rng), y = pos(rng), th1 = ang(rng);
    if (k <= 1) {
      // Construct the docked partner: robot 2 on the axis at delta_r, its axis reversed.
      const double a1 = th1 + p.iface1.delta_phi();
      const double th2 = a1 + kPi - p.iface2.delta_phi();
      z = {{x, y, th1}, {x + p.delta_r * std::cos(a1), y + p.delta_r * std::sin(a1), th2}};
      const ControlInput v{vel(rng), vel(rng), vel(rng)};
      nu = {v, {v.vx, v.vy, vel(rng)}};
      if (k == 1) {
        z.robot2.set_position(z.robot2.px() + tiny(rng), z.robot2.py() + tiny(rng));
        z.robot2.set_theta(z.robot2.theta() + tiny(rng));
        nu.robot2.vx += tiny(rng);
      }
    } else {
      z = {{x, y, th1}, {pos(rng), pos(rng), ang(rng)}};
      nu = {{vel(rng), vel(rng), vel(rng)}, {vel(rng), vel(rng), vel(rng)}};
    }
    if (center_distance(z) < 1e-6) continue;
    ++rep.cases;
    const Geometry g = geometry(z, nu, p);
    const ResidualVector r = residual_vector(z, nu, p);

    // Residual I: signed angle from the bearing to the axis.
    const double ax_mag = angle_between(g.bearing, g.axis1);
    const double ax_sin = cross(g.bearing, g.axis1);
    // Residual II: angle between the axes minus pi, never positive.
    const double al = angle_between(g.axis1, g.axis2) - kPi;
    // Residual III: squared center distance minus contact squared.
    const double di = g.distance * g.distance - p.delta_r * p.delta_r;
    // Residual IV: squared relative speed.
    const double so = dot(g.rel_vel, g.rel_vel);

    const double band = 1e-9;
    const bool near_cut = std::abs(ax_mag - kPi) < 1e-9;
    if (!near_cut && sign_of(r.r_axis, band) != sign_of(ax_sin, band) &&
        std::abs(ax_sin) > band) {
      ++rep.sign_mismatches;
    }
    if (sign_of(r.r_align, band) != sign_of(al, band)) ++rep.sign_mismatches;
    if (sign_of(r.r_dist, band) != sign_of(di, band)) ++rep.sign_mismatches;
    if (sign_of(r.r_soft, band) != sign_of(so, band)) ++rep.sign_mismatches;

    const double mag_tol = 1e-9;
    if (!near_cut && std::abs(std::abs(r.r_axis) - ax_mag) > mag_tol) ++rep.magnitude_mismatches;
    if (std::abs(r.r_align - al) > mag_tol) ++rep.magnitude_mismatches;
    if (std::abs(r.r_dist - di) > mag_tol) ++rep.magnitude_mismatches;
    if (std::abs(r.r_soft - so) > mag_tol) ++rep.magnitude_mismatches;

    const bool lib_zero = std::abs(r.r_axis) <= zero_tol && std::abs(r.r_align) <= zero_tol &&
                          std::abs(r.r_dist) <= zero_tol && std::abs(r.r_soft) <= zero_tol;
    const bool geo_zero = docked(g, p, 1e-8);
    if (lib_zero != geo_zero) ++rep.zero_set_mismatches;
    if (geo_zero) ++rep.docked_cases;
  }

  // Smooth alignment surrogate: locate its minimum by golden-section search
  // around the exact root and compare.
  std::uniform_real_distribution<double> shift(-0.05, 0.05);
  for (int i = 0; i < 200; ++i) {
    CouplingParams p;
    p.iface1 = DockingInterface(off(rng), 0.1);
    p.iface2 = DockingInterface(off(rng), 0.1);
    const double th1 = ang(rng);
    const double root = th1 + p.iface1.delta_phi() + kPi - p.iface2.delta_phi();
    const double c = root + shift(rng);
    auto surrogate = [&](double th2) {
      const PosePair<double> zz{{0, 0, th1}, {1, 0, th2}};
      return smooth::alignment(zz, p);
    };
    double lo = c - 0.2, hi = c + 0.2;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
      const double a = hi - gr * (hi - lo);
      const double b = lo + gr * (hi - lo);
      if (surrogate(a) <= surrogate(b)) hi = b; else lo = a;
    }
    const double arg = 0.5 * (lo + hi);
    // Exact-form zero: residual II vanishes at the same heading.
    const CentralState zz{{0, 0, th1}, {1, 0, arg}};
    const double exact_at_arg = std::abs(residual_alignment(zz, p));
    rep.surrogate_root_error =
        std::max({rep.surrogate_root_error, std::abs(wrap_to_pm_pi(arg - root)), exact_at_arg});
  }
  return rep;
}

}  // namespace oracle
