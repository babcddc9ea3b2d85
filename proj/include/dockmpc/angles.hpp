// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <numbers>

namespace dockmpc {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Wraps to [0, 2pi). Throws DomainError on non-finite input.
double wrap_to_2pi(double a);

/// Wraps to [-pi, pi). Throws DomainError on non-finite input.
double wrap_to_pm_pi(double a);

/// |wrap_to_pm_pi(a)|, in [0, pi]. Not differentiable at 0 and pi.
double map_to_0_pi(double a);

}  // namespace dockmpc
