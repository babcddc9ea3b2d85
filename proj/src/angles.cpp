// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockmpc/angles.hpp"

#include <cmath>

#include "dockmpc/error.hpp"

namespace dockmpc {

namespace {
void require_finite(double a, const char* who) {
  if (!std::isfinite(a)) {
    throw DomainError(std::string(who) + ": non-finite angle");
  }
}
}  // namespace

double wrap_to_2pi(double a) {
  require_finite(a, "wrap_to_2pi");
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative number plus 2pi can round up to 2pi.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double wrap_to_pm_pi(double a) {
  require_finite(a, "wrap_to_pm_pi");
  double r = wrap_to_2pi(a + kPi) - kPi;
  if (r >= kPi) r = -kPi;
  return r;
}

double map_to_0_pi(double a) { return std::abs(wrap_to_pm_pi(a)); }

}  // namespace dockmpc
