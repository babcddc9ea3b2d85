// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <span>

#include "dockmpc/coupling.hpp"
#include "dockmpc/dynamics.hpp"
#include "dockmpc/types.hpp"

namespace dockmpc {

struct WeightVector {
  double lambda_dr = 30.0;
  double lambda_dtheta = 1000.0;
  double lambda_dv = 1.0;
  double lambda_dphi = 200.0;
  double lambda_j = 0.1;
  double lambda_omega = 1.0;

  void validate() const;
  WeightVector without_coupling() const {
    WeightVector w = *this;
    w.lambda_dr = w.lambda_dtheta = w.lambda_dv = w.lambda_dphi = 0.0;
    return w;
  }
};

/// Per-coordinate end-cost weights (x1, y1, th1, x2, y2, th2).
struct TerminalWeights {
  std::array<double, 6> w{1.0, 1.0, 200.0, 1.0, 1.0, 200.0};
  void validate() const;
};

struct GoalState {
  CentralState target;
};

/// Last two applied inputs, oldest first.
struct InputHistory {
  CentralInput older;
  CentralInput newer;
};

double coupling_cost(std::span<const ResidualVector> slacks, const WeightVector& w);

double input_smoothing_cost(std::span<const CentralInput> inputs, const InputHistory& history,
                            const WeightVector& w, TimeStep dt);

double terminal_cost(const CentralState& zN, const GoalState& goal, const TerminalWeights& tw);

struct CostBreakdown {
  double coupling = 0.0;
  double smoothing = 0.0;
  double terminal = 0.0;
  double total() const { return coupling + smoothing + terminal; }
};

/// Sum of the three terms; zN is the final state of the horizon.
CostBreakdown total_cost(std::span<const ResidualVector> slacks,
                         std::span<const CentralInput> inputs, const InputHistory& history,
                         const CentralState& zN, const GoalState& goal, const WeightVector& w,
                         const TerminalWeights& tw, TimeStep dt);

namespace cost_terms {

template <class T>
T coupling_step(const T& axis, const T& align, const T& dist, const T& soft,
                const WeightVector& w) {
  return w.lambda_dr * dist * dist + w.lambda_dtheta * align * align + w.lambda_dv * soft * soft +
         w.lambda_dphi * axis * axis;
}

// Step k of the smoothing sum, given inputs at k-2, k-1, k.
template <class T, class U, class V>
T smoothing_step(const TwistPair<U>& km2, const TwistPair<V>& km1, const TwistPair<T>& k,
                 const WeightVector& w, double dt) {
  const double inv_dt2 = 1.0 / (dt * dt);
  const double inv_dt = 1.0 / dt;
  auto acc = [&](const T& a, const V& b, const U& c) {
    const T s = (a - 2.0 * b + c) * inv_dt2;
    return s * s;
  };
  auto rate = [&](const T& a, const V& b) {
    const T s = (a - b) * inv_dt;
    return s * s;
  };
  const T trans = acc(k.r1.vx, km1.r1.vx, km2.r1.vx) + acc(k.r1.vy, km1.r1.vy, km2.r1.vy) +
                  acc(k.r2.vx, km1.r2.vx, km2.r2.vx) + acc(k.r2.vy, km1.r2.vy, km2.r2.vy);
  const T rot = rate(k.r1.omega, km1.r1.omega) + rate(k.r2.omega, km1.r2.omega);
  return w.lambda_j * trans + w.lambda_omega * rot;
}

template <class T>
T wrapped_error(const T& e) {
  using std::atan2;
  using std::cos;
  using std::sin;
  return atan2(sin(e), cos(e));
}

template <class T>
T terminal(const PosePair<T>& zN, const PosePair<double>& goal, const TerminalWeights& tw) {
  const T ex1 = zN.r1.x - goal.r1.x;
  const T ey1 = zN.r1.y - goal.r1.y;
  const T et1 = wrapped_error(T(zN.r1.theta - goal.r1.theta));
  const T ex2 = zN.r2.x - goal.r2.x;
  const T ey2 = zN.r2.y - goal.r2.y;
  const T et2 = wrapped_error(T(zN.r2.theta - goal.r2.theta));
  return tw.w[0] * ex1 * ex1 + tw.w[1] * ey1 * ey1 + tw.w[2] * et1 * et1 + tw.w[3] * ex2 * ex2 +
         tw.w[4] * ey2 * ey2 + tw.w[5] * et2 * et2;
}

}  // namespace cost_terms

}  // namespace dockmpc
