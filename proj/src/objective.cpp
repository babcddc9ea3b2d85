// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockmpc/objective.hpp"

#include "dockmpc/error.hpp"

namespace dockmpc {

namespace {
void require_weight(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(name) + " must be finite and nonnegative");
  }
}
}  // namespace

void WeightVector::validate() const {
  require_weight(lambda_dr, "lambda_dr");
  require_weight(lambda_dtheta, "lambda_dtheta");
  require_weight(lambda_dv, "lambda_dv");
  require_weight(lambda_dphi, "lambda_dphi");
  require_weight(lambda_j, "lambda_j");
  require_weight(lambda_omega, "lambda_omega");
}

void TerminalWeights::validate() const {
  for (double v : w) require_weight(v, "terminal weight");
}

double coupling_cost(std::span<const ResidualVector> slacks, const WeightVector& w) {
  double total = 0.0;
  for (const auto& e : slacks) {
    total += cost_terms::coupling_step(e.r_axis, e.r_align, e.r_dist, e.r_soft, w);
  }
  return total;
}

double input_smoothing_cost(std::span<const CentralInput> inputs, const InputHistory& history,
                            const WeightVector& w, TimeStep dt) {
  TwistPair<double> km2 = history.older.twists();
  TwistPair<double> km1 = history.newer.twists();
  double total = 0.0;
  for (const auto& u : inputs) {
    const TwistPair<double> k = u.twists();
    total += cost_terms::smoothing_step(km2, km1, k, w, dt.dt());
    km2 = km1;
    km1 = k;
  }
  return total;
}

double terminal_cost(const CentralState& zN, const GoalState& goal, const TerminalWeights& tw) {
  return cost_terms::terminal(zN.poses(), goal.target.poses(), tw);
}

CostBreakdown total_cost(std::span<const ResidualVector> slacks,
                         std::span<const CentralInput> inputs, const InputHistory& history,
                         const CentralState& zN, const GoalState& goal, const WeightVector& w,
                         const TerminalWeights& tw, TimeStep dt) {
  return {coupling_cost(slacks, w), input_smoothing_cost(inputs, history, w, dt),
          terminal_cost(zN, goal, tw)};
}

}  // namespace dockmpc
