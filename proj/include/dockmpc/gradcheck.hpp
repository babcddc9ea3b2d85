// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

// Randomized derivative checks over NLP instances.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "dockmpc/nlp.hpp"

namespace dockmpc {

struct RandomInstance {
  NlpProblem problem;
  std::vector<double> x;
};

/// Draws an instance with horizon N and a point x inside the input box. Points
/// within `cut_margin` of an angle branch cut (where the wrapped residuals are
/// not differentiable) are redrawn.
RandomInstance random_instance(std::mt19937_64& rng, int horizon, double cut_margin = 1e-3);

/// Smallest distance of any wrapped angle in the problem to its branch cut at +-pi.
double branch_cut_margin(const NlpProblem& p, std::span<const double> x);

struct GradientCheckReport {
  int trials = 0;
  double max_gradient_error = 0.0;
  double max_jacobian_error = 0.0;
  double wall_time = 0.0;
};

/// Alternates N = 5 and N = 20.
GradientCheckReport run_gradient_checks(int trials, std::uint64_t seed, double h = 1e-6);

}  // namespace dockmpc
