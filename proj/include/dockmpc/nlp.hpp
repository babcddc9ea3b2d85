// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

// Single-shooting transcription of one receding-horizon instance.
//
// Decision vector: x[6k + j], k = 0..N-1, j = (v1x, v1y, w1, v2x, v2y, w2).
// States are eliminated: z_{k+1} = z_k + dt * nu_k from the fixed z_0.
//
// Constraint rows (all evaluated on z_k, k = 1..N, with nu_{k-1}):
//   row k-1            approach corridor (or keep-out disk), lower bound 0
//   row N + 4(k-1) + 0 residual III (distance)        in [-eps_dr, eps_dr]
//   row N + 4(k-1) + 1 residual II, smooth alignment  in [-eps_dtheta, eps_dtheta]
//   row N + 4(k-1) + 2 residual IV (soft docking)     in [-eps_dv, eps_dv]
//   row N + 4(k-1) + 3 residual I (docking axis)      in [-eps_dphi, eps_dphi]

#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "dockmpc/coupling.hpp"
#include "dockmpc/dynamics.hpp"
#include "dockmpc/objective.hpp"
#include "dockmpc/types.hpp"

namespace dockmpc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr std::size_t kInputsPerStep = 6;

/// Caps on |residual| ordered (eps_dr, eps_dtheta, eps_dv, eps_dphi).
struct SlackCaps {
  std::array<double, 4> eps{20.0, 2.1, 10.0, 3.2};

  static SlackCaps approach() { return {}; }
  static SlackCaps docked() { return {{0.01, 0.05, 0.01, 0.05}}; }
  static SlackCaps unbounded() { return {{kInf, kInf, kInf, kInf}}; }
  void validate() const;
};

struct InputBounds {
  double v_max = 1.0;
  double omega_max = kPi / 2.0;
  void validate() const;
};

enum class CollisionMode {
  Corridor,  // keep-out disk relaxed inside the approach corridor
  KeepOut,   // full keep-out disk, alpha_ca >= 0
  Off,
};

struct ProblemParams {
  CouplingParams coupling;
  WeightVector weights;
  TerminalWeights terminal;
  SlackCaps caps;
  double dt = 0.25;
  int horizon = 20;
  InputBounds bounds;
  CollisionMode collision = CollisionMode::Corridor;
  /// An inactive robot has its inputs pinned to zero.
  std::array<bool, 2> robot_active{true, true};

  void validate() const;
  /// True when any coupling weight or cap can influence the problem.
  bool coupling_active() const;
};

class NlpProblem {
 public:
  NlpProblem(const CentralState& z0, const GoalState& goal, const ProblemParams& params,
             const InputHistory& history);

  std::size_t horizon() const { return static_cast<std::size_t>(params_.horizon); }
  std::size_t dimension() const { return kInputsPerStep * horizon(); }
  std::size_t num_constraints() const { return 5 * horizon(); }
  std::size_t corridor_row(std::size_t k) const { return k; }
  std::size_t cap_row(std::size_t k, std::size_t which) const { return horizon() + 4 * k + which; }

  std::span<const double> lower() const { return lower_; }
  std::span<const double> upper() const { return upper_; }
  std::span<const double> constraint_lower() const { return c_lower_; }
  std::span<const double> constraint_upper() const { return c_upper_; }

  const CentralState& initial_state() const { return z0_; }
  const GoalState& goal() const { return goal_; }
  const ProblemParams& params() const { return params_; }
  const InputHistory& history() const { return history_; }

  /// Fused objective and constraint evaluation; T is double, long double or a
  /// dual number.
  template <class T>
  void evaluate(std::span<const T> x, T& f, std::span<T> c) const;

  template <class T>
  T objective(std::span<const T> x) const {
    std::vector<T> c(num_constraints());
    T f{};
    evaluate<T>(x, f, c);
    return f;
  }

  /// Decodes the decision vector into per-step inputs.
  std::vector<CentralInput> unpack(std::span<const double> x) const;
  std::vector<double> pack(std::span<const CentralInput> inputs) const;

  /// Predicted states z_1..z_N for a decision vector.
  std::vector<PosePair<double>> predict(std::span<const double> x) const;

 private:
  CentralState z0_;
  GoalState goal_;
  ProblemParams params_;
  InputHistory history_;
  bool coupling_on_;
  std::vector<double> lower_, upper_, c_lower_, c_upper_;
};

NlpProblem build_problem(const CentralState& z0, const GoalState& goal,
                         const ProblemParams& params, const InputHistory& history);

struct ObjectiveEval {
  double value = 0.0;
  std::vector<double> gradient;
};

struct ConstraintEval {
  std::vector<double> values;
  std::vector<double> jacobian;  // row-major, num_constraints x dimension
};

/// Throws NumericError naming the first non-finite entry.
ObjectiveEval eval_objective(const NlpProblem& p, std::span<const double> x);
ConstraintEval eval_constraints(const NlpProblem& p, std::span<const double> x);

/// Max over coordinates of |AD - FD| / (1 + |FD|) for the objective gradient,
/// central differences of step h evaluated in extended precision.
double check_gradient(const NlpProblem& p, std::span<const double> x, double h);
/// Same measure over every constraint Jacobian entry.
double check_jacobian(const NlpProblem& p, std::span<const double> x, double h);

/// Drops the first step of a previous solution and repeats its last input.
std::vector<double> shift_warm_start(std::span<const double> previous, std::size_t horizon);

/// JSON debug dump of layout, bounds and an initial guess.
std::string dump_problem_json(const NlpProblem& p, std::span<const double> x0);

// ---------------------------------------------------------------------------

template <class T>
void NlpProblem::evaluate(std::span<const T> x, T& f, std::span<T> c) const {
  const auto& cp = params_.coupling;
  const auto& w = params_.weights;
  const double dt = params_.dt;
  const std::size_t n_steps = horizon();

  const auto p0 = z0_.poses();
  PosePair<T> z{{T(p0.r1.x), T(p0.r1.y), T(p0.r1.theta)}, {T(p0.r2.x), T(p0.r2.y), T(p0.r2.theta)}};
  auto lift = [](const TwistPair<double>& t) {
    return TwistPair<T>{{T(t.r1.vx), T(t.r1.vy), T(t.r1.omega)},
                        {T(t.r2.vx), T(t.r2.vy), T(t.r2.omega)}};
  };
  TwistPair<T> km2 = lift(history_.older.twists());
  TwistPair<T> km1 = lift(history_.newer.twists());

  T total(0.0);
  for (std::size_t k = 0; k < n_steps; ++k) {
    const std::size_t o = kInputsPerStep * k;
    const TwistPair<T> nu{{x[o], x[o + 1], x[o + 2]}, {x[o + 3], x[o + 4], x[o + 5]}};
    total += cost_terms::smoothing_step(km2, km1, nu, w, dt);
    km2 = km1;
    km1 = nu;
    z = integrate(z, nu, dt);

    switch (params_.collision) {
      case CollisionMode::Corridor:
        c[k] = smooth::corridor_row(z, cp);
        break;
      case CollisionMode::KeepOut:
        c[k] = smooth::collision_term(z, cp) * (1.0 / (cp.r_ca * cp.r_ca));
        break;
      case CollisionMode::Off:
        c[k] = T(0.0);
        break;
    }

    if (coupling_on_) {
      const T axis = smooth::axis(z, cp);
      const T align = smooth::alignment(z, cp);
      const T dist = smooth::distance(z, cp);
      const T soft = smooth::soft_docking(nu);
      total += cost_terms::coupling_step(axis, align, dist, soft, w);
      c[cap_row(k, 0)] = dist;
      c[cap_row(k, 1)] = align;
      c[cap_row(k, 2)] = soft;
      c[cap_row(k, 3)] = axis;
    } else {
      for (std::size_t j = 0; j < 4; ++j) c[cap_row(k, j)] = T(0.0);
    }
  }
  total += cost_terms::terminal(z, goal_.target.poses(), params_.terminal);
  f = total;
}

}  // namespace dockmpc
