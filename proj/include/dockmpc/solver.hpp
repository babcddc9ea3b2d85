// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

// Augmented-Lagrangian solver for
//
//   min f(x)  s.t.  cl <= c(x) <= cu,  l <= x <= u
//
// Each finite side of a constraint row becomes an inequality g(x) >= 0 handled
// with the Powell-Hestenes-Rockafellar penalty. The bound-constrained
// subproblems are solved with a projected limited-memory BFGS method.
//
// A Problem type provides dimension(), num_constraints(), lower(), upper(),
// constraint_lower(), constraint_upper() and a template
//   evaluate<T>(std::span<const T> x, T& f, std::span<T> c)
// that is instantiated with double and with ad::Var.

#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dockmpc/autodiff.hpp"
#include "dockmpc/error.hpp"

namespace dockmpc {

struct SolverSettings {
  int max_outer = 30;
  int max_inner = 200;
  double mu0 = 10.0;
  double mu_growth = 5.0;
  double mu_max = 1e9;
  double constraint_tol = 1e-4;
  /// Projected-gradient tolerance, relative to max(1, |objective|).
  double gradient_tol = 1e-5;
  double step_tol = 1e-9;
  double armijo = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 40;
  int memory = 10;
  double complementarity_tol = 1e-3;
  /// Safeguard: multiplier estimates are projected onto [0, multiplier_max].
  double multiplier_max = 1e6;

  void validate() const;
};

enum class SolveStatus { Converged, MaxIter, InfeasibleStall, NumericError };

std::string to_string(SolveStatus s);

struct InnerResult {
  std::vector<double> x;
  double f = 0.0;
  double proj_grad = 0.0;  // relative measure, see SolverSettings::gradient_tol
  int iterations = 0;
  bool converged = false;
  bool line_search_failed = false;
  bool monotone = true;
};

struct SolveResult {
  std::vector<double> x;
  double objective = 0.0;
  double max_violation = 0.0;
  double proj_grad = 0.0;
  double complementarity = 0.0;
  SolveStatus status = SolveStatus::MaxIter;
  int outer_iterations = 0;
  int inner_iterations = 0;
  double wall_time = 0.0;
  /// Two multipliers per row: lower side then upper side.
  std::vector<double> multipliers;
  /// Max violation after each outer iteration.
  std::vector<double> violation_history;
  bool monotone = true;
  std::string message;
};

/// Value-and-gradient callback: returns f(x) and writes grad.
using ValueGrad = std::function<double(std::span<const double>, std::span<double>)>;

/// Projected L-BFGS on the box [lower, upper] with Armijo backtracking along
/// the projection arc.
/// Curvature pairs of the limited-memory approximation; can be carried from
/// one inner solve to the next.
struct CurvatureMemory {
  struct Pair {
    std::vector<double> s;
    std::vector<double> y;
    double rho = 0.0;
  };
  std::deque<Pair> pairs;
};

InnerResult inner_minimize(const ValueGrad& fg, std::span<const double> lower,
                           std::span<const double> upper, std::vector<double> x0,
                           const SolverSettings& s, double gtol,
                           CurvatureMemory* memory = nullptr);

/// Per-iteration trace; receives one line per outer iteration.
using TraceSink = std::function<void(const std::string&)>;

namespace detail {

// PHR term for g >= 0 with multiplier lam and penalty mu.
template <class T>
T phr(const T& g, double lam, double mu) {
  if (ad::value(g) < lam / mu) return -lam * g + 0.5 * mu * g * g;
  return T(-0.5 * lam * lam / mu);
}

void project(std::span<double> x, std::span<const double> lower, std::span<const double> upper);

double max_violation(std::span<const double> c, std::span<const double> cl,
                     std::span<const double> cu);

}  // namespace detail

template <class Problem>
SolveResult solve(const Problem& p, std::vector<double> x0, const SolverSettings& s,
                  std::span<const double> multipliers0 = {}, const TraceSink& trace = {}) {
  const auto t_start = std::chrono::steady_clock::now();
  s.validate();
  const std::size_t n = p.dimension();
  const std::size_t m = p.num_constraints();
  const auto cl = p.constraint_lower();
  const auto cu = p.constraint_upper();

  SolveResult res;
  res.multipliers.assign(2 * m, 0.0);
  if (multipliers0.size() == 2 * m) {
    for (std::size_t r = 0; r < 2 * m; ++r) {
      res.multipliers[r] = std::clamp(multipliers0[r], 0.0, s.multiplier_max);
    }
  }
  for (std::size_t r = 0; r < m; ++r) {
    if (!std::isfinite(cl[r])) res.multipliers[2 * r] = 0.0;
    if (!std::isfinite(cu[r])) res.multipliers[2 * r + 1] = 0.0;
  }
  x0.resize(n, 0.0);
  detail::project(x0, p.lower(), p.upper());
  res.x = x0;

  auto finish = [&](SolveStatus st) {
    res.status = st;
    res.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return res;
  };

  std::vector<double> c(m);
  auto plain_eval = [&](std::span<const double> x, double& f) {
    p.template evaluate<double>(x, f, std::span<double>(c));
    if (!std::isfinite(f)) throw NumericError("non-finite objective", -1);
    for (std::size_t r = 0; r < m; ++r) {
      if (!std::isfinite(c[r])) throw NumericError("non-finite constraint", static_cast<long>(r));
    }
  };

  CurvatureMemory curvature;
  double mu = s.mu0;
  double prev_violation = std::numeric_limits<double>::infinity();
  try {
    for (int outer = 1; outer <= s.max_outer; ++outer) {
      const std::vector<double> lam = res.multipliers;
      ValueGrad fg = [&](std::span<const double> x, std::span<double> g) {
        auto phi = [&](std::span<const ad::Var> xv) {
          ad::Var f;
          std::vector<ad::Var> cv(m);
          p.template evaluate<ad::Var>(xv, f, std::span<ad::Var>(cv));
          for (std::size_t r = 0; r < m; ++r) {
            if (std::isfinite(cl[r])) f += detail::phr(ad::Var(cv[r] - cl[r]), lam[2 * r], mu);
            if (std::isfinite(cu[r])) f += detail::phr(ad::Var(cu[r] - cv[r]), lam[2 * r + 1], mu);
          }
          return f;
        };
        const double v = ad::reverse_gradient(phi, x, g);
        if (!std::isfinite(v)) throw NumericError("non-finite augmented objective", -1);
        for (std::size_t i = 0; i < g.size(); ++i) {
          if (!std::isfinite(g[i])) throw NumericError("non-finite gradient", static_cast<long>(i));
        }
        return v;
      };

      InnerResult inner =
          inner_minimize(fg, p.lower(), p.upper(), res.x, s, s.gradient_tol, &curvature);
      res.inner_iterations += inner.iterations;
      res.outer_iterations = outer;

      double f = 0.0;
      plain_eval(inner.x, f);
      const double viol = detail::max_violation(c, cl, cu);
      // An iterate that worsens feasibility is discarded; the penalty grows instead.
      if (std::isfinite(prev_violation) && viol > s.constraint_tol &&
          viol > 1.1 * prev_violation + s.constraint_tol) {
        if (trace) trace("outer " + std::to_string(outer) + " rejected viol " + std::to_string(viol));
        if (mu >= s.mu_max) {
          res.message = "penalty at its cap without progress";
          return finish(SolveStatus::MaxIter);
        }
        mu = std::min(s.mu_max, mu * s.mu_growth);
        curvature.pairs.clear();
        continue;
      }
      res.x = inner.x;
      res.proj_grad = inner.proj_grad;
      res.monotone = res.monotone && inner.monotone;
      res.objective = f;
      res.max_violation = viol;
      res.violation_history.push_back(viol);

      // First-order multiplier update and complementarity at the new estimate.
      double comp = 0.0;
      for (std::size_t r = 0; r < m; ++r) {
        if (std::isfinite(cl[r])) {
          const double g = c[r] - cl[r];
          double& l = res.multipliers[2 * r];
          l = std::clamp(l - mu * g, 0.0, s.multiplier_max);
          comp = std::max(comp, std::abs(l * g));
        }
        if (std::isfinite(cu[r])) {
          const double g = cu[r] - c[r];
          double& l = res.multipliers[2 * r + 1];
          l = std::clamp(l - mu * g, 0.0, s.multiplier_max);
          comp = std::max(comp, std::abs(l * g));
        }
      }
      res.complementarity = comp;

      if (trace) {
        trace("outer " + std::to_string(outer) + " f " + std::to_string(f) + " gproj " +
              std::to_string(inner.proj_grad) + " viol " + std::to_string(viol) + " mu " +
              std::to_string(mu) + " inner " + std::to_string(inner.iterations));
      }

      if (viol <= s.constraint_tol && inner.converged && comp <= s.complementarity_tol) {
        return finish(SolveStatus::Converged);
      }
      if (viol > s.constraint_tol && viol > 0.25 * prev_violation) {
        if (mu >= s.mu_max) {
          res.message = "penalty at its cap without progress";
          return finish(SolveStatus::InfeasibleStall);
        }
        mu = std::min(s.mu_max, mu * s.mu_growth);
      }
      prev_violation = viol;
    }
  } catch (const NumericError& e) {
    res.message = e.what();
    return finish(SolveStatus::NumericError);
  }
  return finish(SolveStatus::MaxIter);
}

}  // namespace dockmpc
