// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockmpc/solver.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace dockmpc {

void SolverSettings::validate() const {
  if (max_outer <= 0 || max_inner <= 0 || memory <= 0 || max_backtracks <= 0) {
    throw DomainError("solver iteration limits must be positive");
  }
  if (!(mu0 > 0.0) || !(mu_max >= mu0)) throw DomainError("penalty settings invalid");
  if (!(multiplier_max > 0.0)) throw DomainError("multiplier_max must be positive");
  if (!(mu_growth > 1.0)) throw DomainError("penalty growth factor must exceed 1");
  if (!(constraint_tol > 0.0) || !(gradient_tol > 0.0) || !(step_tol > 0.0)) {
    throw DomainError("solver tolerances must be positive");
  }
  if (!(armijo > 0.0 && armijo < 1.0) || !(backtrack > 0.0 && backtrack < 1.0)) {
    throw DomainError("line-search parameters must lie in (0, 1)");
  }
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged:
      return "converged";
    case SolveStatus::MaxIter:
      return "max_iter";
    case SolveStatus::InfeasibleStall:
      return "infeasible_stall";
    case SolveStatus::NumericError:
      return "numeric_error";
  }
  return "unknown";
}

namespace detail {

void project(std::span<double> x, std::span<const double> lower, std::span<const double> upper) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
}

double max_violation(std::span<const double> c, std::span<const double> cl,
                     std::span<const double> cu) {
  double v = 0.0;
  for (std::size_t r = 0; r < c.size(); ++r) {
    v = std::max(v, cl[r] - c[r]);
    v = std::max(v, c[r] - cu[r]);
  }
  return v;
}

}  // namespace detail

namespace {

using Pair = CurvatureMemory::Pair;

// Infinity norm of the projected gradient: a coordinate at a bound counts only
// when its gradient points into the box.
double proj_grad_norm(std::span<const double> x, std::span<const double> g,
                      std::span<const double> lower, std::span<const double> upper) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double gi = g[i];
    if (lower[i] == upper[i]) gi = 0.0;
    else if (x[i] <= lower[i]) gi = std::min(gi, 0.0);
    else if (x[i] >= upper[i]) gi = std::max(gi, 0.0);
    worst = std::max(worst, std::abs(gi));
  }
  return worst;
}

// Variables pinned at a bound with the gradient pointing outward.
std::vector<char> active_set(std::span<const double> x, std::span<const double> g,
                             std::span<const double> lower, std::span<const double> upper) {
  std::vector<char> act(x.size(), 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const bool at_lo = x[i] <= lower[i] && g[i] > 0.0;
    const bool at_hi = x[i] >= upper[i] && g[i] < 0.0;
    act[i] = (at_lo || at_hi || lower[i] == upper[i]) ? 1 : 0;
  }
  return act;
}

double masked_dot(const std::vector<double>& a, const std::vector<double>& b,
                  const std::vector<char>& act) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!act[i]) s += a[i] * b[i];
  }
  return s;
}

// Two-loop recursion restricted to the free variables.
std::vector<double> lbfgs_direction(const std::vector<double>& g, const std::deque<Pair>& mem,
                                    const std::vector<char>& act) {
  std::vector<double> q(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) q[i] = act[i] ? 0.0 : g[i];
  std::vector<double> alpha(mem.size());
  for (std::size_t j = mem.size(); j-- > 0;) {
    alpha[j] = mem[j].rho * masked_dot(mem[j].s, q, act);
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (!act[i]) q[i] -= alpha[j] * mem[j].y[i];
    }
  }
  double gamma = 1.0;
  if (!mem.empty()) {
    const auto& last = mem.back();
    const double yy = masked_dot(last.y, last.y, act);
    const double sy = masked_dot(last.s, last.y, act);
    if (yy > 0.0 && sy > 0.0) gamma = sy / yy;
  }
  for (double& v : q) v *= gamma;
  for (std::size_t j = 0; j < mem.size(); ++j) {
    const double beta = mem[j].rho * masked_dot(mem[j].y, q, act);
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (!act[i]) q[i] += (alpha[j] - beta) * mem[j].s[i];
    }
  }
  for (double& v : q) v = -v;
  return q;
}

}  // namespace

InnerResult inner_minimize(const ValueGrad& fg, std::span<const double> lower,
                           std::span<const double> upper, std::vector<double> x0,
                           const SolverSettings& s, double gtol, CurvatureMemory* memory) {
  const std::size_t n = x0.size();
  InnerResult out;
  detail::project(x0, lower, upper);
  std::vector<double> x = std::move(x0);
  std::vector<double> g(n), g_new(n), x_new(n);
  double f = fg(x, g);
  CurvatureMemory local;
  std::deque<Pair>& mem = memory ? memory->pairs : local.pairs;

  auto measure = [&](double fx, const std::vector<double>& xg, const std::vector<double>& gg) {
    return proj_grad_norm(xg, gg, lower, upper) / std::max(1.0, std::abs(fx));
  };

  for (int it = 0; it < s.max_inner; ++it) {
    out.proj_grad = measure(f, x, g);
    if (out.proj_grad <= gtol) {
      out.converged = true;
      break;
    }
    const auto act = active_set(x, g, lower, upper);
    std::vector<double> d = lbfgs_direction(g, mem, act);
    double slope = std::inner_product(g.begin(), g.end(), d.begin(), 0.0);
    if (!(slope < 0.0)) {
      mem.clear();
      for (std::size_t i = 0; i < n; ++i) d[i] = act[i] ? 0.0 : -g[i];
      slope = std::inner_product(g.begin(), g.end(), d.begin(), 0.0);
    }
    if (mem.empty()) {
      // Without curvature information keep the first trial step moderate.
      double dmax = 0.0;
      for (double v : d) dmax = std::max(dmax, std::abs(v));
      if (dmax > 1.0) {
        for (double& v : d) v /= dmax;
      }
    }

    double step = 1.0;
    bool accepted = false;
    double f_new = f;
    for (int bt = 0; bt < s.max_backtracks; ++bt) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = std::clamp(x[i] + step * d[i], lower[i], upper[i]);
      double decrease = 0.0;
      for (std::size_t i = 0; i < n; ++i) decrease += g[i] * (x_new[i] - x[i]);
      f_new = fg(x_new, g_new);
      if (f_new <= f + s.armijo * decrease && decrease < 0.0) {
        accepted = true;
        break;
      }
      step *= s.backtrack;
    }
    out.iterations = it + 1;
    if (!accepted) {
      if (!mem.empty()) {
        // Retry from steepest descent before giving up.
        mem.clear();
        continue;
      }
      out.line_search_failed = true;
      break;
    }
    if (f_new > f) out.monotone = false;

    Pair pr{std::vector<double>(n), std::vector<double>(n), 0.0};
    double smax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      pr.s[i] = x_new[i] - x[i];
      pr.y[i] = g_new[i] - g[i];
      smax = std::max(smax, std::abs(pr.s[i]));
    }
    const double sy = std::inner_product(pr.s.begin(), pr.s.end(), pr.y.begin(), 0.0);
    const double yy = std::inner_product(pr.y.begin(), pr.y.end(), pr.y.begin(), 0.0);
    if (sy > 1e-12 * yy && sy > 0.0) {
      pr.rho = 1.0 / sy;
      mem.push_back(std::move(pr));
      if (mem.size() > static_cast<std::size_t>(s.memory)) mem.pop_front();
    }
    x.swap(x_new);
    g.swap(g_new);
    f = f_new;
    if (smax < s.step_tol) {
      out.proj_grad = measure(f, x, g);
      out.converged = out.proj_grad <= gtol;
      break;
    }
  }
  if (!out.converged) out.proj_grad = measure(f, x, g);
  out.converged = out.converged || out.proj_grad <= gtol;
  out.x = std::move(x);
  out.f = f;
  return out;
}

}  // namespace dockmpc
