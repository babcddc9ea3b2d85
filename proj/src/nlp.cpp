// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockmpc/nlp.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "dockmpc/autodiff.hpp"
#include "dockmpc/error.hpp"

namespace dockmpc {

void SlackCaps::validate() const {
  for (double e : eps) {
    if (!(e >= 0.0)) throw DomainError("slack caps must be nonnegative");
  }
}

void InputBounds::validate() const {
  if (!(v_max > 0.0) || !std::isfinite(v_max)) throw DomainError("v_max must be positive");
  if (!(omega_max > 0.0) || !std::isfinite(omega_max)) {
    throw DomainError("omega_max must be positive");
  }
}

void ProblemParams::validate() const {
  coupling.validate();
  weights.validate();
  terminal.validate();
  caps.validate();
  bounds.validate();
  TimeStep{dt};
  if (horizon < 2) throw DomainError("horizon must be at least 2");
}

bool ProblemParams::coupling_active() const {
  const bool weighted = weights.lambda_dr > 0.0 || weights.lambda_dtheta > 0.0 ||
                        weights.lambda_dv > 0.0 || weights.lambda_dphi > 0.0;
  const bool capped = std::any_of(caps.eps.begin(), caps.eps.end(),
                                  [](double e) { return std::isfinite(e); });
  return weighted || capped;
}

NlpProblem::NlpProblem(const CentralState& z0, const GoalState& goal, const ProblemParams& params,
                       const InputHistory& history)
    : z0_(z0), goal_(goal), params_(params), history_(history) {
  params_.validate();
  coupling_on_ = params_.coupling_active();

  const std::size_t n = dimension();
  lower_.resize(n);
  upper_.resize(n);
  const auto& b = params_.bounds;
  for (std::size_t k = 0; k < horizon(); ++k) {
    for (std::size_t r = 0; r < 2; ++r) {
      const double v = params_.robot_active[r] ? b.v_max : 0.0;
      const double w = params_.robot_active[r] ? b.omega_max : 0.0;
      const std::size_t o = kInputsPerStep * k + 3 * r;
      lower_[o] = -v;
      upper_[o] = v;
      lower_[o + 1] = -v;
      upper_[o + 1] = v;
      lower_[o + 2] = -w;
      upper_[o + 2] = w;
    }
  }

  const std::size_t m = num_constraints();
  c_lower_.assign(m, -kInf);
  c_upper_.assign(m, kInf);
  if (params_.collision != CollisionMode::Off) {
    for (std::size_t k = 0; k < horizon(); ++k) c_lower_[corridor_row(k)] = 0.0;
  }
  if (coupling_on_) {
    for (std::size_t k = 0; k < horizon(); ++k) {
      for (std::size_t j = 0; j < 4; ++j) {
        c_lower_[cap_row(k, j)] = -params_.caps.eps[j];
        c_upper_[cap_row(k, j)] = params_.caps.eps[j];
      }
    }
  }
}

std::vector<CentralInput> NlpProblem::unpack(std::span<const double> x) const {
  std::vector<CentralInput> out(horizon());
  for (std::size_t k = 0; k < horizon(); ++k) {
    const std::size_t o = kInputsPerStep * k;
    out[k] = {{x[o], x[o + 1], x[o + 2]}, {x[o + 3], x[o + 4], x[o + 5]}};
  }
  return out;
}

std::vector<double> NlpProblem::pack(std::span<const CentralInput> inputs) const {
  std::vector<double> x;
  x.reserve(dimension());
  for (const auto& u : inputs) {
    const auto a = u.to_array();
    x.insert(x.end(), a.begin(), a.end());
  }
  return x;
}

std::vector<PosePair<double>> NlpProblem::predict(std::span<const double> x) const {
  const auto inputs = unpack(x);
  return rollout(z0_, inputs, TimeStep{params_.dt});
}

NlpProblem build_problem(const CentralState& z0, const GoalState& goal,
                         const ProblemParams& params, const InputHistory& history) {
  return NlpProblem(z0, goal, params, history);
}

namespace {

void require_size(const NlpProblem& p, std::span<const double> x) {
  if (x.size() != p.dimension()) throw DomainError("decision vector has wrong dimension");
}

void require_finite(std::span<const double> v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) throw NumericError(std::string("non-finite ") + what, static_cast<long>(i));
  }
}

}  // namespace

ObjectiveEval eval_objective(const NlpProblem& p, std::span<const double> x) {
  require_size(p, x);
  ObjectiveEval out;
  out.gradient.resize(p.dimension());
  out.value = ad::reverse_gradient(
      [&](std::span<const ad::Var> xv) { return p.objective<ad::Var>(xv); }, x, out.gradient);
  if (!std::isfinite(out.value)) throw NumericError("non-finite objective", -1);
  require_finite(out.gradient, "objective gradient");
  return out;
}

ConstraintEval eval_constraints(const NlpProblem& p, std::span<const double> x) {
  require_size(p, x);
  const std::size_t m = p.num_constraints();
  ConstraintEval out;
  out.values.resize(m);
  out.jacobian.resize(m * p.dimension());
  ad::jacobian(
      [&](std::span<const ad::D> xd, std::span<ad::D> c) {
        ad::D f;
        p.evaluate<ad::D>(xd, f, c);
      },
      x, m, out.values, out.jacobian);
  require_finite(out.values, "constraint value");
  require_finite(out.jacobian, "constraint Jacobian");
  return out;
}

namespace {

using Ext = long double;

void eval_extended(const NlpProblem& p, const std::vector<Ext>& x, Ext& f, std::vector<Ext>& c) {
  c.resize(p.num_constraints());
  p.evaluate<Ext>(std::span<const Ext>(x), f, std::span<Ext>(c));
}

}  // namespace

double check_gradient(const NlpProblem& p, std::span<const double> x, double h) {
  require_size(p, x);
  const auto ad_eval = eval_objective(p, x);
  std::vector<Ext> xe(x.begin(), x.end());
  std::vector<Ext> c;
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    Ext fp = 0, fm = 0;
    xe[i] = static_cast<Ext>(x[i]) + h;
    eval_extended(p, xe, fp, c);
    xe[i] = static_cast<Ext>(x[i]) - h;
    eval_extended(p, xe, fm, c);
    xe[i] = x[i];
    const double fd = static_cast<double>((fp - fm) / (2 * static_cast<Ext>(h)));
    worst = std::max(worst, std::abs(ad_eval.gradient[i] - fd) / (1.0 + std::abs(fd)));
  }
  return worst;
}

double check_jacobian(const NlpProblem& p, std::span<const double> x, double h) {
  require_size(p, x);
  const auto ad_eval = eval_constraints(p, x);
  const std::size_t n = x.size();
  const std::size_t m = p.num_constraints();
  std::vector<Ext> xe(x.begin(), x.end());
  std::vector<Ext> cp, cm;
  Ext f = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    xe[i] = static_cast<Ext>(x[i]) + h;
    eval_extended(p, xe, f, cp);
    xe[i] = static_cast<Ext>(x[i]) - h;
    eval_extended(p, xe, f, cm);
    xe[i] = x[i];
    for (std::size_t r = 0; r < m; ++r) {
      const double fd = static_cast<double>((cp[r] - cm[r]) / (2 * static_cast<Ext>(h)));
      worst = std::max(worst, std::abs(ad_eval.jacobian[r * n + i] - fd) / (1.0 + std::abs(fd)));
    }
  }
  return worst;
}

std::vector<double> shift_warm_start(std::span<const double> previous, std::size_t horizon) {
  const std::size_t n = kInputsPerStep * horizon;
  std::vector<double> out(n, 0.0);
  if (previous.size() != n || horizon == 0) return out;
  // Drop the first step and repeat the last one.
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t src = std::min(i + kInputsPerStep, n - kInputsPerStep + i % kInputsPerStep);
    out[i] = previous[src];
  }
  return out;
}

std::string dump_problem_json(const NlpProblem& p, std::span<const double> x0) {
  using nlohmann::json;
  auto finite_or_null = [](std::span<const double> v) {
    json arr = json::array();
    for (double d : v) arr.push_back(std::isfinite(d) ? json(d) : json(nullptr));
    return arr;
  };
  const auto& prm = p.params();
  json j;
  j["horizon"] = p.horizon();
  j["dt"] = prm.dt;
  j["dimension"] = p.dimension();
  j["num_constraints"] = p.num_constraints();
  j["layout"] = {{"decision", "x[6k+j], j = v1x, v1y, w1, v2x, v2y, w2"},
                 {"rows", "corridor[k] then caps[k] = (r_dist, r_align, r_soft, r_axis)"}};
  j["z0"] = p.initial_state().to_array();
  j["goal"] = p.goal().target.to_array();
  j["lower"] = finite_or_null(p.lower());
  j["upper"] = finite_or_null(p.upper());
  j["constraint_lower"] = finite_or_null(p.constraint_lower());
  j["constraint_upper"] = finite_or_null(p.constraint_upper());
  j["x0"] = std::vector<double>(x0.begin(), x0.end());
  return j.dump(2);
}

}  // namespace dockmpc
