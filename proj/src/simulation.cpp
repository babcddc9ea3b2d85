// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockmpc/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dockmpc/dynamics.hpp"
#include "dockmpc/error.hpp"

namespace dockmpc {

std::string to_string(Phase p) {
  switch (p) {
    case Phase::FarRangeRendezvous:
      return "far_range";
    case Phase::Closing:
      return "closing";
    case Phase::FinalApproach:
      return "final_approach";
    case Phase::Docked:
      return "docked";
  }
  return "unknown";
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Completed:
      return "completed";
    case Outcome::Timeout:
      return "timeout";
    case Outcome::NumericError:
      return "numeric_error";
  }
  return "unknown";
}

MpcStepResult mpc_step(const CentralState& z, const GoalState& goal, const ProblemParams& params,
                       const WarmStart& warm, const SolverSettings& settings,
                       const TraceSink& trace) {
  const NlpProblem prob(z, goal, params, warm.history);
  std::vector<double> x0 = warm.x;
  if (x0.size() != prob.dimension()) x0.assign(prob.dimension(), 0.0);
  // After a mode switch the shifted plan can sit far outside the new caps.
  // Holding still keeps residuals at their current values, so prefer it when
  // it is the less violating start.
  {
    auto violation = [&](const std::vector<double>& x) {
      double f = 0.0;
      std::vector<double> c(prob.num_constraints());
      prob.evaluate<double>(x, f, std::span<double>(c));
      return detail::max_violation(c, prob.constraint_lower(), prob.constraint_upper());
    };
    std::vector<double> hold(prob.dimension(), 0.0);
    detail::project(x0, prob.lower(), prob.upper());
    const double v_warm = violation(x0);
    if (v_warm > settings.constraint_tol) {
      const double v_hold = violation(hold);
      if (std::isfinite(v_hold) && !(v_hold >= v_warm)) x0 = std::move(hold);
    }
  }

  MpcStepResult out;
  out.solve = solve(prob, std::move(x0), settings, warm.multipliers, trace);
  const auto& x = out.solve.x;
  const auto lo = prob.lower();
  const auto hi = prob.upper();
  std::array<double, 6> u{};
  for (std::size_t i = 0; i < kInputsPerStep; ++i) {
    const double v = std::isfinite(x[i]) ? x[i] : 0.0;
    u[i] = std::clamp(v, lo[i], hi[i]);
  }
  out.applied = {{u[0], u[1], u[2]}, {u[3], u[4], u[5]}};
  if (out.solve.status != SolveStatus::NumericError) out.predicted = prob.predict(x);
  return out;
}

WarmStart shift(const MpcStepResult& r, std::size_t horizon, const CentralInput& applied,
                const InputHistory& previous) {
  WarmStart w;
  w.x = shift_warm_start(r.solve.x, horizon);
  const auto& mult = r.solve.multipliers;
  if (mult.size() == 2 * 5 * horizon) {
    w.multipliers.assign(mult.size(), 0.0);
    auto move_row = [&](std::size_t dst, std::size_t src) {
      w.multipliers[2 * dst] = mult[2 * src];
      w.multipliers[2 * dst + 1] = mult[2 * src + 1];
    };
    for (std::size_t k = 0; k < horizon; ++k) {
      const std::size_t src = std::min(k + 1, horizon - 1);
      move_row(k, src);
      for (std::size_t j = 0; j < 4; ++j) move_row(horizon + 4 * k + j, horizon + 4 * src + j);
    }
  }
  w.history = {previous.newer, applied};
  return w;
}

namespace {

// Exact residuals, tolerating coincident robots (bearing-based terms read 0).
ResidualVector safe_residuals(const CentralState& z, const CentralInput& nu,
                              const CouplingParams& p, double& off_axis) {
  ResidualVector r;
  r.r_align = residual_alignment(z, p);
  r.r_dist = residual_distance(z, p);
  r.r_soft = residual_soft_docking(nu);
  if (center_distance(z) >= kCoincidenceGuard) {
    r.r_axis = residual_docking_axis(z, p);
    off_axis = off_axis_angle(z, p);
  } else {
    r.r_axis = 0.0;
    off_axis = 0.0;
  }
  return r;
}

}  // namespace

Phase classify_phase(const CentralState& z, const CouplingParams& p, const DockLatch& latch,
                     double close_range_d) {
  if (latch.docked) return Phase::Docked;
  if (std::abs(residual_docking_axis(z, p)) > p.half_cone) return Phase::FarRangeRendezvous;
  if (center_distance(z) > close_range_d) return Phase::Closing;
  return Phase::FinalApproach;
}

bool latch_conditions(const CentralState& z, const CentralInput& nu, const CouplingParams& p,
                      const LatchThresholds& t) {
  if (center_distance(z) < kCoincidenceGuard) return false;
  const ResidualVector r = residual_vector(z, nu, p);
  return std::abs(r.r_axis) <= t.axis && std::abs(r.r_align) <= t.align &&
         std::abs(center_distance(z) - p.delta_r) <= t.gap && std::sqrt(r.r_soft) <= t.speed;
}

DockLatch update_latch(const CentralState& z, const CentralInput& nu, const DockLatch& latch,
                       const CouplingParams& p, double now) {
  DockLatch out = latch;
  if (!out.docked && latch_conditions(z, nu, p, out.thresholds)) {
    out.docked = true;
    out.dock_time = now;
  }
  return out;
}

MetricsReport compute_metrics(const TrajectoryLog& log, const MetricsOptions& opts) {
  MetricsReport m;
  const auto& rec = log.records;
  const double dt = log.dt;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    const auto& r = rec[i];
    const std::array<ControlInput, 2> u{r.input.robot1, r.input.robot2};
    const std::array<RobotState, 2> s{r.state.robot1, r.state.robot2};
    for (std::size_t k = 0; k < 2; ++k) {
      if (!r.active[k]) continue;
      auto& rm = m.robots[k];
      rm.time += dt;
      rm.energy += (u[k].vx * u[k].vx + u[k].vy * u[k].vy) * dt +
                   opts.rotational_weight * u[k].omega * u[k].omega * dt;
      if (i + 1 < rec.size()) {
        const RobotState& nxt = k == 0 ? rec[i + 1].state.robot1 : rec[i + 1].state.robot2;
        rm.distance += std::hypot(nxt.px() - s[k].px(), nxt.py() - s[k].py());
      }
    }
    if (i > 0 && r.docked != rec[i - 1].docked) {
      (r.docked ? m.dock_times : m.undock_times).push_back(r.t);
    }
  }
  for (const auto& rm : m.robots) {
    m.total.time += rm.time;
    m.total.energy += rm.energy;
    m.total.distance += rm.distance;
  }
  m.makespan = std::max(m.robots[0].time, m.robots[1].time);
  return m;
}

namespace {

enum class Mode { Free, Coupling, Docked };

class ScenarioRunner {
 public:
  ScenarioRunner(const ScenarioConfig& cfg, const RunOptions& opts)
      : cfg_(cfg), opts_(opts), z_(cfg.initial), rng_(cfg.seed) {
    latch_.thresholds = cfg.latch;
    goal_ = {z_.robot1.pose(), z_.robot2.pose()};
    result_.log.dt = cfg.dt;
  }

  ScenarioResult run() {
    const long max_steps = static_cast<long>(std::ceil(cfg_.timeout / cfg_.dt - 1e-9));
    const TimeStep dt{cfg_.dt};
    std::normal_distribution<double> noise(0.0, std::max(cfg_.disturbance_std, 1e-300));
    bool pending_departure = false;

    for (;;) {
      process_events();
      if (done_[0] && done_[1]) {
        result_.outcome = Outcome::Completed;
        break;
      }
      if (step_ >= max_steps) {
        result_.outcome = Outcome::Timeout;
        result_.message = "timeout after " + std::to_string(t_) + " s";
        break;
      }

      const ProblemParams params = problem_params();
      const GoalState goal{CentralState::from_poses({goal_[0], goal_[1]})};
      MpcStepResult step = mpc_step(z_, goal, params, warm_, cfg_.solver,
                                      opts_.verbose_solver ? opts_.trace : TraceSink{});
      ++result_.metrics.solves;
      result_.metrics.solver_wall_time += step.solve.wall_time;
      if (step.solve.status == SolveStatus::NumericError) {
        result_.outcome = Outcome::NumericError;
        result_.message = step.solve.message;
        break;
      }
      const bool failed = step.solve.status != SolveStatus::Converged;
      if (failed) {
        ++result_.metrics.solver_failures;
        ++consecutive_failures_;
      } else {
        consecutive_failures_ = 0;
      }

      LogRecord rec = make_record(step.applied, to_string(step.solve.status));
      result_.log.records.push_back(rec);
      if (pending_departure && !result_.latches.empty()) {
        result_.latches.back().departure_speed = std::sqrt(rec.residuals.r_soft);
        pending_departure = false;
      }
      if (opts_.trace) {
        opts_.trace("t " + std::to_string(t_) + " phase " + to_string(rec.phase) + " status " +
                    rec.solver_status + " f " + std::to_string(step.solve.objective) + " viol " +
                    std::to_string(step.solve.max_violation) + " d " +
                    std::to_string(rec.distance));
      }

      const InputHistory prev = warm_.history;
      warm_ = shift(step, static_cast<std::size_t>(cfg_.horizon), step.applied, prev);
      // Multipliers from a failed solve reflect a runaway penalty; drop them.
      if (step.solve.status == SolveStatus::InfeasibleStall ||
          step.solve.status == SolveStatus::NumericError) {
        warm_.multipliers.clear();
      }
      if (consecutive_failures_ >= 2) {
        warm_.x.clear();
        warm_.multipliers.clear();
        consecutive_failures_ = 0;
        ++result_.metrics.cold_restarts;
      }

      CentralState next = step_central(z_, step.applied, dt);
      if (cfg_.disturbance_std > 0.0) {
        next.robot1.set_position(next.robot1.px() + noise(rng_), next.robot1.py() + noise(rng_));
        next.robot2.set_position(next.robot2.px() + noise(rng_), next.robot2.py() + noise(rng_));
      }
      z_ = next;
      ++step_;
      t_ = static_cast<double>(step_) * cfg_.dt;

      if (mode_ == Mode::Coupling) {
        latch_ = update_latch(z_, step.applied, latch_, cfg_.coupling, t_);
        if (latch_.docked) {
          mode_ = Mode::Docked;
          LatchEvent ev;
          ev.time = t_;
          double off = 0.0;
          ev.residuals = safe_residuals(z_, step.applied, cfg_.coupling, off);
          ev.arrival_speed = std::sqrt(ev.residuals.r_soft);
          ev.gap = std::abs(center_distance(z_) - cfg_.coupling.delta_r);
          result_.latches.push_back(ev);
          pending_departure = true;
        }
      }
    }

    LogRecord last = make_record(CentralInput{}, "terminal");
    last.active = {false, false};
    result_.log.records.push_back(last);

    MetricsReport stats = result_.metrics;
    result_.metrics = compute_metrics(result_.log, cfg_.metrics);
    result_.metrics.solves = stats.solves;
    result_.metrics.solver_failures = stats.solver_failures;
    result_.metrics.cold_restarts = stats.cold_restarts;
    result_.metrics.solver_wall_time = stats.solver_wall_time;
    return result_;
  }

 private:
  bool reached(std::size_t r) const {
    const Pose2<double> p = r == 0 ? z_.robot1.pose() : z_.robot2.pose();
    const auto& g = goal_[r];
    return std::hypot(p.x - g.x, p.y - g.y) <= cfg_.goal_tolerance.position &&
           std::abs(wrap_to_pm_pi(p.theta - g.theta)) <= cfg_.goal_tolerance.heading;
  }

  void set_pair_goal(const Pose2<double>& robot1) {
    goal_[0] = robot1;
    goal_[1] = docked_partner_pose(robot1, cfg_.coupling);
  }

  void process_events() {
    const auto& script = cfg_.script;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t r = 0; r < 2; ++r) {
        if (done_[r]) continue;
        if (cursor_[r] >= script.size()) {
          done_[r] = true;
          changed = true;
          continue;
        }
        const ScriptEvent& ev = script[cursor_[r]];
        if (ev.joint()) continue;
        const std::size_t who = ev.target == EventTarget::Robot1 ? 0 : 1;
        if (who != r) {
          ++cursor_[r];
          changed = true;
          continue;
        }
        if (!started_[r]) {
          goal_[r] = ev.pose;
          started_[r] = true;
        }
        if (reached(r)) {
          ++cursor_[r];
          started_[r] = false;
          changed = true;
        }
      }
      if (done_[0] || done_[1] || cursor_[0] != cursor_[1] || cursor_[0] >= script.size()) continue;
      const ScriptEvent& ev = script[cursor_[0]];
      if (!ev.joint()) continue;
      if (!joint_started_) {
        enter_joint(ev);
        joint_started_ = true;
      }
      if (joint_complete(ev)) {
        ++cursor_[0];
        ++cursor_[1];
        joint_started_ = false;
        started_ = {false, false};
        changed = true;
      }
    }
  }

  void enter_joint(const ScriptEvent& ev) {
    switch (ev.kind) {
      case EventKind::Couple:
        set_pair_goal(ev.pose);
        if (mode_ != Mode::Docked) mode_ = Mode::Coupling;
        break;
      case EventKind::Transfer:
        transfer_start_ = t_;
        break;
      case EventKind::Uncouple:
        mode_ = Mode::Free;
        latch_.docked = false;
        phase_ = Phase::FarRangeRendezvous;
        break;
      case EventKind::Goto:
        set_pair_goal(ev.pose);
        break;
    }
  }

  bool joint_complete(const ScriptEvent& ev) const {
    switch (ev.kind) {
      case EventKind::Couple:
        return latch_.docked;
      case EventKind::Transfer:
        return t_ - transfer_start_ >= ev.duration - 1e-9;
      case EventKind::Uncouple:
        return true;
      case EventKind::Goto:
        return reached(0) && reached(1);
    }
    return true;
  }

  ProblemParams problem_params() const {
    ProblemParams p;
    p.coupling = cfg_.coupling;
    p.weights = cfg_.weights;
    p.terminal = cfg_.terminal;
    p.dt = cfg_.dt;
    p.horizon = cfg_.horizon;
    p.bounds = cfg_.bounds;
    p.robot_active = {!done_[0], !done_[1]};
    const bool coupled_controller = cfg_.controller == ControllerKind::Coupling;
    if (done_[0] || done_[1]) {
      p.weights = cfg_.weights.without_coupling();
      p.caps = SlackCaps::unbounded();
      p.collision = CollisionMode::Off;
    } else if (!coupled_controller || mode_ == Mode::Free) {
      p.weights = cfg_.weights.without_coupling();
      p.caps = SlackCaps::unbounded();
      p.collision = coupled_controller ? CollisionMode::Corridor : CollisionMode::KeepOut;
    } else {
      p.caps = mode_ == Mode::Docked ? cfg_.docked_caps : cfg_.caps;
      p.collision = CollisionMode::Corridor;
    }
    return p;
  }

  LogRecord make_record(const CentralInput& applied, std::string status) {
    LogRecord rec;
    rec.t = t_;
    rec.state = z_;
    rec.input = applied;
    rec.residuals = safe_residuals(z_, applied, cfg_.coupling, rec.off_axis);
    rec.distance = center_distance(z_);
    rec.active = {!done_[0], !done_[1]};
    rec.docked = latch_.docked;
    Phase cls = Phase::FarRangeRendezvous;
    if (rec.distance >= kCoincidenceGuard) {
      cls = classify_phase(z_, cfg_.coupling, latch_, cfg_.close_range_d);
    }
    phase_ = std::max(phase_, cls);
    if (!latch_.docked && phase_ == Phase::Docked) phase_ = cls;
    rec.phase = phase_;
    rec.solver_status = std::move(status);
    return rec;
  }

  const ScenarioConfig& cfg_;
  const RunOptions& opts_;
  CentralState z_;
  std::mt19937_64 rng_;
  DockLatch latch_;
  std::array<Pose2<double>, 2> goal_;
  std::array<std::size_t, 2> cursor_{0, 0};
  std::array<bool, 2> started_{false, false};
  std::array<bool, 2> done_{false, false};
  bool joint_started_ = false;
  Mode mode_ = Mode::Free;
  Phase phase_ = Phase::FarRangeRendezvous;
  double transfer_start_ = 0.0;
  WarmStart warm_;
  int consecutive_failures_ = 0;
  long step_ = 0;
  double t_ = 0.0;
  ScenarioResult result_;
};

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  ScenarioRunner runner(cfg, opts);
  return runner.run();
}

}  // namespace dockmpc
