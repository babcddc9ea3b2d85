// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dockmpc/coupling.hpp"
#include "dockmpc/nlp.hpp"
#include "dockmpc/scenario.hpp"
#include "dockmpc/solver.hpp"

namespace dockmpc {

enum class Phase { FarRangeRendezvous = 0, Closing = 1, FinalApproach = 2, Docked = 3 };
std::string to_string(Phase p);

struct DockLatch {
  LatchThresholds thresholds;
  bool docked = false;
  double dock_time = 0.0;
};

/// Warm-start data carried between receding-horizon solves.
struct WarmStart {
  std::vector<double> x;
  std::vector<double> multipliers;
  InputHistory history;
};

struct MpcStepResult {
  CentralInput applied;
  SolveResult solve;
  std::vector<PosePair<double>> predicted;
};

/// Solves one horizon from z toward goal and returns the clipped first input.
MpcStepResult mpc_step(const CentralState& z, const GoalState& goal, const ProblemParams& params,
                       const WarmStart& warm, const SolverSettings& settings,
                       const TraceSink& trace = {});

/// Shifts a solved horizon (decision vector and row multipliers) by one step.
WarmStart shift(const MpcStepResult& r, std::size_t horizon, const CentralInput& applied,
                const InputHistory& previous);

Phase classify_phase(const CentralState& z, const CouplingParams& p, const DockLatch& latch,
                     double close_range_d);

/// True when every latch threshold holds (closed bounds). `nu` is the input
/// that carried the plant into z.
bool latch_conditions(const CentralState& z, const CentralInput& nu, const CouplingParams& p,
                      const LatchThresholds& t);
DockLatch update_latch(const CentralState& z, const CentralInput& nu, const DockLatch& latch,
                       const CouplingParams& p, double now);

struct LogRecord {
  double t = 0.0;
  CentralState state;
  CentralInput input;  // applied from this state
  ResidualVector residuals;
  Phase phase = Phase::FarRangeRendezvous;
  std::string solver_status;
  std::array<bool, 2> active{true, true};
  bool docked = false;
  double off_axis = 0.0;  // exact-form off-axis angle
  double distance = 0.0;
};

struct TrajectoryLog {
  double dt = 0.25;
  std::vector<LogRecord> records;
};

struct RobotMetrics {
  double time = 0.0;
  double energy = 0.0;
  double distance = 0.0;
};

struct MetricsReport {
  std::array<RobotMetrics, 2> robots{};
  RobotMetrics total;
  double makespan = 0.0;
  std::vector<double> dock_times;
  std::vector<double> undock_times;
  int solves = 0;
  int solver_failures = 0;
  int cold_restarts = 0;
  double solver_wall_time = 0.0;
};

MetricsReport compute_metrics(const TrajectoryLog& log, const MetricsOptions& opts = {});

enum class Outcome { Completed, Timeout, NumericError };
std::string to_string(Outcome o);

struct LatchEvent {
  double time = 0.0;
  double arrival_speed = 0.0;    // relative speed of the input entering the latch state
  double departure_speed = 0.0;  // relative speed of the next applied input
  ResidualVector residuals;
  double gap = 0.0;
};

struct ScenarioResult {
  TrajectoryLog log;
  MetricsReport metrics;
  Outcome outcome = Outcome::Completed;
  std::vector<LatchEvent> latches;
  std::string message;
};

struct RunOptions {
  TraceSink trace;  // one line per receding-horizon step
  bool verbose_solver = false;
};

ScenarioResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opts = {});

}  // namespace dockmpc
