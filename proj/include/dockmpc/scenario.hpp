// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dockmpc/coupling.hpp"
#include "dockmpc/nlp.hpp"
#include "dockmpc/objective.hpp"
#include "dockmpc/solver.hpp"
#include "dockmpc/types.hpp"

namespace dockmpc {

enum class EventKind { Goto, Couple, Transfer, Uncouple };
enum class EventTarget { Robot1, Robot2, Pair };

/// One scripted step. Gotos of different robots run concurrently; the joint
/// events (couple, transfer, uncouple, pair goto) synchronize both robots.
struct ScriptEvent {
  EventKind kind = EventKind::Goto;
  EventTarget target = EventTarget::Pair;
  Pose2<double> pose{};  // goto/couple: robot 1 pose for pair targets
  double duration = 0.0;  // transfer

  bool joint() const { return kind != EventKind::Goto || target == EventTarget::Pair; }
  static ScriptEvent go(EventTarget who, double x, double y, double theta) {
    return {EventKind::Goto, who, {x, y, theta}, 0.0};
  }
  static ScriptEvent couple(double x, double y, double theta) {
    return {EventKind::Couple, EventTarget::Pair, {x, y, theta}, 0.0};
  }
  static ScriptEvent transfer(double seconds) {
    return {EventKind::Transfer, EventTarget::Pair, {}, seconds};
  }
  static ScriptEvent uncouple() { return {EventKind::Uncouple, EventTarget::Pair, {}, 0.0}; }
};

struct LatchThresholds {
  double axis = deg2rad(2.0);
  double align = deg2rad(2.0);
  double gap = 0.01;
  double speed = 0.05;
};

struct GoalTolerance {
  double position = 0.05;
  double heading = deg2rad(5.0);
};

enum class ControllerKind {
  Coupling,  // docking-aware controller
  Baseline,  // coupling weights zeroed, full keep-out disk
};

struct MetricsOptions {
  /// Weight of omega^2 in the energy sum; 0 counts translation only.
  double rotational_weight = 0.0;
};

struct ScenarioConfig {
  std::string name = "custom";
  CentralState initial;
  CouplingParams coupling;
  WeightVector weights;
  TerminalWeights terminal;
  SlackCaps caps = SlackCaps::approach();
  SlackCaps docked_caps = SlackCaps::docked();
  double dt = 0.25;
  int horizon = 20;
  InputBounds bounds;
  std::vector<ScriptEvent> script;
  LatchThresholds latch;
  GoalTolerance goal_tolerance;
  double close_range_d = 1.0;
  double timeout = 60.0;
  ControllerKind controller = ControllerKind::Coupling;
  MetricsOptions metrics;
  SolverSettings solver;
  std::uint64_t seed = 0;
  /// Standard deviation of additive plant position noise [m]; 0 disables.
  double disturbance_std = 0.0;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Robot-2 pose that is docked to robot 1 at the given pose.
Pose2<double> docked_partner_pose(const Pose2<double>& robot1, const CouplingParams& p);

/// Named experiment parameterizations: exp1, exp2, exp3_coupled, exp3_baseline.
ScenarioConfig preset(const std::string& name);
std::vector<std::string> preset_names();

ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& json_text);
std::string save_config(const ScenarioConfig& cfg);

}  // namespace dockmpc
