// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>

#include "dockmpc/angles.hpp"

namespace dockmpc {

// Raw pose/twist records used inside evaluators. Headings are unwrapped reals
// and T may be a dual number.
template <class T>
struct Pose2 {
  T x{};
  T y{};
  T theta{};
};

template <class T>
struct Twist2 {
  T vx{};
  T vy{};
  T omega{};
};

template <class T>
struct PosePair {
  Pose2<T> r1;
  Pose2<T> r2;
};

template <class T>
struct TwistPair {
  Twist2<T> r1;
  Twist2<T> r2;
};

/// Planar pose of one robot. Heading is kept in [0, 2pi).
class RobotState {
 public:
  RobotState() = default;
  RobotState(double px, double py, double theta);

  double px() const { return px_; }
  double py() const { return py_; }
  double theta() const { return theta_; }

  void set_position(double px, double py);
  void set_theta(double theta);

  Pose2<double> pose() const { return {px_, py_, theta_}; }
  static RobotState from_pose(const Pose2<double>& p) { return {p.x, p.y, p.theta}; }

  friend bool operator==(const RobotState&, const RobotState&) = default;

 private:
  double px_ = 0.0;
  double py_ = 0.0;
  double theta_ = 0.0;
};

/// Body velocities of one robot.
struct ControlInput {
  double vx = 0.0;
  double vy = 0.0;
  double omega = 0.0;

  ControlInput() = default;
  ControlInput(double vx_, double vy_, double omega_);

  Twist2<double> twist() const { return {vx, vy, omega}; }
  friend bool operator==(const ControlInput&, const ControlInput&) = default;
};

/// Coupling interface mounted on the disk margin, rotated by delta_phi from the
/// heading.
class DockingInterface {
 public:
  DockingInterface(double delta_phi, double radius);

  double delta_phi() const { return delta_phi_; }
  double radius() const { return radius_; }

  friend bool operator==(const DockingInterface&, const DockingInterface&) = default;

 private:
  double delta_phi_;
  double radius_;
};

struct CentralState {
  RobotState robot1;
  RobotState robot2;

  PosePair<double> poses() const { return {robot1.pose(), robot2.pose()}; }
  static CentralState from_poses(const PosePair<double>& p) {
    return {RobotState::from_pose(p.r1), RobotState::from_pose(p.r2)};
  }
  std::array<double, 6> to_array() const {
    return {robot1.px(), robot1.py(), robot1.theta(), robot2.px(), robot2.py(), robot2.theta()};
  }
  friend bool operator==(const CentralState&, const CentralState&) = default;
};

struct CentralInput {
  ControlInput robot1;
  ControlInput robot2;

  TwistPair<double> twists() const { return {robot1.twist(), robot2.twist()}; }
  static CentralInput from_twists(const TwistPair<double>& t) {
    return {{t.r1.vx, t.r1.vy, t.r1.omega}, {t.r2.vx, t.r2.vy, t.r2.omega}};
  }
  std::array<double, 6> to_array() const {
    return {robot1.vx, robot1.vy, robot1.omega, robot2.vx, robot2.vy, robot2.omega};
  }
  friend bool operator==(const CentralInput&, const CentralInput&) = default;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Heading of the docking axis, wrap_to_2pi(theta + delta_phi).
double docking_heading(const RobotState& s, const DockingInterface& d);

/// Center of the docking interface on the disk margin.
Point2 docking_point(const RobotState& s, const DockingInterface& d);

}  // namespace dockmpc
