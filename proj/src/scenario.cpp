// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockmpc/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "dockmpc/error.hpp"
#include "json.hpp"

namespace dockmpc {

using nlohmann::json;

Pose2<double> docked_partner_pose(const Pose2<double>& robot1, const CouplingParams& p) {
  const double th1d = robot1.theta + p.iface1.delta_phi();
  // Robot 2's interface must face back along robot 1's docking axis.
  const double th2 = wrap_to_2pi(th1d + kPi - p.iface2.delta_phi());
  return {robot1.x + p.delta_r * std::cos(th1d), robot1.y + p.delta_r * std::sin(th1d), th2};
}

void ScenarioConfig::validate() const {
  // Each section is checked on its own so the error names the config field.
  auto section = [](const char* field, auto&& check) {
    try {
      check();
    } catch (const DomainError& e) {
      throw ConfigError(std::string(field) + ": " + e.what());
    }
  };
  section("coupling", [&] { coupling.validate(); });
  section("weights", [&] { weights.validate(); });
  section("terminal_weights", [&] { terminal.validate(); });
  section("slack_caps", [&] { caps.validate(); });
  section("docked_caps", [&] { docked_caps.validate(); });
  section("dt", [&] { TimeStep{dt}; });
  section("horizon", [&] {
    if (horizon < 2) throw DomainError("must be at least 2");
  });
  section("input_bounds", [&] { bounds.validate(); });
  section("solver", [&] { solver.validate(); });
  if (!(timeout > 0.0)) throw ConfigError("timeout: must be positive");
  if (!(close_range_d > 0.0)) throw ConfigError("close_range_d: must be positive");
  if (!(goal_tolerance.position > 0.0) || !(goal_tolerance.heading > 0.0)) {
    throw ConfigError("goal_tolerance: must be positive");
  }
  if (!(latch.axis >= 0.0 && latch.align >= 0.0 && latch.gap >= 0.0 && latch.speed >= 0.0)) {
    throw ConfigError("latch: thresholds must be nonnegative");
  }
  if (!(disturbance_std >= 0.0)) throw ConfigError("disturbance_std: must be nonnegative");
  if (!(metrics.rotational_weight >= 0.0)) {
    throw ConfigError("metrics.rotational_weight: must be nonnegative");
  }

  bool coupled = false;
  for (std::size_t i = 0; i < script.size(); ++i) {
    const auto& ev = script[i];
    const std::string where = "script[" + std::to_string(i) + "]";
    switch (ev.kind) {
      case EventKind::Couple:
        if (coupled) throw ConfigError(where + ": couple while already coupled");
        if (controller == ControllerKind::Baseline) {
          throw ConfigError(where + ": couple is not available to the baseline controller");
        }
        coupled = true;
        break;
      case EventKind::Transfer:
        if (!coupled) throw ConfigError(where + ": transfer requires a coupled pair");
        if (!(ev.duration >= 0.0)) throw ConfigError(where + ": transfer duration must be >= 0");
        break;
      case EventKind::Uncouple:
        if (!coupled) throw ConfigError(where + ": uncouple before couple");
        coupled = false;
        break;
      case EventKind::Goto:
        if (coupled && ev.target != EventTarget::Pair) {
          throw ConfigError(where + ": single-robot goto while coupled");
        }
        break;
    }
    if (!std::isfinite(ev.pose.x) || !std::isfinite(ev.pose.y) || !std::isfinite(ev.pose.theta)) {
      throw ConfigError(where + ": pose must be finite");
    }
  }
}

namespace {

ScenarioConfig common() {
  ScenarioConfig c;
  c.initial = {{0.0, -2.0, 0.0}, {0.0, 2.0, 0.0}};
  c.coupling.iface1 = DockingInterface(deg2rad(90.0), 0.1);
  c.coupling.iface2 = DockingInterface(deg2rad(-90.0), 0.1);
  c.coupling.delta_r = 0.2;
  c.coupling.half_cone = deg2rad(15.0);
  c.weights = {30.0, 1000.0, 1.0, 200.0, 0.1, 1.0};
  c.terminal.w = {1.0, 1.0, 200.0, 1.0, 1.0, 200.0};
  c.horizon = 20;
  c.dt = 5.0 / 20.0;
  return c;
}

}  // namespace

std::vector<std::string> preset_names() { return {"exp1", "exp2", "exp3_coupled", "exp3_baseline"}; }

ScenarioConfig preset(const std::string& name) {
  ScenarioConfig c = common();
  c.name = name;
  if (name == "exp1" || name == "exp2") {
    if (name == "exp2") std::swap(c.initial.robot1, c.initial.robot2);
    c.script = {ScriptEvent::couple(4.0, 0.0, 0.0), ScriptEvent::go(EventTarget::Pair, 4.0, 0.0, 0.0)};
    c.timeout = 60.0;
    return c;
  }
  if (name == "exp3_coupled") {
    c.script = {ScriptEvent::go(EventTarget::Robot1, 2.0, 0.0, 0.0),
                ScriptEvent::go(EventTarget::Robot2, 2.0, 1.0, 0.0),
                ScriptEvent::couple(8.0, -0.1, 0.0),
                ScriptEvent::transfer(7.0),
                ScriptEvent::uncouple(),
                ScriptEvent::go(EventTarget::Robot1, 8.0, -2.0, 0.0),
                ScriptEvent::go(EventTarget::Robot2, 8.0, 2.0, 0.0)};
    c.timeout = 90.0;
    return c;
  }
  if (name == "exp3_baseline") {
    c.controller = ControllerKind::Baseline;
    c.script = {ScriptEvent::go(EventTarget::Robot1, 2.0, 0.0, 0.0),
                ScriptEvent::go(EventTarget::Robot2, 2.0, 1.0, 0.0),
                ScriptEvent::go(EventTarget::Robot1, 8.0, -2.0, 0.0),
                ScriptEvent::go(EventTarget::Robot2, 8.0, 2.0, 0.0),
                ScriptEvent::go(EventTarget::Robot2, 8.0, -2.0, 0.0)};
    c.timeout = 90.0;
    return c;
  }
  throw ConfigError("unknown preset '" + name + "'");
}

// ---------------------------------------------------------------------------
// JSON schema (version 1). Angles are in degrees.

namespace {

class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(field(key) + ": expected a number");
    return v.get<double>();
  }
  double degrees(const std::string& key, double fallback_rad) {
    return deg2rad(number(key, rad2deg(fallback_rad)));
  }
  double required_number(const std::string& key) {
    if (!has(key)) throw ConfigError(field(key) + ": required");
    return number(key, 0.0);
  }
  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(field(key) + ": expected a boolean");
    return v.get<bool>();
  }
  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(field(key) + ": expected a string");
    return v.get<std::string>();
  }
  std::vector<double> numbers(const std::string& key, std::size_t count) {
    const auto& v = j_.at(key);
    if (!v.is_array() || v.size() != count) {
      throw ConfigError(field(key) + ": expected an array of " + std::to_string(count) + " numbers");
    }
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError(field(key) + ": expected numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }
  Reader child(const std::string& key) { return Reader(j_.at(key), field(key)); }
  const json& raw(const std::string& key) const { return j_.at(key); }
  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(field(it.key()) + ": unknown field");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

Pose2<double> pose_from(Reader& r, const std::string& key) {
  const auto v = r.numbers(key, 3);
  return {v[0], v[1], deg2rad(v[2])};
}

// Degrees for output: the shortest decimal with at most 12 significant digits
// that converts back to the same radians, else the full value.
double to_deg(double rad) {
  const double deg = rad2deg(rad);
  for (int digits = 1; digits <= 12; ++digits) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*g", digits, deg);
    const double d = std::strtod(buf, nullptr);
    if (deg2rad(d) == rad) return d;
  }
  return deg;
}

json pose_json(const Pose2<double>& p) { return json::array({p.x, p.y, to_deg(p.theta)}); }

EventTarget target_from(const json& v, const std::string& where) {
  if (v.is_number_integer()) {
    const int i = v.get<int>();
    if (i == 1) return EventTarget::Robot1;
    if (i == 2) return EventTarget::Robot2;
  } else if (v.is_string() && v.get<std::string>() == "pair") {
    return EventTarget::Pair;
  }
  throw ConfigError(where + ".robot: expected 1, 2 or \"pair\"");
}

json target_json(EventTarget t) {
  switch (t) {
    case EventTarget::Robot1:
      return 1;
    case EventTarget::Robot2:
      return 2;
    case EventTarget::Pair:
      return "pair";
  }
  return "pair";
}

ScriptEvent event_from(Reader r, const std::string& where) {
  ScriptEvent ev;
  const std::string kind = r.string("event", "");
  if (kind == "goto") {
    ev.kind = EventKind::Goto;
    if (!r.has("robot")) throw ConfigError(where + ".robot: required");
    ev.target = target_from(r.raw("robot"), where);
    if (!r.has("pose")) throw ConfigError(where + ".pose: required");
    ev.pose = pose_from(r, "pose");
  } else if (kind == "couple") {
    ev.kind = EventKind::Couple;
    if (!r.has("pose")) throw ConfigError(where + ".pose: required");
    ev.pose = pose_from(r, "pose");
  } else if (kind == "transfer") {
    ev.kind = EventKind::Transfer;
    ev.duration = r.required_number("duration");
  } else if (kind == "uncouple") {
    ev.kind = EventKind::Uncouple;
  } else {
    throw ConfigError(where + ".event: expected goto, couple, transfer or uncouple");
  }
  r.finish();
  return ev;
}

json event_json(const ScriptEvent& ev) {
  switch (ev.kind) {
    case EventKind::Goto:
      return {{"event", "goto"}, {"robot", target_json(ev.target)}, {"pose", pose_json(ev.pose)}};
    case EventKind::Couple:
      return {{"event", "couple"}, {"pose", pose_json(ev.pose)}};
    case EventKind::Transfer:
      return {{"event", "transfer"}, {"duration", ev.duration}};
    case EventKind::Uncouple:
      return {{"event", "uncouple"}};
  }
  return {};
}

json caps_json(const SlackCaps& c) {
  json a = json::array();
  for (double e : c.eps) a.push_back(std::isfinite(e) ? json(e) : json(nullptr));
  return a;
}

SlackCaps caps_from(Reader& r, const std::string& key, const SlackCaps& fallback) {
  if (!r.has(key)) return fallback;
  const auto& v = r.raw(key);
  if (!v.is_array() || v.size() != 4) throw ConfigError(r.field(key) + ": expected 4 entries");
  SlackCaps c;
  for (std::size_t i = 0; i < 4; ++i) {
    if (v[i].is_null()) {
      c.eps[i] = kInf;
    } else if (v[i].is_number()) {
      c.eps[i] = v[i].get<double>();
    } else {
      throw ConfigError(r.field(key) + ": expected numbers or null");
    }
  }
  return c;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw ConfigError("schema: required (empty document)");
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  Reader root(j, "");
  if (!root.has("schema")) throw ConfigError("schema: required");
  if (root.raw("schema") != 1) throw ConfigError("schema: unsupported version (expected 1)");

  ScenarioConfig c;
  c.name = root.string("name", c.name);

  if (!root.has("initial")) throw ConfigError("initial: required");
  {
    Reader r = root.child("initial");
    if (!r.has("robot1")) throw ConfigError("initial.robot1: required");
    if (!r.has("robot2")) throw ConfigError("initial.robot2: required");
    const auto p1 = pose_from(r, "robot1");
    const auto p2 = pose_from(r, "robot2");
    r.finish();
    c.initial = {RobotState::from_pose(p1), RobotState::from_pose(p2)};
  }

  try {
    if (root.has("interfaces")) {
      Reader r = root.child("interfaces");
      const double radius = r.number("radius", c.coupling.iface1.radius());
      const double d1 = r.degrees("robot1_deg", c.coupling.iface1.delta_phi());
      const double d2 = r.degrees("robot2_deg", c.coupling.iface2.delta_phi());
      r.finish();
      c.coupling.iface1 = DockingInterface(d1, radius);
      c.coupling.iface2 = DockingInterface(d2, radius);
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("interfaces: ") + e.what());
  }

  if (root.has("coupling")) {
    Reader r = root.child("coupling");
    auto& k = c.coupling;
    k.delta_r = r.number("delta_r", k.delta_r);
    k.r_ca = r.number("r_ca", k.r_ca);
    k.half_cone = r.degrees("half_cone_deg", k.half_cone);
    k.sharpness = r.number("sharpness", k.sharpness);
    k.corridor_tol = r.number("corridor_tol", k.corridor_tol);
    k.contact_allowance = r.number("contact_allowance", k.contact_allowance);
    k.contact_min_distance = r.number("contact_min_distance", k.contact_min_distance);
    k.literal_distance = r.boolean("literal_distance", k.literal_distance);
    r.finish();
  }

  if (root.has("weights")) {
    const auto v = root.numbers("weights", 6);
    c.weights = {v[0], v[1], v[2], v[3], v[4], v[5]};
  }
  if (root.has("terminal_weights")) {
    const auto v = root.numbers("terminal_weights", 6);
    std::copy(v.begin(), v.end(), c.terminal.w.begin());
  }
  c.caps = caps_from(root, "slack_caps", c.caps);
  c.docked_caps = caps_from(root, "docked_caps", c.docked_caps);
  c.dt = root.number("dt", c.dt);
  if (root.has("horizon")) {
    const auto& v = root.raw("horizon");
    if (!v.is_number_integer()) throw ConfigError("horizon: expected an integer");
    c.horizon = v.get<int>();
  }
  if (root.has("input_bounds")) {
    Reader r = root.child("input_bounds");
    c.bounds.v_max = r.number("v_max", c.bounds.v_max);
    c.bounds.omega_max = r.degrees("omega_max_deg", c.bounds.omega_max);
    r.finish();
  }
  if (root.has("latch")) {
    Reader r = root.child("latch");
    c.latch.axis = r.degrees("axis_deg", c.latch.axis);
    c.latch.align = r.degrees("align_deg", c.latch.align);
    c.latch.gap = r.number("gap", c.latch.gap);
    c.latch.speed = r.number("speed", c.latch.speed);
    r.finish();
  }
  if (root.has("goal_tolerance")) {
    Reader r = root.child("goal_tolerance");
    c.goal_tolerance.position = r.number("position", c.goal_tolerance.position);
    c.goal_tolerance.heading = r.degrees("heading_deg", c.goal_tolerance.heading);
    r.finish();
  }
  c.close_range_d = root.number("close_range_d", c.close_range_d);
  c.timeout = root.number("timeout", c.timeout);
  {
    const std::string kind = root.string("controller", "coupling");
    if (kind == "coupling") {
      c.controller = ControllerKind::Coupling;
    } else if (kind == "baseline") {
      c.controller = ControllerKind::Baseline;
    } else {
      throw ConfigError("controller: expected \"coupling\" or \"baseline\"");
    }
  }
  if (root.has("metrics")) {
    Reader r = root.child("metrics");
    c.metrics.rotational_weight = r.number("rotational_weight", c.metrics.rotational_weight);
    r.finish();
  }
  if (root.has("solver")) {
    Reader r = root.child("solver");
    auto& s = c.solver;
    auto integer = [&](const std::string& key, int fallback) {
      if (!r.has(key)) return fallback;
      const auto& v = r.raw(key);
      if (!v.is_number_integer()) throw ConfigError(r.field(key) + ": expected an integer");
      return v.get<int>();
    };
    s.max_outer = integer("max_outer", s.max_outer);
    s.max_inner = integer("max_inner", s.max_inner);
    s.memory = integer("memory", s.memory);
    s.mu0 = r.number("mu0", s.mu0);
    s.mu_growth = r.number("mu_growth", s.mu_growth);
    s.constraint_tol = r.number("constraint_tol", s.constraint_tol);
    s.gradient_tol = r.number("gradient_tol", s.gradient_tol);
    s.step_tol = r.number("step_tol", s.step_tol);
    s.armijo = r.number("armijo", s.armijo);
    s.backtrack = r.number("backtrack", s.backtrack);
    r.finish();
  }
  if (root.has("seed")) {
    const auto& v = root.raw("seed");
    if (!v.is_number_unsigned() && !v.is_number_integer()) throw ConfigError("seed: expected an integer");
    c.seed = v.get<std::uint64_t>();
  }
  c.disturbance_std = root.number("disturbance_std", c.disturbance_std);

  if (!root.has("script")) throw ConfigError("script: required");
  const auto& s = root.raw("script");
  if (!s.is_array()) throw ConfigError("script: expected an array");
  for (std::size_t i = 0; i < s.size(); ++i) {
    const std::string where = "script[" + std::to_string(i) + "]";
    c.script.push_back(event_from(Reader(s[i], where), where));
  }
  root.finish();
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw ConfigError("schema: required (empty config file '" + path + "')");
  }
  return parse_config(text);
}

std::string save_config(const ScenarioConfig& c) {
  json j;
  j["schema"] = 1;
  j["name"] = c.name;
  j["initial"] = {{"robot1", pose_json(c.initial.robot1.pose())},
                  {"robot2", pose_json(c.initial.robot2.pose())}};
  j["interfaces"] = {{"robot1_deg", to_deg(c.coupling.iface1.delta_phi())},
                     {"robot2_deg", to_deg(c.coupling.iface2.delta_phi())},
                     {"radius", c.coupling.iface1.radius()}};
  j["coupling"] = {{"delta_r", c.coupling.delta_r},
                   {"r_ca", c.coupling.r_ca},
                   {"half_cone_deg", to_deg(c.coupling.half_cone)},
                   {"sharpness", c.coupling.sharpness},
                   {"corridor_tol", c.coupling.corridor_tol},
                   {"contact_allowance", c.coupling.contact_allowance},
                   {"contact_min_distance", c.coupling.contact_min_distance},
                   {"literal_distance", c.coupling.literal_distance}};
  const auto& w = c.weights;
  j["weights"] = {w.lambda_dr, w.lambda_dtheta, w.lambda_dv, w.lambda_dphi, w.lambda_j, w.lambda_omega};
  j["terminal_weights"] = c.terminal.w;
  j["slack_caps"] = caps_json(c.caps);
  j["docked_caps"] = caps_json(c.docked_caps);
  j["dt"] = c.dt;
  j["horizon"] = c.horizon;
  j["input_bounds"] = {{"v_max", c.bounds.v_max}, {"omega_max_deg", to_deg(c.bounds.omega_max)}};
  j["latch"] = {{"axis_deg", to_deg(c.latch.axis)},
                {"align_deg", to_deg(c.latch.align)},
                {"gap", c.latch.gap},
                {"speed", c.latch.speed}};
  j["goal_tolerance"] = {{"position", c.goal_tolerance.position},
                         {"heading_deg", to_deg(c.goal_tolerance.heading)}};
  j["close_range_d"] = c.close_range_d;
  j["timeout"] = c.timeout;
  j["controller"] = c.controller == ControllerKind::Baseline ? "baseline" : "coupling";
  j["metrics"] = {{"rotational_weight", c.metrics.rotational_weight}};
  const auto& s = c.solver;
  j["solver"] = {{"max_outer", s.max_outer},     {"max_inner", s.max_inner},
                 {"memory", s.memory},           {"mu0", s.mu0},
                 {"mu_growth", s.mu_growth},     {"constraint_tol", s.constraint_tol},
                 {"gradient_tol", s.gradient_tol}, {"step_tol", s.step_tol},
                 {"armijo", s.armijo},           {"backtrack", s.backtrack}};
  j["seed"] = c.seed;
  j["disturbance_std"] = c.disturbance_std;
  json script = json::array();
  for (const auto& ev : c.script) script.push_back(event_json(ev));
  j["script"] = script;
  return j.dump(2);
}

}  // namespace dockmpc
