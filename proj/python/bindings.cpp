// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

// Python bindings. Configurations cross the boundary as JSON text so the
// Python side sees the same strict schema as the command line tool.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "dockmpc/coupling.hpp"
#include "dockmpc/error.hpp"
#include "dockmpc/gradcheck.hpp"
#include "dockmpc/io.hpp"
#include "dockmpc/scenario.hpp"
#include "dockmpc/simulation.hpp"
#include "json.hpp"

namespace py = pybind11;
using namespace dockmpc;

namespace {

py::dict residuals_dict(const ResidualVector& r) {
  py::dict d;
  d["r_axis"] = r.r_axis;
  d["r_align"] = r.r_align;
  d["r_dist"] = r.r_dist;
  d["r_soft"] = r.r_soft;
  return d;
}

/// Column-oriented trajectory matching the CSV export.
py::dict trajectory_dict(const TrajectoryLog& log) {
  static const char* kCols[] = {"t",   "p1x", "p1y", "th1", "p2x", "p2y", "th2",
                                "v1x", "v1y", "w1",  "v2x", "v2y", "w2",  "r_axis",
                                "r_align", "r_dist", "r_soft"};
  std::vector<std::vector<double>> cols(std::size(kCols));
  std::vector<std::string> phase, status;
  for (const auto& rec : log.records) {
    const auto& a = rec.state.robot1;
    const auto& b = rec.state.robot2;
    const double v[] = {rec.t,
                        a.px(), a.py(), a.theta(), b.px(), b.py(), b.theta(),
                        rec.input.robot1.vx, rec.input.robot1.vy, rec.input.robot1.omega,
                        rec.input.robot2.vx, rec.input.robot2.vy, rec.input.robot2.omega,
                        rec.residuals.r_axis, rec.residuals.r_align, rec.residuals.r_dist,
                        rec.residuals.r_soft};
    for (std::size_t i = 0; i < cols.size(); ++i) cols[i].push_back(v[i]);
    phase.push_back(to_string(rec.phase));
    status.push_back(rec.solver_status);
  }
  py::dict d;
  for (std::size_t i = 0; i < cols.size(); ++i) d[kCols[i]] = cols[i];
  d["phase"] = phase;
  d["solver_status"] = status;
  return d;
}

py::object metrics_object(const MetricsReport& m, const ScenarioResult* r) {
  return py::module_::import("json").attr("loads")(metrics_json(m, r));
}

py::dict run(const std::string& config_json, bool write, const std::string& out_dir) {
  const ScenarioConfig cfg = parse_config(config_json);
  ScenarioResult r;
  {
    py::gil_scoped_release release;
    r = run_scenario(cfg);
  }
  if (write) {
    const std::string dir = out_dir.empty() ? std::string(".") : out_dir;
    export_trajectory(r.log, dir + "/trajectory.csv");
    export_residuals(r.log, cfg.coupling, dir + "/residuals.csv");
    export_plot(r.log, cfg.coupling, cfg.name, dir + "/plot.svg");
    export_metrics(r.metrics, dir + "/metrics.json", &r);
  }
  py::dict d;
  d["outcome"] = to_string(r.outcome);
  d["message"] = r.message;
  d["metrics"] = metrics_object(r.metrics, &r);
  d["trajectory"] = trajectory_dict(r.log);
  return d;
}

MetricsReport report_from(const py::dict& m) {
  const auto j = nlohmann::json::parse(
      py::module_::import("json").attr("dumps")(m).cast<std::string>());
  MetricsReport r;
  auto robot = [](const nlohmann::json& o) {
    return RobotMetrics{o.at("time").get<double>(), o.at("energy").get<double>(),
                        o.at("distance").get<double>()};
  };
  try {
    r.total = robot(j.at("total"));
    r.makespan = j.at("makespan").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("metrics: ") + e.what());
  }
  return r;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Receding-horizon docking controller for two omnidirectional robots";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<NumericError>(m, "NumericError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

  m.def("preset_names", &preset_names, "Names of the built-in scenarios.");
  m.def(
      "preset_json", [](const std::string& name) { return save_config(preset(name)); },
      py::arg("name"), "Built-in scenario as schema-1 JSON text.");
  m.def(
      "normalize_config", [](const std::string& text) { return save_config(parse_config(text)); },
      py::arg("config_json"), "Validates a configuration and returns it with defaults filled in.");
  m.def("run", &run, py::arg("config_json"), py::arg("write") = false,
        py::arg("out_dir") = std::string(), "Runs one scenario.");
  m.def(
      "compare",
      [](const py::dict& ours, const py::dict& baseline) {
        py::list rows;
        for (const auto& r : compare_metrics(report_from(ours), report_from(baseline))) {
          py::dict d;
          d["metric"] = r.metric;
          d["ours"] = r.ours;
          d["baseline"] = r.baseline;
          d["improvement_pct"] = r.improvement_pct;
          rows.append(d);
        }
        return rows;
      },
      py::arg("ours"), py::arg("baseline"), "Percentage improvement of ours over the baseline.");
  m.def(
      "residuals",
      [](std::array<double, 3> p1, std::array<double, 3> p2, std::array<double, 3> v1,
         std::array<double, 3> v2) {
        const CentralState z{{p1[0], p1[1], p1[2]}, {p2[0], p2[1], p2[2]}};
        const CentralInput nu{{v1[0], v1[1], v1[2]}, {v2[0], v2[1], v2[2]}};
        return residuals_dict(residual_vector(z, nu, CouplingParams{}));
      },
      py::arg("pose1"), py::arg("pose2"), py::arg("vel1") = std::array<double, 3>{0, 0, 0},
      py::arg("vel2") = std::array<double, 3>{0, 0, 0},
      "Exact docking residuals for the default interfaces; poses are (x, y, theta [rad]).");
  m.def(
      "check_gradients",
      [](int trials, std::uint64_t seed) {
        GradientCheckReport r;
        {
          py::gil_scoped_release release;
          r = run_gradient_checks(trials, seed);
        }
        py::dict d;
        d["trials"] = r.trials;
        d["max_gradient_error"] = r.max_gradient_error;
        d["max_jacobian_error"] = r.max_jacobian_error;
        d["wall_time"] = r.wall_time;
        return d;
      },
      py::arg("trials") = 100, py::arg("seed") = 2026,
      "Compares automatic derivatives with central differences.");
}
