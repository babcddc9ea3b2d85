// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockmpc/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dockmpc/error.hpp"
#include "json.hpp"

namespace dockmpc {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void write_text(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
  if (ec) throw Error("cannot create directory for '" + path + "': " + ec.message());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error("write failed for '" + path + "'");
}

void export_trajectory(const TrajectoryLog& log, const std::string& path) {
  std::string s;
  for (std::size_t i = 0; i < kTrajectoryColumns.size(); ++i) {
    s += kTrajectoryColumns[i];
    s += i + 1 < kTrajectoryColumns.size() ? "," : "\n";
  }
  for (const auto& r : log.records) {
    const auto z = r.state.to_array();
    const double u[6] = {r.input.robot1.vx, r.input.robot1.vy, r.input.robot1.omega,
                         r.input.robot2.vx, r.input.robot2.vy, r.input.robot2.omega};
    s += num(r.t);
    for (double v : z) s += "," + num(v);
    for (double v : u) s += "," + num(v);
    s += "," + num(r.residuals.r_axis) + "," + num(r.residuals.r_align) + "," +
         num(r.residuals.r_dist) + "," + num(r.residuals.r_soft);
    s += "," + to_string(r.phase) + "," + (r.solver_status.empty() ? "none" : r.solver_status) + "\n";
  }
  write_text(path, s);
}

std::vector<TrajectoryRow> read_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw Error("'" + path + "': missing header");
  const auto header = split(line);
  if (header.size() != kTrajectoryColumns.size() ||
      !std::equal(header.begin(), header.end(), kTrajectoryColumns.begin())) {
    throw Error("'" + path + "': unexpected header");
  }
  std::vector<TrajectoryRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != kTrajectoryColumns.size()) {
      throw Error("'" + path + "' line " + std::to_string(lineno) + ": wrong column count");
    }
    TrajectoryRow row;
    try {
      for (std::size_t i = 0; i < row.values.size(); ++i) row.values[i] = std::stod(cells[i]);
    } catch (const std::exception&) {
      throw Error("'" + path + "' line " + std::to_string(lineno) + ": bad number");
    }
    row.phase = cells[17];
    row.solver_status = cells[18];
    rows.push_back(std::move(row));
  }
  return rows;
}

void export_residuals(const TrajectoryLog& log, const CouplingParams& p, const std::string& path) {
  std::string s;
  for (std::size_t i = 0; i < kResidualColumns.size(); ++i) {
    s += kResidualColumns[i];
    s += i + 1 < kResidualColumns.size() ? "," : "\n";
  }
  for (const auto& r : log.records) {
    s += num(r.t) + "," + num(r.residuals.r_axis) + "," + num(r.residuals.r_align) + "," +
         num(r.residuals.r_dist) + "," + num(r.residuals.r_soft) + "," + num(r.off_axis) + "," +
         num(r.distance) + "," + num(std::abs(r.distance - p.delta_r)) + "," +
         (r.docked ? "1" : "0") + "\n";
  }
  write_text(path, s);
}

// ---------------------------------------------------------------------------
// SVG

namespace {

struct Frame {
  double x0, y0, w, h;          // pixel box
  double xmin, xmax, ymin, ymax;  // data range

  double px(double x) const { return x0 + (x - xmin) / (xmax - xmin) * w; }
  double py(double y) const { return y0 + h - (y - ymin) / (ymax - ymin) * h; }
};

void pad_range(double& lo, double& hi, double frac) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double m = (hi - lo) * frac;
  lo -= m;
  hi += m;
}

std::string polyline(const Frame& f, const std::vector<double>& xs, const std::vector<double>& ys,
                     const std::string& color) {
  std::string pts;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    pts += fixed(f.px(xs[i]), 2) + "," + fixed(f.py(ys[i]), 2) + " ";
  }
  return "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"" + pts +
         "\"/>\n";
}

std::string axes(const Frame& f, const std::string& label) {
  std::string s = "<rect x=\"" + fixed(f.x0, 1) + "\" y=\"" + fixed(f.y0, 1) + "\" width=\"" +
                  fixed(f.w, 1) + "\" height=\"" + fixed(f.h, 1) +
                  "\" fill=\"none\" stroke=\"#444\" stroke-width=\"0.8\"/>\n";
  s += "<text x=\"" + fixed(f.x0 + 4, 1) + "\" y=\"" + fixed(f.y0 + 13, 1) +
       "\" font-size=\"12\" font-family=\"sans-serif\">" + label + "</text>\n";
  auto tick = [&](double v, bool xaxis) {
    if (xaxis) {
      return "<text x=\"" + fixed(f.px(v), 1) + "\" y=\"" + fixed(f.y0 + f.h + 12, 1) +
             "\" font-size=\"9\" text-anchor=\"middle\" font-family=\"sans-serif\">" + fixed(v, 2) +
             "</text>\n";
    }
    return "<text x=\"" + fixed(f.x0 - 3, 1) + "\" y=\"" + fixed(f.py(v) + 3, 1) +
           "\" font-size=\"9\" text-anchor=\"end\" font-family=\"sans-serif\">" + fixed(v, 2) +
           "</text>\n";
  };
  s += tick(f.xmin, true) + tick(f.xmax, true) + tick(f.ymin, false) + tick(f.ymax, false);
  return s;
}

}  // namespace

std::string render_plot(const TrajectoryLog& log, const CouplingParams& p, const std::string& title) {
  const double W = 1000, H = 620;
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(W, 0) +
                  "\" height=\"" + fixed(H, 0) + "\" viewBox=\"0 0 " + fixed(W, 0) + " " +
                  fixed(H, 0) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"20\" y=\"22\" font-size=\"15\" font-family=\"sans-serif\">" + title + "</text>\n";

  std::vector<double> x1, y1, x2, y2, t, ra, ral, rd, rs;
  for (const auto& r : log.records) {
    x1.push_back(r.state.robot1.px());
    y1.push_back(r.state.robot1.py());
    x2.push_back(r.state.robot2.px());
    y2.push_back(r.state.robot2.py());
    t.push_back(r.t);
    ra.push_back(r.residuals.r_axis);
    ral.push_back(r.residuals.r_align);
    rd.push_back(r.residuals.r_dist);
    rs.push_back(r.residuals.r_soft);
  }

  // XY panel with equal aspect.
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (!x1.empty()) {
    xmin = std::min(*std::min_element(x1.begin(), x1.end()), *std::min_element(x2.begin(), x2.end()));
    xmax = std::max(*std::max_element(x1.begin(), x1.end()), *std::max_element(x2.begin(), x2.end()));
    ymin = std::min(*std::min_element(y1.begin(), y1.end()), *std::min_element(y2.begin(), y2.end()));
    ymax = std::max(*std::max_element(y1.begin(), y1.end()), *std::max_element(y2.begin(), y2.end()));
  }
  pad_range(xmin, xmax, 0.08);
  pad_range(ymin, ymax, 0.08);
  const double span = std::max(xmax - xmin, ymax - ymin);
  const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
  const Frame xy{50, 40, 520, 520, cx - span / 2, cx + span / 2, cy - span / 2, cy + span / 2};
  s += axes(xy, "XY paths [m]");
  s += "<g id=\"path-robot1\">" + polyline(xy, x1, y1, "#1f77b4") + "</g>\n";
  s += "<g id=\"path-robot2\">" + polyline(xy, x2, y2, "#d62728") + "</g>\n";
  if (!x1.empty()) {
    s += "<circle cx=\"" + fixed(xy.px(x1[0]), 2) + "\" cy=\"" + fixed(xy.py(y1[0]), 2) +
         "\" r=\"4\" fill=\"#1f77b4\"/>\n";
    s += "<circle cx=\"" + fixed(xy.px(x2[0]), 2) + "\" cy=\"" + fixed(xy.py(y2[0]), 2) +
         "\" r=\"4\" fill=\"#d62728\"/>\n";
  }
  s += "<g id=\"dock-markers\">\n";
  for (std::size_t i = 0; i < log.records.size(); ++i) {
    const auto& r = log.records[i];
    const bool latched = r.docked && (i == 0 || !log.records[i - 1].docked);
    if (!latched) continue;
    const Point2 d1 = docking_point(r.state.robot1, p.iface1);
    s += "<path class=\"dock\" d=\"M " + fixed(xy.px(d1.x) - 6, 2) + " " + fixed(xy.py(d1.y) - 6, 2) +
         " L " + fixed(xy.px(d1.x) + 6, 2) + " " + fixed(xy.py(d1.y) + 6, 2) + " M " +
         fixed(xy.px(d1.x) - 6, 2) + " " + fixed(xy.py(d1.y) + 6, 2) + " L " +
         fixed(xy.px(d1.x) + 6, 2) + " " + fixed(xy.py(d1.y) - 6, 2) +
         "\" stroke=\"black\" stroke-width=\"2\"/>\n";
  }
  s += "</g>\n";

  // Residual panels.
  const char* names[4] = {"r_axis [rad]", "r_align [rad]", "r_dist [m^2]", "r_soft [m^2/s^2]"};
  const std::vector<double>* series[4] = {&ra, &ral, &rd, &rs};
  const double tmin = t.empty() ? 0.0 : t.front();
  double tmax = t.empty() ? 1.0 : t.back();
  if (!(tmax > tmin)) tmax = tmin + 1.0;
  for (int k = 0; k < 4; ++k) {
    const auto& v = *series[k];
    double lo = v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
    double hi = v.empty() ? 1.0 : *std::max_element(v.begin(), v.end());
    pad_range(lo, hi, 0.05);
    const Frame f{640, 40 + k * 135.0, 330, 105, tmin, tmax, lo, hi};
    s += axes(f, names[k]);
    s += "<g class=\"residual\">" + polyline(f, t, v, "#2ca02c") + "</g>\n";
  }
  s += "<text x=\"805\" y=\"605\" font-size=\"11\" text-anchor=\"middle\" "
       "font-family=\"sans-serif\">t [s]</text>\n";
  s += "</svg>\n";
  return s;
}

void export_plot(const TrajectoryLog& log, const CouplingParams& p, const std::string& title,
                 const std::string& path) {
  write_text(path, render_plot(log, p, title));
}

// ---------------------------------------------------------------------------
// Metrics

namespace {

nlohmann::json robot_json(const RobotMetrics& r) {
  return {{"time", r.time}, {"energy", r.energy}, {"distance", r.distance}};
}

}  // namespace

std::string metrics_json(const MetricsReport& m, const ScenarioResult* result) {
  nlohmann::json j;
  j["robot1"] = robot_json(m.robots[0]);
  j["robot2"] = robot_json(m.robots[1]);
  j["total"] = robot_json(m.total);
  j["makespan"] = m.makespan;
  j["dock_times"] = m.dock_times;
  j["undock_times"] = m.undock_times;
  j["solver"] = {{"solves", m.solves},
                 {"failures", m.solver_failures},
                 {"cold_restarts", m.cold_restarts},
                 {"wall_time", m.solver_wall_time}};
  if (result) {
    j["outcome"] = to_string(result->outcome);
    if (!result->message.empty()) j["message"] = result->message;
    nlohmann::json latches = nlohmann::json::array();
    for (const auto& l : result->latches) {
      latches.push_back({{"time", l.time},
                         {"arrival_speed", l.arrival_speed},
                         {"departure_speed", l.departure_speed},
                         {"gap", l.gap},
                         {"r_axis", l.residuals.r_axis},
                         {"r_align", l.residuals.r_align},
                         {"r_dist", l.residuals.r_dist},
                         {"r_soft", l.residuals.r_soft}});
    }
    j["latches"] = latches;
  }
  return j.dump(2) + "\n";
}

void export_metrics(const MetricsReport& m, const std::string& path, const ScenarioResult* result) {
  write_text(path, metrics_json(m, result));
}

std::vector<ComparisonRow> compare_metrics(const MetricsReport& ours, const MetricsReport& baseline) {
  auto row = [](const std::string& name, double a, double b) {
    ComparisonRow r{name, a, b, 0.0};
    r.improvement_pct = b != 0.0 ? (b - a) / b * 100.0 : 0.0;
    return r;
  };
  // Scenario completion time; the summed per-robot time is reported separately.
  return {row("time [s]", ours.makespan, baseline.makespan),
          row("robot time [s]", ours.total.time, baseline.total.time),
          row("energy [J]", ours.total.energy, baseline.total.energy),
          row("distance [m]", ours.total.distance, baseline.total.distance)};
}

std::string comparison_markdown(const std::vector<ComparisonRow>& rows) {
  std::string s = "| metric | coupled | baseline | improvement [%] |\n|---|---:|---:|---:|\n";
  for (const auto& r : rows) {
    s += "| " + r.metric + " | " + fixed(r.ours, 2) + " | " + fixed(r.baseline, 2) + " | " +
         fixed(r.improvement_pct, 2) + " |\n";
  }
  return s;
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::string s = "metric,coupled,baseline,improvement_pct\n";
  for (const auto& r : rows) {
    s += r.metric + "," + num(r.ours) + "," + num(r.baseline) + "," + num(r.improvement_pct) + "\n";
  }
  return s;
}

}  // namespace dockmpc
