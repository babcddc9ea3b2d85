// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

// Flat-file export of simulation results.

#pragma once

#include <array>
#include <string>
#include <vector>

#include "dockmpc/simulation.hpp"

namespace dockmpc {

/// Column order of trajectory.csv.
inline constexpr std::array<const char*, 19> kTrajectoryColumns{
    "t",   "p1x", "p1y", "th1", "p2x",    "p2y",     "th2",    "v1x",   "v1y",  "w1",
    "v2x", "v2y", "w2",  "r_axis", "r_align", "r_dist", "r_soft", "phase", "solver_status"};

/// Column order of residuals.csv.
inline constexpr std::array<const char*, 9> kResidualColumns{
    "t", "r_axis", "r_align", "r_dist", "r_soft", "off_axis", "distance", "gap", "docked"};

/// One parsed trajectory.csv row; numeric fields in column order.
struct TrajectoryRow {
  std::array<double, 17> values{};
  std::string phase;
  std::string solver_status;
};

void export_trajectory(const TrajectoryLog& log, const std::string& path);
std::vector<TrajectoryRow> read_trajectory(const std::string& path);

void export_residuals(const TrajectoryLog& log, const CouplingParams& p, const std::string& path);

/// XY paths with dock markers plus residual-vs-time panels.
std::string render_plot(const TrajectoryLog& log, const CouplingParams& p, const std::string& title);
void export_plot(const TrajectoryLog& log, const CouplingParams& p, const std::string& title,
                 const std::string& path);

std::string metrics_json(const MetricsReport& m, const ScenarioResult* result = nullptr);
void export_metrics(const MetricsReport& m, const std::string& path,
                    const ScenarioResult* result = nullptr);

struct ComparisonRow {
  std::string metric;
  double ours = 0.0;
  double baseline = 0.0;
  double improvement_pct = 0.0;  // (baseline - ours) / baseline * 100
};

std::vector<ComparisonRow> compare_metrics(const MetricsReport& ours, const MetricsReport& baseline);
std::string comparison_markdown(const std::vector<ComparisonRow>& rows);
std::string comparison_csv(const std::vector<ComparisonRow>& rows);

/// Writes text to path, creating parent directories. Throws Error with path context.
void write_text(const std::string& path, const std::string& text);

}  // namespace dockmpc
