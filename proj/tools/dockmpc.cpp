// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

// dockmpc command line: run scenarios, compare against the baseline, check
// derivatives.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dockmpc/error.hpp"
#include "dockmpc/gradcheck.hpp"
#include "dockmpc/io.hpp"
#include "dockmpc/log.hpp"
#include "dockmpc/scenario.hpp"
#include "dockmpc/simulation.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace dockmpc;

namespace {

enum Exit { kOk = 0, kTimeout = 1, kConfig = 2, kNumeric = 3 };

int exit_code(Outcome o) {
  switch (o) {
    case Outcome::Completed:
      return kOk;
    case Outcome::Timeout:
      return kTimeout;
    case Outcome::NumericError:
      return kNumeric;
  }
  return kNumeric;
}

RunOptions run_options(LogLevel level, bool verbose, const std::string& tag) {
  RunOptions o;
  if (level >= LogLevel::Trace || verbose) {
    o.trace = [tag](const std::string& line) { std::cerr << "[" << tag << "] " << line << "\n"; };
  }
  o.verbose_solver = level >= LogLevel::Trace;
  return o;
}

void write_outputs(const ScenarioConfig& cfg, const ScenarioResult& r, const fs::path& dir) {
  export_trajectory(r.log, (dir / "trajectory.csv").string());
  export_residuals(r.log, cfg.coupling, (dir / "residuals.csv").string());
  export_plot(r.log, cfg.coupling, cfg.name, (dir / "plot.svg").string());
  export_metrics(r.metrics, (dir / "metrics.json").string(), &r);
  write_text((dir / "config.json").string(), save_config(cfg) + "\n");
}

void summarize(const ScenarioConfig& cfg, const ScenarioResult& r) {
  const auto& m = r.metrics;
  std::printf("%s: %s, makespan %.2f s, total time %.2f s, energy %.3f, distance %.3f m",
              cfg.name.c_str(), to_string(r.outcome).c_str(), m.makespan, m.total.time,
              m.total.energy, m.total.distance);
  if (!m.dock_times.empty()) std::printf(", docked at %.2f s", m.dock_times.front());
  std::printf("\n");
}

struct Job {
  ScenarioConfig cfg;
  ScenarioResult result;
};

int cmd_run(const std::optional<std::string>& preset_name, const std::optional<std::string>& config,
            const std::string& out, std::optional<std::uint64_t> seed, bool verbose, LogLevel level) {
  ScenarioConfig cfg = preset_name ? preset(*preset_name) : load_config(*config);
  if (seed) cfg.seed = *seed;
  if (level >= LogLevel::Info || verbose) std::cerr << "running " << cfg.name << "\n";
  const ScenarioResult r = run_scenario(cfg, run_options(level, verbose, cfg.name));
  write_outputs(cfg, r, out);
  summarize(cfg, r);
  if (!r.message.empty() && r.outcome != Outcome::Completed) std::cerr << r.message << "\n";
  return exit_code(r.outcome);
}

int cmd_compare(const std::string& name, const std::string& out, bool parallel, bool verbose,
                LogLevel level) {
  if (name != "exp3") throw ConfigError("compare: only the exp3 preset pair is defined");
  Job ours{preset("exp3_coupled"), {}};
  Job base{preset("exp3_baseline"), {}};
  auto go = [&](Job& j) { j.result = run_scenario(j.cfg, run_options(level, verbose, j.cfg.name)); };
  if (parallel) {
    auto f = std::async(std::launch::async, [&] { go(base); });
    go(ours);
    f.get();
  } else {
    go(ours);
    go(base);
  }
  const fs::path dir(out);
  write_outputs(ours.cfg, ours.result, dir / "coupled");
  write_outputs(base.cfg, base.result, dir / "baseline");
  summarize(ours.cfg, ours.result);
  summarize(base.cfg, base.result);

  const auto rows = compare_metrics(ours.result.metrics, base.result.metrics);
  const std::string table = comparison_markdown(rows);
  write_text((dir / "comparison.md").string(), table);
  write_text((dir / "comparison.csv").string(), comparison_csv(rows));
  std::cout << table;
  for (const Job* j : {&ours, &base}) {
    if (j->result.outcome != Outcome::Completed) {
      std::cerr << j->cfg.name << ": " << j->result.message << "\n";
      return exit_code(j->result.outcome);
    }
  }
  return kOk;
}

int cmd_check_gradients(int trials, std::uint64_t seed) {
  const auto rep = run_gradient_checks(trials, seed);
  const double tol = 1e-6;
  std::printf("trials %d  max gradient error %.3e  max jacobian error %.3e  (%.2f s)\n", rep.trials,
              rep.max_gradient_error, rep.max_jacobian_error, rep.wall_time);
  const bool ok = rep.max_gradient_error < tol && rep.max_jacobian_error < tol;
  std::printf("%s\n", ok ? "ok" : "FAILED");
  return ok ? kOk : kNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Docking-aware model predictive control for two omnidirectional robots"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Simulate one scenario and write its outputs");
  std::optional<std::string> run_preset, run_config;
  std::string run_out = "out";
  std::optional<std::uint64_t> run_seed;
  bool run_verbose = false;
  auto* opt_preset = run->add_option("--preset", run_preset, "Preset name (exp1, exp2, exp3_coupled, exp3_baseline)");
  auto* opt_config = run->add_option("--config", run_config, "Scenario config JSON");
  opt_preset->excludes(opt_config);
  run->add_option("--out", run_out, "Output directory");
  run->add_option("--seed", run_seed, "Override the scenario seed");
  run->add_flag("--verbose", run_verbose, "Print one line per control step");

  auto* cmp = app.add_subcommand("compare", "Run the coupled scenario and its baseline");
  std::string cmp_preset;
  std::string cmp_out = "out";
  bool cmp_parallel = false, cmp_verbose = false;
  cmp->add_option("--preset", cmp_preset, "Experiment pair (exp3)")->required();
  cmp->add_option("--out", cmp_out, "Output directory");
  cmp->add_flag("--parallel", cmp_parallel, "Run both scenarios concurrently");
  cmp->add_flag("--verbose", cmp_verbose, "Print one line per control step");

  auto* grad = app.add_subcommand("check-gradients", "Compare AD derivatives with finite differences");
  int trials = 100;
  std::uint64_t grad_seed = 1;
  grad->add_option("--trials", trials, "Number of random instances")->check(CLI::PositiveNumber);
  grad->add_option("--seed", grad_seed, "Random seed");

  auto* show = app.add_subcommand("show-config", "Print a preset as config JSON");
  std::string show_preset;
  show->add_option("--preset", show_preset, "Preset name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    const LogLevel level = log_level_from_env();
    if (run->parsed()) {
      if (!run_preset && !run_config) throw ConfigError("run: one of --preset or --config is required");
      return cmd_run(run_preset, run_config, run_out, run_seed, run_verbose, level);
    }
    if (cmp->parsed()) return cmd_compare(cmp_preset, cmp_out, cmp_parallel, cmp_verbose, level);
    if (grad->parsed()) return cmd_check_gradients(trials, grad_seed);
    if (show->parsed()) {
      std::cout << save_config(preset(show_preset)) << "\n";
      return kOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kNumeric;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kOk;
}
