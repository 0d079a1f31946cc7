#pragma once

// Run orchestration and artifact export: turns a validated configuration
// into integrations, reports, and flat files (CSV tables, SVG plots, a JSON
// summary) under an output directory.

#include <string>
#include <vector>

#include "json.hpp"
#include "modlab/analysis.hpp"
#include "modlab/config.hpp"
#include "modlab/floquet.hpp"
#include "modlab/invariants.hpp"
#include "modlab/models.hpp"
#include "modlab/ode.hpp"

namespace modlab {

enum class RunMode { simulate, invariants_only, floquet, sweep, hopf, figure };

const char* run_mode_name(RunMode m);

struct RunOptions {
  RunMode mode = RunMode::simulate;
  std::string out_dir = ".";
  int figure = 0;  // RunMode::figure only: which preset (1, 2, or 3)
  int jobs = 0;    // sweep workers; 0 picks a thread count automatically
};

struct RunResult {
  nlohmann::json summary;              // what summary.json contains
  std::vector<std::string> artifacts;  // file names written inside out_dir
  int exit_code = 0;                   // 0 success, 3 numerical failure
};

// Integrates sys from ic across [t_from, t_to]. An initial time strictly
// inside the span integrates the two legs separately and merges them into
// one increasing-time trajectory. Runtime modulation-domain errors are
// converted into a recorded non-finite failure so the partial trajectory
// survives.
Trajectory integrate_span(const SystemSpec& sys, const InitialCondition& ic,
                          double t_from, double t_to,
                          const IntegratorConfig& cfg);

// Dense resampling at `samples` evenly spaced times over the interval the
// integration actually covered.
std::vector<State> resample_uniform(const Trajectory& traj, int samples);

// Trajectory table with header t,x,vx[,y,vy][,I1[,I2]]: one row per sample,
// 12 significant digits, newline terminated. Invariant columns appear when
// `invariants` is non-null.
std::string trajectory_csv(const std::vector<State>& samples,
                           const ModulationProfile& profile,
                           const InvariantSet* invariants);

// The same table as {"columns": [...], "rows": [[...], ...]}.
nlohmann::json trajectory_table_json(const std::vector<State>& samples,
                                     const ModulationProfile& profile,
                                     const InvariantSet* invariants);

// Self-contained SVG (inline polyline, axes, labels; no external
// resources). An empty portrait renders the axes with a "no data" note.
std::string portrait_svg(const PhasePortrait& portrait);

// Stability-sweep exports: one CSV row per cell, and an SVG chart drawing
// the grid as colored cell rectangles.
std::string sweep_csv(const StabilityGrid& grid);
std::string sweep_svg(const StabilityGrid& grid);

// Frequency-adaptation table: t,x,y,omega.
std::string hopf_csv(const HopfRunResult& result);

nlohmann::json monodromy_json(const MonodromyResult& m);
nlohmann::json drift_json(const InvariantReport& report);
nlohmann::json verdict_json(const TrapVerdict& verdict);

// Executes one experiment and writes its artifacts under opts.out_dir
// (created if missing). Throws ConfigError when cfg lacks the sections the
// mode requires; integration failures are recorded in the summary (exit
// code 3) with the partial artifacts retained.
RunResult run(const ExperimentConfig& cfg, const RunOptions& opts);

}  // namespace modlab
