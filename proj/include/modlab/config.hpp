#pragma once

// Experiment configuration: a strict JSON schema (unknown keys are rejected
// with their full path) that assembles systems, integrator settings, and the
// per-mode option blocks, plus the built-in figure presets.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "modlab/floquet.hpp"
#include "modlab/models.hpp"
#include "modlab/ode.hpp"

namespace modlab {

// Thrown for schema violations; what() carries the dotted field path.
struct ConfigError : std::runtime_error {
  std::string path;

  ConfigError(std::string field_path, const std::string& message)
      : std::runtime_error(field_path.empty()
                               ? message
                               : field_path + ": " + message),
        path(std::move(field_path)) {}
};

struct InitialCondition {
  double t = 0.0;
  std::vector<double> q;
  std::vector<double> v;
};

struct AnalysisOptions {
  bool invariants = true;
  std::optional<double> escape_radius;  // default rule applies when absent
};

struct OutputOptions {
  int samples = 2000;
  bool csv = true;
  bool svg = true;
  std::string format = "csv";  // trajectory table format: "csv" or "json"
  int portrait_coordinate = 0;
};

struct FloquetOptions {
  std::optional<double> period;  // default: the modulation period
  double rtol = 1e-12;
  double atol = 1e-14;
};

struct SweepOptions {
  SweepFamily family = SweepFamily::classical_mathieu;
  AxisSpec a_axis;
  AxisSpec q_axis;
};

struct HopfOptions {
  double mu = 1.0;
  double eps = 0.9;
  double omega0 = 25.0;
  double x0 = 1.0;
  double y0 = 0.0;
  double horizon = 2000.0;
  SinusoidForcing forcing{1.0, 30.0, 0.0};
};

struct ExperimentConfig {
  std::optional<SystemSpec> system;
  std::optional<InitialCondition> initial;
  double t_from = 0.0;
  double t_to = 0.0;
  bool has_time = false;
  IntegratorConfig integrator;
  AnalysisOptions analysis;
  OutputOptions output;
  std::optional<FloquetOptions> floquet;
  std::optional<SweepOptions> sweep;
  std::optional<HopfOptions> hopf;
  std::uint64_t seed = 12345;
};

ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig parse_config_file(const std::string& path);

// Normalized echo of a parsed configuration (defaults made explicit);
// embedded in the summary artifact so runs are reproducible from it.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

// Built-in reproductions of the three reference trajectories. Each preset
// carries the parameter records behind it: the values as printed and, where
// those violate the modulation positivity domain, the runnable adjusted
// set actually used.
struct FigureParamRecord {
  std::string label;  // "as-printed" or "positivity-adjusted"
  nlohmann::json params;
  bool runnable = false;
  std::string note;
};

struct FigurePreset {
  int figure = 0;
  ExperimentConfig config;  // built from the runnable record
  std::vector<FigureParamRecord> records;
};

FigurePreset preset_figure(int which);

}  // namespace modlab
