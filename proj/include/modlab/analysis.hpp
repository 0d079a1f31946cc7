#pragma once

// Trajectory post-processing: trapped/escaped classification, phase-portrait
// extraction, the Eisenhart-form residual diagnostic for conformally
// rescaled oscillator equations, and the adaptive Hopf frequency-learning
// experiment.

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "modlab/models.hpp"
#include "modlab/ode.hpp"

namespace modlab {

enum class CoordinateFate { trapped, escaped };

struct CoordinateVerdict {
  CoordinateFate fate = CoordinateFate::trapped;
  std::optional<double> escape_time;  // first sample time with |q_i| > radius
  double max_abs = 0.0;
};

struct TrapVerdict {
  std::vector<CoordinateVerdict> coords;
  std::string overall;  // "trapped", "escaped", or "mixed"
  double radius = 0.0;
  double max_norm = 0.0;  // max Euclidean norm of q over the samples
};

// Scans the trajectory samples coordinate by coordinate. A coordinate has
// escaped if |q_i| exceeds the radius at any sample.
TrapVerdict classify_trapping(const Trajectory& traj, double radius);

// Default classification radius: max(1, 50 |(q0, v0)|).
double default_escape_radius(const State& s0);

struct PhasePortrait {
  int index = 0;  // which coordinate
  std::vector<std::array<double, 2>> points;  // (q_k, v_k) per sample
  double q_min = 0.0, q_max = 0.0, v_min = 0.0, v_max = 0.0;
};

PhasePortrait phase_portrait(const Trajectory& traj, int k);

// Residual of the damped-oscillator form written as a conservation law:
//   r(t) = d/dt [ m(t) y'(t) ] + m(t) omega(t)^2 y(t)
// evaluated on the trajectory's own samples with 3-point nonuniform central
// differences; returns max |r| over the interior samples. The trajectory
// must be one-dimensional with at least three samples. A trajectory whose
// y(t) solves the modulated oscillator equation has r = 0 exactly when
// m = 1/omega; the numerical residual measures both discretization and
// integration error.
double eisenhart_residual(const std::function<double(double)>& mass,
                          const ModulationProfile& profile,
                          const Trajectory& ytraj);

// Generalized version through a coordinate map x = F(y):
//   r(t) = d/dt [ m(t) F'(y) y' ] + m(t) omega(t)^2 F(y)
double eisenhart_residual_general(const std::function<double(double)>& mass,
                                  const ModulationProfile& profile,
                                  const Trajectory& ytraj,
                                  const std::function<double(double)>& F,
                                  const std::function<double(double)>& Fprime);

struct HopfRunResult {
  std::vector<double> ts;                       // uniform resample
  std::vector<std::array<double, 3>> states;    // (x, y, omega) at ts
  double terminal_mean_omega = 0.0;  // time average over the last tenth
  StepStats stats;
  std::optional<NumericalFailure> failure;
};

// Integrates the adaptive Hopf system from (x0, y0, omega0) over
// [0, horizon] and reports the learned frequency as the trapezoidal time
// average of omega over the final 10% of the covered interval.
HopfRunResult run_adaptive_hopf(double mu, double eps, SinusoidForcing forcing,
                                double omega0, double x0, double y0,
                                double horizon, const IntegratorConfig& cfg,
                                int samples = 2000);

}  // namespace modlab
