#pragma once

// First-order ODE integration: fixed-step RK4 and adaptive embedded RK45
// (Dormand-Prince 4(5)) with a PI step controller and cubic Hermite dense
// output. Integration failures are recorded on the trajectory rather than
// thrown, so callers can inspect the partial result.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace modlab {

// Mechanical state: coordinates q and velocities v at time t.
struct State {
  double t = 0.0;
  std::vector<double> q;
  std::vector<double> v;
};

enum class StepperKind { rk4_fixed, rk45_adaptive };

struct IntegratorConfig {
  StepperKind method = StepperKind::rk45_adaptive;
  double dt = 1e-3;       // fixed step size (rk4_fixed only)
  double rtol = 1e-10;    // relative tolerance (rk45 only)
  double atol = 1e-12;    // absolute tolerance (rk45 only)
  long max_steps = 20000000;
  bool dense = true;      // keep derivative samples for dense output
};

struct StepStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evals = 0;
};

struct NumericalFailure {
  enum class Kind { step_underflow, max_steps_exceeded, non_finite };
  Kind kind = Kind::non_finite;
  double t = 0.0;          // last time reached before the failure
  std::string message;
};

// Right-hand side of y' = f(t, y). Writes dy/dt into dydt (same size as y).
using VectorField =
    std::function<void(double, const std::vector<double>&, std::vector<double>&)>;

// Trajectory over a flat state vector. Times are monotone in the direction
// of integration (increasing for t_end > t0, decreasing for backward runs).
struct RawTrajectory {
  std::vector<double> ts;
  std::vector<std::vector<double>> ys;
  std::vector<std::vector<double>> fs;  // derivatives at ts (dense output only)
  StepStats stats;
  std::optional<NumericalFailure> failure;
  bool dense = false;
  StepperKind method = StepperKind::rk45_adaptive;
  double rtol = 0.0, atol = 0.0, dt = 0.0;

  bool ok() const { return !failure.has_value(); }
  std::size_t size() const { return ts.size(); }
};

RawTrajectory integrate_raw(const VectorField& rhs, double t0,
                            std::vector<double> y0, double t_end,
                            const IntegratorConfig& cfg);

// Cubic Hermite interpolation between stored samples. Requires dense output;
// throws std::logic_error otherwise, std::out_of_range for t outside the
// covered interval (a small roundoff slack at the endpoints is allowed).
std::vector<double> sample_dense_raw(const RawTrajectory& traj, double t);

// Mechanical wrapper: the flat vector is [q..., v...] with dim coordinates.
struct Trajectory {
  int dim = 0;
  RawTrajectory raw;

  std::size_t size() const { return raw.size(); }
  bool ok() const { return raw.ok(); }
  State state_at(std::size_t i) const;
};

Trajectory integrate(const VectorField& rhs, const State& s0, double t_end,
                     const IntegratorConfig& cfg);

std::vector<State> sample_dense(const Trajectory& traj,
                                const std::vector<double>& times);

// Builds a trajectory directly from externally produced samples (e.g. an
// analytic solution evaluated on a grid). No dense output.
Trajectory trajectory_from_states(const std::vector<State>& samples);

// Splices a backward leg (integrated from t0 downward) and a forward leg
// (from the same t0 upward) into one strictly-increasing-time trajectory.
// The duplicated t0 sample is kept once.
Trajectory merge_two_sided(const Trajectory& backward, const Trajectory& forward);

}  // namespace modlab
