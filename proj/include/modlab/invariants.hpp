#pragma once

// Exact first integrals of the modulated systems, drift measurement along
// computed trajectories, and a finite-difference Poisson bracket used to
// verify involution of the saddle-pair integral pairs.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "modlab/models.hpp"
#include "modlab/ode.hpp"

namespace modlab {

// Evaluates one conserved quantity at a state, given omega(t) there.
using InvariantFn = std::function<double(const State&, double omega)>;

struct InvariantSet {
  std::vector<std::string> labels;
  std::vector<InvariantFn> eval;

  std::size_t size() const { return eval.size(); }
};

// The integrals attached to a system:
//  - saddle-pair potentials with the canonical (+1, -1) signature get their
//    exact pair (I1, I2) in involution;
//  - everything else gets the single energy-like integral
//    I1 = sum sigma_i (v_i/omega)^2 / 2 + U(q).
InvariantSet invariant_set_for(const SystemSpec& sys);

double generic_integral(const SystemSpec& sys, const State& s);

// (I1, I2) for the simple saddle pair, U = (x^2 - y^2)/2 + xy:
//   I1 = [(vx/w)^2 - (vy/w)^2]/2 + (x^2 - y^2)/2 + x y
//   I2 = (vx/w)(vy/w) - (x^2 - y^2)/2 + x y
std::pair<double, double> kapitza_integrals(const State& s, double omega);

// (I1, I2) for the monkey-saddle pair, U = (x^3/3 - x y^2) + (x^2 y - y^3/3):
//   I1 = [(vx/w)^2 - (vy/w)^2]/2 + U
//   I2 = (vx/w)(vy/w) + (x^2 y - y^3/3) - (x^3/3 - x y^2)
std::pair<double, double> monkey_integrals(const State& s, double omega);

// Same quantities as polynomials on phase space (q, p) with the canonical
// momenta p_i = sigma_i v_i / omega. which is 1 or 2.
double kapitza_invariant_phase(int which, const std::vector<double>& q,
                               const std::vector<double>& p);
double monkey_invariant_phase(int which, const std::vector<double>& q,
                              const std::vector<double>& p);

struct DriftEntry {
  std::string label;
  double initial = 0.0;    // value at the first sample inside the window
  double max_abs = 0.0;    // max |I(t) - initial| over the window
  double max_rel = 0.0;    // max_abs / max(|initial|, 1e-12)
  double t_at_max = 0.0;
};

struct InvariantReport {
  std::vector<DriftEntry> entries;
  double t_lo = 0.0, t_hi = 0.0;  // window actually covered
  std::size_t samples = 0;
};

// Evaluates the system's invariants on the trajectory's own samples
// restricted to [t_lo, t_hi]. Defaults cover the whole trajectory. For
// trajectories that blow up, pass the escape time as t_hi: past it the
// integrals are dominated by floating-point cancellation on huge states and
// drift is no longer meaningful.
InvariantReport drift_report(const Trajectory& traj, const SystemSpec& sys);
InvariantReport drift_report(const Trajectory& traj, const SystemSpec& sys,
                             double t_lo, double t_hi);

// f(q, p) on phase space.
using PhaseFunction =
    std::function<double(const std::vector<double>&, const std::vector<double>&)>;

// {f, g} at (q, p), central differences with one Richardson refinement
// (exact for quadratic f, g; O(h^4) otherwise).
double poisson_bracket(const PhaseFunction& f, const PhaseFunction& g,
                       const std::vector<double>& q,
                       const std::vector<double>& p, double h = 1e-4);

}  // namespace modlab
