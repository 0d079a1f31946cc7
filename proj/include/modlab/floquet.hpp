#pragma once

// Floquet analysis of the linear modulated systems: monodromy matrices in
// canonical (q, p) coordinates, multipliers and exponents, a stability
// classification, and parameter-plane stability sweeps for the Mathieu-type
// families.

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "modlab/models.hpp"
#include "modlab/ode.hpp"

namespace modlab {

enum class Stability { bounded_oscillatory, marginal, unstable, out_of_domain };

const char* stability_name(Stability s);

struct MonodromyResult {
  Eigen::MatrixXd M;  // flow over one period in (q, p) coordinates
  std::vector<std::complex<double>> multipliers;
  std::vector<std::complex<double>> exponents;
  double det = 0.0;    // symplectic check: should be 1
  double period = 0.0;
  Stability cls = Stability::bounded_oscillatory;
};

// Integrates the canonical unit frame over [0, T]. Requires a linear force
// law (harmonic or simple-saddle-pair potential); throws std::invalid_argument
// otherwise, and for T that is not a positive whole number of modulation
// periods (any T > 0 is admissible for the constant profile).
MonodromyResult monodromy(const SystemSpec& sys, double T,
                          const IntegratorConfig& cfg = {});

// Principal-branch exponents mu = Log(lambda) / T.
std::vector<std::complex<double>> floquet_exponents(
    const std::vector<std::complex<double>>& multipliers, double T);

// unstable if some |lambda| > 1 + 1e-8; marginal if a multiplier is repeated
// at +1 or -1 (parametric resonance boundary); bounded oscillatory otherwise.
Stability classify_multipliers(
    const std::vector<std::complex<double>>& multipliers);

enum class SweepFamily {
  classical_mathieu,   // x'' + (a + 2 q cos 2t) x = 0
  modulated_mathieu,   // canonical oscillator with omega = sqrt(a + 2q cos 2t)
  mathieu_kapitza      // canonical saddle pair, same modulation
};

const char* sweep_family_name(SweepFamily f);

struct AxisSpec {
  double lo = 0.0;
  double hi = 1.0;
  int count = 2;
};

struct StabilityCell {
  double max_abs_multiplier = 0.0;
  Stability cls = Stability::out_of_domain;
};

struct StabilityGrid {
  SweepFamily family = SweepFamily::classical_mathieu;
  std::vector<double> a_values;
  std::vector<double> q_values;
  std::vector<StabilityCell> cells;  // row-major, a index outer

  const StabilityCell& cell(std::size_t ia, std::size_t iq) const {
    return cells[ia * q_values.size() + iq];
  }
};

// Computes the monodromy over T = pi for every (a, q) grid point. Cells whose
// parameters leave the modulation domain (a <= 0 or a <= 2|q| for the
// modulated families) are marked out_of_domain. jobs = 0 picks a thread count
// automatically; results do not depend on it.
StabilityGrid stability_sweep(SweepFamily family, const AxisSpec& a_axis,
                              const AxisSpec& q_axis,
                              const IntegratorConfig& cfg = {}, int jobs = 0);

}  // namespace modlab
