#pragma once

// Model catalog: time-dependent modulation profiles omega(t), potential
// fields with signed kinetic signatures, and the vector fields (Newtonian
// and Hamiltonian form) of the modulated systems built from them. Also the
// closed-form modulated oscillator solution and the adaptive Hopf feedback
// system used by the frequency-learning experiment.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "modlab/ode.hpp"

namespace modlab {

struct OmegaSample {
  double omega = 0.0;
  double omega_dot = 0.0;
  double phase = 0.0;  // Phi(t) = integral of omega from 0 to t
};

enum class ProfileKind { constant, cosine_squared, cosine_direct, sqrt_cosine };

// omega(t) > 0 profiles:
//   constant        omega0
//   cosine-squared  sqrt(a + b cos(Omega t))
//   cosine-direct   a + 2 q cos(2 t)
//   sqrt-cosine     sqrt(a + 2 q cos(2 t))
// Construction rejects parameters that are negative somewhere regardless of t
// (a < |b|, a < 2|q|, omega0 <= 0). Boundary cases (a == |b|, a == 2|q|) touch
// zero at isolated times and are accepted; evaluating at or past such a time
// throws std::domain_error naming the variant and t.
class ModulationProfile {
 public:
  ModulationProfile() : ModulationProfile(ProfileKind::constant, 1.0, 0.0, 0.0) {}

  static ModulationProfile constant(double omega0);
  static ModulationProfile cosine_squared(double a, double b, double big_omega);
  static ModulationProfile cosine_direct(double a, double q);
  static ModulationProfile sqrt_cosine(double a, double q);

  double omega(double t) const;
  double omega_dot(double t) const;
  double phase(double t) const;

  // Smallest period of omega, or nullopt for the constant profile (for which
  // any period is admissible).
  std::optional<double> period() const;

  ProfileKind kind() const { return kind_; }
  std::string_view name() const;
  std::vector<std::pair<std::string, double>> params() const;

 private:
  ModulationProfile(ProfileKind k, double p1, double p2, double p3)
      : kind_(k), p1_(p1), p2_(p2), p3_(p3) {}

  double raw_value(double t) const;  // no positivity check (quadrature use)

  ProfileKind kind_;
  double p1_, p2_, p3_;
  mutable double phase_over_period_ = 0.0;  // lazy cache for quadrature kinds
  mutable bool phase_cached_ = false;
};

OmegaSample omega_eval(const ModulationProfile& profile, double t);

enum class PotentialKind {
  harmonic,
  cubic_quartic,
  simple_saddle_pair,
  monkey_saddle_pair
};

// U(q) catalog:
//   harmonic            q^2/2                                   (1 dof)
//   cubic-quartic       q^2/2 + a1 q^3/3 + a2 q^4/4             (1 dof)
//   simple-saddle-pair  (x^2 - y^2)/2 + x y                     (2 dof)
//   monkey-saddle-pair  (x^3/3 - x y^2) + (x^2 y - y^3/3)       (2 dof)
class PotentialField {
 public:
  PotentialField() : PotentialField(PotentialKind::harmonic, 0.0, 0.0) {}

  static PotentialField harmonic();
  static PotentialField cubic_quartic(double a1, double a2);
  static PotentialField simple_saddle_pair();
  static PotentialField monkey_saddle_pair();

  int dim() const;
  bool linear_force() const;  // gradient linear in q (Floquet-eligible)
  double value(const std::vector<double>& q) const;
  void gradient(const std::vector<double>& q, std::vector<double>& g) const;

  PotentialKind kind() const { return kind_; }
  std::string_view name() const;
  std::vector<std::pair<std::string, double>> params() const;

 private:
  PotentialField(PotentialKind k, double a1, double a2)
      : kind_(k), a1_(a1), a2_(a2) {}

  PotentialKind kind_;
  double a1_, a2_;
};

// Signs of the kinetic terms, one entry of +1 or -1 per coordinate.
struct KineticSignature {
  std::vector<int> sigma;

  static KineticSignature plus_one() { return {{+1}}; }
  static KineticSignature saddle_pair() { return {{+1, -1}}; }
};

struct SystemSpec {
  ModulationProfile profile;
  PotentialField potential;
  KineticSignature signature;

  int dim() const { return potential.dim(); }
};

// Validates that the signature matches the potential's coordinate count and
// contains only +1/-1 entries. Throws std::invalid_argument otherwise.
SystemSpec build_system(ModulationProfile profile, PotentialField potential,
                        KineticSignature signature);

// Newtonian form over (q, v):
//   dv_i/dt = (omega_dot/omega) v_i - sigma_i omega^2 dU/dq_i
void newtonian_accel(const SystemSpec& sys, double t,
                     const std::vector<double>& q, const std::vector<double>& v,
                     std::vector<double>& accel);
VectorField newtonian_field(const SystemSpec& sys);  // state [q..., v...]

// Hamiltonian form over (q, p) with p_i = sigma_i v_i / omega:
//   dq_i/dt = omega sigma_i p_i,   dp_i/dt = -omega dU/dq_i
struct PhaseState {
  double t = 0.0;
  std::vector<double> q;
  std::vector<double> p;
};

VectorField hamiltonian_field(const SystemSpec& sys);  // state [q..., p...]
PhaseState to_phase(const SystemSpec& sys, const State& s);
State to_state(const SystemSpec& sys, const PhaseState& ps);

struct HamiltonianValue {
  double weighted = 0.0;  // the generator omega(t) * H0
  double frozen = 0.0;    // H0 = sum sigma_i p_i^2 / 2 + U(q)
};
HamiltonianValue hamiltonian_value(const SystemSpec& sys, const PhaseState& ps);

// Exact solution of the modulated harmonic oscillator
//   x(t) = x0 cos(Phi(t)) + (v0/omega(0)) sin(Phi(t))
// valid for any profile; velocity is omega(t) times the Phi-derivative.
double modulated_oscillator_position(const ModulationProfile& profile,
                                     double x0, double v0, double t);
double modulated_oscillator_velocity(const ModulationProfile& profile,
                                     double x0, double v0, double t);

// F(t) = amplitude * sin(frequency * t + phase)
struct SinusoidForcing {
  double amplitude = 1.0;
  double frequency = 1.0;
  double phase = 0.0;
  double operator()(double t) const {
    return amplitude * std::sin(frequency * t + phase);
  }
};

// Forced Hopf oscillator whose internal frequency adapts to the forcing:
//   x' = (mu - r^2) x - w y + eps F(t)
//   y' = (mu - r^2) y + w x
//   w' = -eps F(t) y / r          with r = |(x, y)|
// Throws std::domain_error if evaluated at r = 0.
void adaptive_hopf_rhs(double t, const std::array<double, 3>& s, double mu,
                       double eps, const SinusoidForcing& forcing,
                       std::array<double, 3>& ds);
VectorField hopf_field(double mu, double eps, SinusoidForcing forcing);

}  // namespace modlab
