#include <cmath>
#include <complex>
#include <cstring>
#include <stdexcept>

#include "doctest.h"
#include "modlab/floquet.hpp"
#include "modlab/models.hpp"

using namespace modlab;

namespace {

SystemSpec harmonic_unit() {
  return build_system(ModulationProfile::constant(1.0),
                      PotentialField::harmonic(), KineticSignature::plus_one());
}

double wrap_angle(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a < -M_PI) a += 2.0 * M_PI;
  return std::abs(a);
}

StabilityCell single_cell(SweepFamily fam, double a, double q,
                          const IntegratorConfig& cfg) {
  AxisSpec aa{a, a, 1}, qq{q, q, 1};
  return stability_sweep(fam, aa, qq, cfg).cell(0, 0);
}

}  // namespace

TEST_SUITE("floquet") {

TEST_CASE("harmonic oscillator monodromy is a rotation") {
  IntegratorConfig cfg;
  cfg.rtol = 1e-12;
  cfg.atol = 1e-14;

  // Over its own period the flow map is the identity: repeated +1 pair.
  auto full = monodromy(harmonic_unit(), 2.0 * M_PI, cfg);
  CHECK(full.M.rows() == 2);
  CHECK(std::abs(full.M(0, 0) - 1.0) < 1e-9);
  CHECK(std::abs(full.M(0, 1)) < 1e-9);
  CHECK(std::abs(full.M(1, 0)) < 1e-9);
  CHECK(std::abs(full.M(1, 1) - 1.0) < 1e-9);
  CHECK(full.cls == Stability::marginal);
  CHECK(full.det == doctest::Approx(1.0).epsilon(1e-10));

  // Constant profile admits any horizon; T = 1 gives rotation by 1 radian.
  auto rot = monodromy(harmonic_unit(), 1.0, cfg);
  CHECK(std::abs(rot.M(0, 0) - std::cos(1.0)) < 1e-10);
  CHECK(std::abs(rot.M(0, 1) - std::sin(1.0)) < 1e-10);
  CHECK(std::abs(rot.M(1, 0) + std::sin(1.0)) < 1e-10);
  CHECK(rot.cls == Stability::bounded_oscillatory);
  for (const auto& lam : rot.multipliers)
    CHECK(std::abs(std::abs(lam) - 1.0) < 1e-10);
  // Exponents are +-i for the unit oscillator.
  double worst = 1e9;
  for (const auto& mu : rot.exponents)
    worst = std::min(worst, std::abs(mu - std::complex<double>(0.0, 1.0)));
  CHECK(worst < 1e-9);
}

TEST_CASE("floquet exponents use the principal branch") {
  std::vector<std::complex<double>> lams = {{0.0, 1.0}, {0.0, -1.0}};
  auto mus = floquet_exponents(lams, M_PI);
  CHECK(mus[0].real() == doctest::Approx(0.0));
  CHECK(mus[0].imag() == doctest::Approx(0.5));
  CHECK(mus[1].imag() == doctest::Approx(-0.5));
  CHECK_THROWS_AS(floquet_exponents(lams, 0.0), std::invalid_argument);
}

TEST_CASE("modulated oscillator monodromy is rotation by the accumulated phase") {
  auto sys = build_system(ModulationProfile::sqrt_cosine(0.25, 0.1),
                          PotentialField::harmonic(),
                          KineticSignature::plus_one());
  IntegratorConfig cfg;
  cfg.rtol = 1e-12;
  cfg.atol = 1e-14;
  auto res = monodromy(sys, M_PI, cfg);

  const double phi = 1.494240487659382;  // integral of omega over one period
  CHECK(std::abs(res.M(0, 0) - std::cos(phi)) < 1e-9);
  CHECK(std::abs(res.M(0, 1) - std::sin(phi)) < 1e-9);
  CHECK(std::abs(res.M(1, 0) + std::sin(phi)) < 1e-9);
  CHECK(std::abs(res.M(1, 1) - std::cos(phi)) < 1e-9);
  CHECK(res.cls == Stability::bounded_oscillatory);
  for (const auto& lam : res.multipliers) {
    CHECK(std::abs(std::abs(lam) - 1.0) < 1e-9);
    CHECK(wrap_angle(std::abs(std::arg(lam)) - phi) < 1e-9);
  }
}

TEST_CASE("saddle-pair monodromy matches the time-substitution prediction") {
  auto sys = build_system(ModulationProfile::cosine_squared(2.0, 1.0, 1.0),
                          PotentialField::simple_saddle_pair(),
                          KineticSignature::saddle_pair());
  IntegratorConfig cfg;
  cfg.rtol = 1e-12;
  cfg.atol = 1e-14;
  auto res = monodromy(sys, 2.0 * M_PI, cfg);

  CHECK(res.M.rows() == 4);
  CHECK(res.cls == Stability::unstable);
  CHECK(res.det == doctest::Approx(1.0).epsilon(1e-7));

  // With z' = omega(t) K z the multipliers are exp(Phi(T) * eig(K)), where
  // eig(K) = +-sqrt(-1 +- i). Largest magnitude:
  const double phi_T = 8.737752570984805;
  const std::complex<double> root = std::sqrt(std::complex<double>(-1.0, 1.0));
  const double expected_mag = std::exp(phi_T * root.real());
  CHECK(expected_mag == doctest::Approx(53.328057465822).epsilon(1e-9));

  double max_mag = 0.0;
  std::complex<double> lam_max;
  for (const auto& lam : res.multipliers) {
    if (std::abs(lam) > max_mag) {
      max_mag = std::abs(lam);
      lam_max = lam;
    }
  }
  CHECK(max_mag == doctest::Approx(expected_mag).epsilon(1e-6));
  const double theta = phi_T * root.imag();
  const double angle_err = std::min(wrap_angle(std::arg(lam_max) - theta),
                                    wrap_angle(std::arg(lam_max) + theta));
  CHECK(angle_err < 1e-5);

  // Symplectic spectrum: multipliers come in reciprocal pairs.
  for (const auto& lam : res.multipliers) {
    double best = 1e9;
    for (const auto& mu : res.multipliers)
      best = std::min(best, std::abs(lam * mu - 1.0));
    CHECK(best < 1e-5);
  }
}

TEST_CASE("monodromy capability and period guards") {
  IntegratorConfig cfg;
  auto nonlinear = build_system(ModulationProfile::constant(1.0),
                                PotentialField::cubic_quartic(0.1, 0.1),
                                KineticSignature::plus_one());
  CHECK_THROWS_AS(monodromy(nonlinear, M_PI, cfg), std::invalid_argument);

  auto monkey = build_system(ModulationProfile::constant(1.0),
                             PotentialField::monkey_saddle_pair(),
                             KineticSignature::saddle_pair());
  CHECK_THROWS_AS(monodromy(monkey, M_PI, cfg), std::invalid_argument);

  auto modulated = build_system(ModulationProfile::sqrt_cosine(0.25, 0.1),
                                PotentialField::harmonic(),
                                KineticSignature::plus_one());
  CHECK_THROWS_AS(monodromy(modulated, 1.5 * M_PI, cfg), std::invalid_argument);
  CHECK_THROWS_AS(monodromy(modulated, -M_PI, cfg), std::invalid_argument);
  CHECK_NOTHROW(monodromy(modulated, 2.0 * M_PI, cfg));  // two periods
}

TEST_CASE("classical Mathieu tongue cells against reference multipliers") {
  IntegratorConfig cfg;
  cfg.rtol = 1e-10;
  cfg.atol = 1e-12;

  struct Ref {
    double a, q, mag;  // mag <= 0 means bounded
  };
  const Ref refs[] = {
      {1.0, 0.1, 1.169874}, {0.95, 0.1, 1.148831}, {1.0, 0.3, 1.594229},
      {0.7, 0.3, 1.144618}, {4.0, 0.2, 1.005871},  {1.2, 0.1, -1.0},
      {2.0, 0.1, -1.0},     {1.1, 0.05, -1.0},
  };
  for (const auto& r : refs) {
    auto cell = single_cell(SweepFamily::classical_mathieu, r.a, r.q, cfg);
    if (r.mag > 0.0) {
      CHECK(cell.cls == Stability::unstable);
      CHECK(cell.max_abs_multiplier == doctest::Approx(r.mag).epsilon(1e-3));
    } else {
      CHECK(cell.max_abs_multiplier < 1.0 + 1e-8);
      CHECK(cell.cls != Stability::unstable);
    }
  }
}

TEST_CASE("sweep grids: tongue, integrable flatness, curl instability") {
  IntegratorConfig cfg;
  cfg.rtol = 1e-10;
  cfg.atol = 1e-12;

  AxisSpec a_axis{0.5, 1.5, 5};   // 0.5, 0.75, 1.0, 1.25, 1.5
  AxisSpec q_axis{0.0, 0.3, 4};   // 0.0, 0.1, 0.2, 0.3

  auto classical =
      stability_sweep(SweepFamily::classical_mathieu, a_axis, q_axis, cfg);
  REQUIRE(classical.a_values.size() == 5);
  REQUIRE(classical.q_values.size() == 4);
  CHECK(classical.a_values[2] == doctest::Approx(1.0));
  // Resonant column at a = 1: unstable once q > 0, marginal exactly at q = 0.
  CHECK(classical.cell(2, 0).cls == Stability::marginal);
  CHECK(classical.cell(2, 1).cls == Stability::unstable);
  CHECK(classical.cell(2, 2).cls == Stability::unstable);
  // Off-resonance cells on the q = 0 axis are plain rotations.
  CHECK(classical.cell(0, 0).cls == Stability::bounded_oscillatory);
  CHECK(classical.cell(4, 0).cls == Stability::bounded_oscillatory);

  auto modulated =
      stability_sweep(SweepFamily::modulated_mathieu, a_axis, q_axis, cfg);
  int defined = 0;
  for (std::size_t ia = 0; ia < 5; ++ia) {
    for (std::size_t iq = 0; iq < 4; ++iq) {
      const auto& cell = modulated.cell(ia, iq);
      const double a = modulated.a_values[ia], q = modulated.q_values[iq];
      if (a <= 2.0 * q) {
        CHECK(cell.cls == Stability::out_of_domain);
      } else {
        ++defined;
        // Integrable modulation never destabilizes the oscillator.
        CHECK(cell.cls != Stability::unstable);
        CHECK(cell.max_abs_multiplier < 1.0 + 1e-8);
      }
    }
  }
  CHECK(defined > 10);

  AxisSpec ak{0.5, 1.5, 3}, qk{0.0, 0.2, 3};
  auto kap = stability_sweep(SweepFamily::mathieu_kapitza, ak, qk, cfg);
  for (std::size_t ia = 0; ia < 3; ++ia) {
    for (std::size_t iq = 0; iq < 3; ++iq) {
      const auto& cell = kap.cell(ia, iq);
      if (kap.a_values[ia] > 2.0 * kap.q_values[iq]) {
        // Curl coupling makes every defined cell unstable.
        CHECK(cell.cls == Stability::unstable);
        CHECK(cell.max_abs_multiplier > 1.0 + 1e-6);
      }
    }
  }
}

TEST_CASE("sweep results do not depend on thread count") {
  IntegratorConfig cfg;
  cfg.rtol = 1e-10;
  cfg.atol = 1e-12;
  AxisSpec a_axis{0.8, 1.2, 3}, q_axis{0.0, 0.2, 3};
  auto one = stability_sweep(SweepFamily::classical_mathieu, a_axis, q_axis,
                             cfg, 1);
  auto many = stability_sweep(SweepFamily::classical_mathieu, a_axis, q_axis,
                              cfg, 4);
  REQUIRE(one.cells.size() == many.cells.size());
  for (std::size_t i = 0; i < one.cells.size(); ++i) {
    CHECK(std::memcmp(&one.cells[i].max_abs_multiplier,
                      &many.cells[i].max_abs_multiplier, sizeof(double)) == 0);
    CHECK(one.cells[i].cls == many.cells[i].cls);
  }
}

TEST_CASE("axis validation") {
  IntegratorConfig cfg;
  AxisSpec bad{1.0, 0.5, 3}, ok{0.5, 1.0, 2};
  CHECK_THROWS_AS(
      stability_sweep(SweepFamily::classical_mathieu, bad, ok, cfg),
      std::invalid_argument);
  AxisSpec zero{0.5, 1.0, 0};
  CHECK_THROWS_AS(
      stability_sweep(SweepFamily::classical_mathieu, ok, zero, cfg),
      std::invalid_argument);
}

}  // TEST_SUITE
