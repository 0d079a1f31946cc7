#include "modlab/floquet.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace modlab {

namespace {

constexpr double kUnstableTol = 1e-8;
constexpr double kRepeatTol = 1e-6;

MonodromyResult monodromy_of_field(const VectorField& field, int n, double T,
                                   const IntegratorConfig& cfg) {
  IntegratorConfig col_cfg = cfg;
  col_cfg.dense = false;  // only the endpoint state is needed
  MonodromyResult res;
  res.period = T;
  res.M.resize(n, n);
  for (int j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    auto traj = integrate_raw(field, 0.0, std::move(e), T, col_cfg);
    if (!traj.ok())
      throw std::runtime_error("monodromy: column integration failed");
    for (int i = 0; i < n; ++i) res.M(i, j) = traj.ys.back()[i];
  }
  res.det = res.M.determinant();

  Eigen::EigenSolver<Eigen::MatrixXd> solver(res.M);
  res.multipliers.resize(n);
  for (int i = 0; i < n; ++i) res.multipliers[i] = solver.eigenvalues()[i];
  res.exponents = floquet_exponents(res.multipliers, T);
  res.cls = classify_multipliers(res.multipliers);
  return res;
}

}  // namespace

const char* stability_name(Stability s) {
  switch (s) {
    case Stability::bounded_oscillatory:
      return "bounded-oscillatory";
    case Stability::marginal:
      return "marginal";
    case Stability::unstable:
      return "unstable";
    case Stability::out_of_domain:
      return "out-of-domain";
  }
  return "?";
}

const char* sweep_family_name(SweepFamily f) {
  switch (f) {
    case SweepFamily::classical_mathieu:
      return "classical-mathieu";
    case SweepFamily::modulated_mathieu:
      return "modulated-mathieu";
    case SweepFamily::mathieu_kapitza:
      return "mathieu-kapitza";
  }
  return "?";
}

MonodromyResult monodromy(const SystemSpec& sys, double T,
                          const IntegratorConfig& cfg) {
  if (!(T > 0.0))
    throw std::invalid_argument("monodromy: period must be positive");
  if (!sys.potential.linear_force())
    throw std::invalid_argument(
        "monodromy requires a linear force law; nonlinear potentials have no "
        "Floquet decomposition");
  if (auto P = sys.profile.period()) {
    const double ratio = T / *P;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 || std::round(ratio) < 1.0)
      throw std::invalid_argument(
          "monodromy: T must be a positive whole number of modulation periods");
  }
  return monodromy_of_field(hamiltonian_field(sys), 2 * sys.dim(), T, cfg);
}

std::vector<std::complex<double>> floquet_exponents(
    const std::vector<std::complex<double>>& multipliers, double T) {
  if (!(T > 0.0))
    throw std::invalid_argument("floquet_exponents: period must be positive");
  std::vector<std::complex<double>> mus;
  mus.reserve(multipliers.size());
  for (const auto& lam : multipliers) mus.push_back(std::log(lam) / T);
  return mus;
}

Stability classify_multipliers(
    const std::vector<std::complex<double>>& multipliers) {
  double worst = 0.0;
  for (const auto& lam : multipliers) worst = std::max(worst, std::abs(lam));
  if (worst > 1.0 + kUnstableTol) return Stability::unstable;

  int near_plus = 0, near_minus = 0;
  for (const auto& lam : multipliers) {
    if (std::abs(lam - 1.0) < kRepeatTol) ++near_plus;
    if (std::abs(lam + 1.0) < kRepeatTol) ++near_minus;
  }
  if (near_plus >= 2 || near_minus >= 2) return Stability::marginal;
  return Stability::bounded_oscillatory;
}

StabilityGrid stability_sweep(SweepFamily family, const AxisSpec& a_axis,
                              const AxisSpec& q_axis,
                              const IntegratorConfig& cfg, int jobs) {
  auto axis_values = [](const AxisSpec& ax) {
    if (ax.count < 1)
      throw std::invalid_argument("stability_sweep: axis count must be >= 1");
    if (ax.hi < ax.lo)
      throw std::invalid_argument("stability_sweep: axis has hi < lo");
    std::vector<double> vals(ax.count);
    for (int i = 0; i < ax.count; ++i)
      vals[i] = (ax.count == 1)
                    ? ax.lo
                    : ax.lo + (ax.hi - ax.lo) * i / (ax.count - 1);
    return vals;
  };

  StabilityGrid grid;
  grid.family = family;
  grid.a_values = axis_values(a_axis);
  grid.q_values = axis_values(q_axis);
  grid.cells.resize(grid.a_values.size() * grid.q_values.size());

  const double T = M_PI;  // common period of all three families

  auto eval_cell = [&](double a, double q) -> StabilityCell {
    if (family == SweepFamily::classical_mathieu) {
      VectorField f = [a, q](double t, const std::vector<double>& y,
                             std::vector<double>& dy) {
        dy[0] = y[1];
        dy[1] = -(a + 2.0 * q * std::cos(2.0 * t)) * y[0];
      };
      auto res = monodromy_of_field(f, 2, T, cfg);
      double worst = 0.0;
      for (const auto& lam : res.multipliers)
        worst = std::max(worst, std::abs(lam));
      return {worst, res.cls};
    }
    // Modulated families need sqrt(a + 2q cos 2t) positive everywhere.
    if (!(a > 0.0) || !(a > 2.0 * std::abs(q)))
      return {0.0, Stability::out_of_domain};
    auto prof = ModulationProfile::sqrt_cosine(a, q);
    SystemSpec sys =
        (family == SweepFamily::modulated_mathieu)
            ? build_system(prof, PotentialField::harmonic(),
                           KineticSignature::plus_one())
            : build_system(prof, PotentialField::simple_saddle_pair(),
                           KineticSignature::saddle_pair());
    auto res = monodromy_of_field(hamiltonian_field(sys), 2 * sys.dim(), T, cfg);
    double worst = 0.0;
    for (const auto& lam : res.multipliers)
      worst = std::max(worst, std::abs(lam));
    return {worst, res.cls};
  };

  const std::size_t total = grid.cells.size();
  int nthreads = jobs > 0 ? jobs
                          : static_cast<int>(std::min(
                                8u, std::max(1u, std::thread::hardware_concurrency())));
  nthreads = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(nthreads), total));

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= total) return;
      const std::size_t ia = idx / grid.q_values.size();
      const std::size_t iq = idx % grid.q_values.size();
      grid.cells[idx] = eval_cell(grid.a_values[ia], grid.q_values[iq]);
    }
  };

  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return grid;
}

}  // namespace modlab
