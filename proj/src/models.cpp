#include "modlab/models.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace modlab {

namespace {

constexpr double kOmegaFloor = 1e-12;

[[noreturn]] void throw_nonpositive(std::string_view variant, double t) {
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "%.*s modulation is nonpositive at t = %.17g",
                static_cast<int>(variant.size()), variant.data(), t);
  throw std::domain_error(buf);
}

// Adaptive Simpson quadrature with the classic Richardson acceptance test.
template <class F>
double simpson_rec(const F& f, double a, double m, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b) {
  if (a == b) return 0.0;
  const double tol = 1e-13 * std::max(1.0, std::abs(b - a));
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace

ModulationProfile ModulationProfile::constant(double omega0) {
  if (!(omega0 > 0.0))
    throw std::invalid_argument("constant modulation requires omega0 > 0");
  return ModulationProfile(ProfileKind::constant, omega0, 0.0, 0.0);
}

ModulationProfile ModulationProfile::cosine_squared(double a, double b,
                                                    double big_omega) {
  if (!(a > 0.0) || a < std::abs(b))
    throw std::invalid_argument(
        "cosine-squared modulation requires a > 0 and a >= |b|");
  if (!(big_omega > 0.0))
    throw std::invalid_argument(
        "cosine-squared modulation requires Omega > 0");
  return ModulationProfile(ProfileKind::cosine_squared, a, b, big_omega);
}

ModulationProfile ModulationProfile::cosine_direct(double a, double q) {
  if (!(a > 0.0) || a < 2.0 * std::abs(q))
    throw std::invalid_argument(
        "cosine-direct modulation requires a > 0 and a >= 2|q|");
  return ModulationProfile(ProfileKind::cosine_direct, a, q, 0.0);
}

ModulationProfile ModulationProfile::sqrt_cosine(double a, double q) {
  if (!(a > 0.0) || a < 2.0 * std::abs(q))
    throw std::invalid_argument(
        "sqrt-cosine modulation requires a > 0 and a >= 2|q|");
  return ModulationProfile(ProfileKind::sqrt_cosine, a, q, 0.0);
}

double ModulationProfile::raw_value(double t) const {
  switch (kind_) {
    case ProfileKind::constant:
      return p1_;
    case ProfileKind::cosine_squared:
      return std::sqrt(std::max(0.0, p1_ + p2_ * std::cos(p3_ * t)));
    case ProfileKind::cosine_direct:
      return p1_ + 2.0 * p2_ * std::cos(2.0 * t);
    case ProfileKind::sqrt_cosine:
      return std::sqrt(std::max(0.0, p1_ + 2.0 * p2_ * std::cos(2.0 * t)));
  }
  return 0.0;
}

double ModulationProfile::omega(double t) const {
  double w;
  switch (kind_) {
    case ProfileKind::constant:
      return p1_;
    case ProfileKind::cosine_squared:
      w = std::sqrt(p1_ + p2_ * std::cos(p3_ * t));
      break;
    case ProfileKind::cosine_direct:
      w = p1_ + 2.0 * p2_ * std::cos(2.0 * t);
      break;
    case ProfileKind::sqrt_cosine:
      w = std::sqrt(p1_ + 2.0 * p2_ * std::cos(2.0 * t));
      break;
    default:
      w = 0.0;
  }
  if (!(w > kOmegaFloor)) throw_nonpositive(name(), t);
  return w;
}

double ModulationProfile::omega_dot(double t) const {
  switch (kind_) {
    case ProfileKind::constant:
      return 0.0;
    case ProfileKind::cosine_squared:
      return -0.5 * p2_ * p3_ * std::sin(p3_ * t) / omega(t);
    case ProfileKind::cosine_direct:
      return -4.0 * p2_ * std::sin(2.0 * t);
    case ProfileKind::sqrt_cosine:
      return -2.0 * p2_ * std::sin(2.0 * t) / omega(t);
  }
  return 0.0;
}

double ModulationProfile::phase(double t) const {
  switch (kind_) {
    case ProfileKind::constant:
      return p1_ * t;
    case ProfileKind::cosine_direct:
      return p1_ * t + p2_ * std::sin(2.0 * t);
    case ProfileKind::cosine_squared:
    case ProfileKind::sqrt_cosine: {
      auto f = [this](double s) { return raw_value(s); };
      const double period_len = *period();
      if (std::abs(t) <= period_len) return adaptive_simpson(f, 0.0, t);
      if (!phase_cached_) {
        phase_over_period_ = adaptive_simpson(f, 0.0, period_len);
        phase_cached_ = true;
      }
      const double k = std::floor(t / period_len);
      const double r = t - k * period_len;
      return k * phase_over_period_ + adaptive_simpson(f, 0.0, r);
    }
  }
  return 0.0;
}

std::optional<double> ModulationProfile::period() const {
  switch (kind_) {
    case ProfileKind::constant:
      return std::nullopt;
    case ProfileKind::cosine_squared:
      return 2.0 * M_PI / p3_;
    case ProfileKind::cosine_direct:
    case ProfileKind::sqrt_cosine:
      return M_PI;
  }
  return std::nullopt;
}

std::string_view ModulationProfile::name() const {
  switch (kind_) {
    case ProfileKind::constant:
      return "constant";
    case ProfileKind::cosine_squared:
      return "cosine-squared";
    case ProfileKind::cosine_direct:
      return "cosine-direct";
    case ProfileKind::sqrt_cosine:
      return "sqrt-cosine";
  }
  return "?";
}

std::vector<std::pair<std::string, double>> ModulationProfile::params() const {
  switch (kind_) {
    case ProfileKind::constant:
      return {{"omega0", p1_}};
    case ProfileKind::cosine_squared:
      return {{"a", p1_}, {"b", p2_}, {"Omega", p3_}};
    case ProfileKind::cosine_direct:
    case ProfileKind::sqrt_cosine:
      return {{"a", p1_}, {"q", p2_}};
  }
  return {};
}

OmegaSample omega_eval(const ModulationProfile& profile, double t) {
  return {profile.omega(t), profile.omega_dot(t), profile.phase(t)};
}

PotentialField PotentialField::harmonic() {
  return PotentialField(PotentialKind::harmonic, 0.0, 0.0);
}

PotentialField PotentialField::cubic_quartic(double a1, double a2) {
  return PotentialField(PotentialKind::cubic_quartic, a1, a2);
}

PotentialField PotentialField::simple_saddle_pair() {
  return PotentialField(PotentialKind::simple_saddle_pair, 0.0, 0.0);
}

PotentialField PotentialField::monkey_saddle_pair() {
  return PotentialField(PotentialKind::monkey_saddle_pair, 0.0, 0.0);
}

int PotentialField::dim() const {
  switch (kind_) {
    case PotentialKind::harmonic:
    case PotentialKind::cubic_quartic:
      return 1;
    case PotentialKind::simple_saddle_pair:
    case PotentialKind::monkey_saddle_pair:
      return 2;
  }
  return 0;
}

bool PotentialField::linear_force() const {
  return kind_ == PotentialKind::harmonic ||
         kind_ == PotentialKind::simple_saddle_pair;
}

double PotentialField::value(const std::vector<double>& q) const {
  switch (kind_) {
    case PotentialKind::harmonic:
      return 0.5 * q[0] * q[0];
    case PotentialKind::cubic_quartic: {
      const double x = q[0];
      return 0.5 * x * x + a1_ / 3.0 * x * x * x + a2_ / 4.0 * x * x * x * x;
    }
    case PotentialKind::simple_saddle_pair: {
      const double x = q[0], y = q[1];
      return 0.5 * (x * x - y * y) + x * y;
    }
    case PotentialKind::monkey_saddle_pair: {
      const double x = q[0], y = q[1];
      return (x * x * x / 3.0 - x * y * y) + (x * x * y - y * y * y / 3.0);
    }
  }
  return 0.0;
}

void PotentialField::gradient(const std::vector<double>& q,
                              std::vector<double>& g) const {
  g.resize(q.size());
  switch (kind_) {
    case PotentialKind::harmonic:
      g[0] = q[0];
      return;
    case PotentialKind::cubic_quartic: {
      const double x = q[0];
      g[0] = x + a1_ * x * x + a2_ * x * x * x;
      return;
    }
    case PotentialKind::simple_saddle_pair:
      g[0] = q[0] + q[1];
      g[1] = q[0] - q[1];
      return;
    case PotentialKind::monkey_saddle_pair: {
      const double x = q[0], y = q[1];
      g[0] = x * x - y * y + 2.0 * x * y;
      g[1] = x * x - y * y - 2.0 * x * y;
      return;
    }
  }
}

std::string_view PotentialField::name() const {
  switch (kind_) {
    case PotentialKind::harmonic:
      return "harmonic";
    case PotentialKind::cubic_quartic:
      return "cubic-quartic";
    case PotentialKind::simple_saddle_pair:
      return "simple-saddle-pair";
    case PotentialKind::monkey_saddle_pair:
      return "monkey-saddle-pair";
  }
  return "?";
}

std::vector<std::pair<std::string, double>> PotentialField::params() const {
  if (kind_ == PotentialKind::cubic_quartic)
    return {{"alpha1", a1_}, {"alpha2", a2_}};
  return {};
}

SystemSpec build_system(ModulationProfile profile, PotentialField potential,
                        KineticSignature signature) {
  if (static_cast<int>(signature.sigma.size()) != potential.dim())
    throw std::invalid_argument(
        "kinetic signature length does not match potential dimension");
  for (int s : signature.sigma)
    if (s != 1 && s != -1)
      throw std::invalid_argument("kinetic signature entries must be +1 or -1");
  return SystemSpec{std::move(profile), std::move(potential),
                    std::move(signature)};
}

void newtonian_accel(const SystemSpec& sys, double t,
                     const std::vector<double>& q, const std::vector<double>& v,
                     std::vector<double>& accel) {
  const double w = sys.profile.omega(t);
  const double wd = sys.profile.omega_dot(t);
  std::vector<double> g;
  sys.potential.gradient(q, g);
  accel.resize(q.size());
  for (std::size_t i = 0; i < q.size(); ++i)
    accel[i] = (wd / w) * v[i] - sys.signature.sigma[i] * w * w * g[i];
}

VectorField newtonian_field(const SystemSpec& sys) {
  const int d = sys.dim();
  return [sys, d, q = std::vector<double>(), g = std::vector<double>()](
             double t, const std::vector<double>& y,
             std::vector<double>& dy) mutable {
    q.assign(y.begin(), y.begin() + d);
    sys.potential.gradient(q, g);
    const double w = sys.profile.omega(t);
    const double wd = sys.profile.omega_dot(t);
    for (int i = 0; i < d; ++i) {
      dy[i] = y[d + i];
      dy[d + i] = (wd / w) * y[d + i] - sys.signature.sigma[i] * w * w * g[i];
    }
  };
}

VectorField hamiltonian_field(const SystemSpec& sys) {
  const int d = sys.dim();
  return [sys, d, q = std::vector<double>(), g = std::vector<double>()](
             double t, const std::vector<double>& y,
             std::vector<double>& dy) mutable {
    q.assign(y.begin(), y.begin() + d);
    sys.potential.gradient(q, g);
    const double w = sys.profile.omega(t);
    for (int i = 0; i < d; ++i) {
      dy[i] = w * sys.signature.sigma[i] * y[d + i];
      dy[d + i] = -w * g[i];
    }
  };
}

PhaseState to_phase(const SystemSpec& sys, const State& s) {
  const double w = sys.profile.omega(s.t);
  PhaseState ps;
  ps.t = s.t;
  ps.q = s.q;
  ps.p.resize(s.v.size());
  for (std::size_t i = 0; i < s.v.size(); ++i)
    ps.p[i] = sys.signature.sigma[i] * s.v[i] / w;
  return ps;
}

State to_state(const SystemSpec& sys, const PhaseState& ps) {
  const double w = sys.profile.omega(ps.t);
  State s;
  s.t = ps.t;
  s.q = ps.q;
  s.v.resize(ps.p.size());
  for (std::size_t i = 0; i < ps.p.size(); ++i)
    s.v[i] = sys.signature.sigma[i] * w * ps.p[i];
  return s;
}

HamiltonianValue hamiltonian_value(const SystemSpec& sys, const PhaseState& ps) {
  double kinetic = 0.0;
  for (std::size_t i = 0; i < ps.p.size(); ++i)
    kinetic += 0.5 * sys.signature.sigma[i] * ps.p[i] * ps.p[i];
  HamiltonianValue hv;
  hv.frozen = kinetic + sys.potential.value(ps.q);
  hv.weighted = sys.profile.omega(ps.t) * hv.frozen;
  return hv;
}

double modulated_oscillator_position(const ModulationProfile& profile,
                                     double x0, double v0, double t) {
  const double phi = profile.phase(t);
  return x0 * std::cos(phi) + v0 / profile.omega(0.0) * std::sin(phi);
}

double modulated_oscillator_velocity(const ModulationProfile& profile,
                                     double x0, double v0, double t) {
  const double phi = profile.phase(t);
  return profile.omega(t) *
         (-x0 * std::sin(phi) + v0 / profile.omega(0.0) * std::cos(phi));
}

void adaptive_hopf_rhs(double t, const std::array<double, 3>& s, double mu,
                       double eps, const SinusoidForcing& forcing,
                       std::array<double, 3>& ds) {
  const double x = s[0], y = s[1], w = s[2];
  const double r = std::hypot(x, y);
  if (r < 1e-12)
    throw std::domain_error("adaptive Hopf field is undefined at r = 0");
  const double f = forcing(t);
  const double shrink = mu - r * r;
  ds[0] = shrink * x - w * y + eps * f;
  ds[1] = shrink * y + w * x;
  ds[2] = -eps * f * y / r;
}

VectorField hopf_field(double mu, double eps, SinusoidForcing forcing) {
  return [mu, eps, forcing](double t, const std::vector<double>& y,
                            std::vector<double>& dy) {
    std::array<double, 3> s{y[0], y[1], y[2]}, ds{};
    adaptive_hopf_rhs(t, s, mu, eps, forcing, ds);
    dy[0] = ds[0];
    dy[1] = ds[1];
    dy[2] = ds[2];
  };
}

}  // namespace modlab
