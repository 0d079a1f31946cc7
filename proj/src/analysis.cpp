#include "modlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace modlab {

TrapVerdict classify_trapping(const Trajectory& traj, double radius) {
  if (!(radius > 0.0))
    throw std::invalid_argument("classify_trapping: radius must be positive");
  if (traj.size() == 0)
    throw std::invalid_argument("classify_trapping: empty trajectory");

  TrapVerdict verdict;
  verdict.radius = radius;
  verdict.coords.resize(traj.dim);

  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto& y = traj.raw.ys[i];
    double norm2 = 0.0;
    for (int k = 0; k < traj.dim; ++k) {
      const double a = std::abs(y[k]);
      norm2 += a * a;
      auto& cv = verdict.coords[k];
      cv.max_abs = std::max(cv.max_abs, a);
      if (a > radius && !cv.escape_time) {
        cv.fate = CoordinateFate::escaped;
        cv.escape_time = traj.raw.ts[i];
      }
    }
    verdict.max_norm = std::max(verdict.max_norm, std::sqrt(norm2));
  }

  std::size_t escaped = 0;
  for (const auto& cv : verdict.coords)
    if (cv.fate == CoordinateFate::escaped) ++escaped;
  verdict.overall = (escaped == 0) ? "trapped"
                    : (escaped == verdict.coords.size()) ? "escaped"
                                                         : "mixed";
  return verdict;
}

double default_escape_radius(const State& s0) {
  double norm2 = 0.0;
  for (double x : s0.q) norm2 += x * x;
  for (double x : s0.v) norm2 += x * x;
  return std::max(1.0, 50.0 * std::sqrt(norm2));
}

PhasePortrait phase_portrait(const Trajectory& traj, int k) {
  if (k < 0 || k >= traj.dim)
    throw std::invalid_argument("phase_portrait: coordinate index out of range");
  if (traj.size() == 0)
    throw std::invalid_argument("phase_portrait: empty trajectory");

  PhasePortrait pp;
  pp.index = k;
  pp.points.reserve(traj.size());
  bool first = true;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double q = traj.raw.ys[i][k];
    const double v = traj.raw.ys[i][traj.dim + k];
    pp.points.push_back({q, v});
    if (first) {
      pp.q_min = pp.q_max = q;
      pp.v_min = pp.v_max = v;
      first = false;
    } else {
      pp.q_min = std::min(pp.q_min, q);
      pp.q_max = std::max(pp.q_max, q);
      pp.v_min = std::min(pp.v_min, v);
      pp.v_max = std::max(pp.v_max, v);
    }
  }
  return pp;
}

namespace {

// d/dt of the series g at interior node i, 3-point nonuniform stencil.
double d_dt_nonuniform(const std::vector<double>& ts,
                       const std::vector<double>& g, std::size_t i) {
  const double h1 = ts[i] - ts[i - 1];
  const double h2 = ts[i + 1] - ts[i];
  return -g[i - 1] * h2 / (h1 * (h1 + h2)) + g[i] * (h2 - h1) / (h1 * h2) +
         g[i + 1] * h1 / (h2 * (h1 + h2));
}

}  // namespace

double eisenhart_residual_general(const std::function<double(double)>& mass,
                                  const ModulationProfile& profile,
                                  const Trajectory& ytraj,
                                  const std::function<double(double)>& F,
                                  const std::function<double(double)>& Fprime) {
  if (ytraj.dim != 1)
    throw std::invalid_argument(
        "eisenhart_residual: trajectory must be one-dimensional");
  const std::size_t n = ytraj.size();
  if (n < 3)
    throw std::invalid_argument(
        "eisenhart_residual: need at least three samples");

  const auto& ts = ytraj.raw.ts;
  std::vector<double> flux(n);  // m(t) F'(y) y'
  for (std::size_t i = 0; i < n; ++i) {
    const double y = ytraj.raw.ys[i][0];
    const double v = ytraj.raw.ys[i][1];
    flux[i] = mass(ts[i]) * Fprime(y) * v;
  }

  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double y = ytraj.raw.ys[i][0];
    const double w = profile.omega(ts[i]);
    const double r = d_dt_nonuniform(ts, flux, i) + mass(ts[i]) * w * w * F(y);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

double eisenhart_residual(const std::function<double(double)>& mass,
                          const ModulationProfile& profile,
                          const Trajectory& ytraj) {
  return eisenhart_residual_general(
      mass, profile, ytraj, [](double y) { return y; },
      [](double) { return 1.0; });
}

HopfRunResult run_adaptive_hopf(double mu, double eps, SinusoidForcing forcing,
                                double omega0, double x0, double y0,
                                double horizon, const IntegratorConfig& cfg,
                                int samples) {
  if (!(horizon > 0.0))
    throw std::invalid_argument("run_adaptive_hopf: horizon must be positive");
  if (samples < 2)
    throw std::invalid_argument("run_adaptive_hopf: need at least two samples");

  IntegratorConfig run_cfg = cfg;
  run_cfg.dense = true;
  auto raw = integrate_raw(hopf_field(mu, eps, forcing), 0.0, {x0, y0, omega0},
                           horizon, run_cfg);

  HopfRunResult out;
  out.stats = raw.stats;
  out.failure = raw.failure;

  const double t_last = raw.ts.back();
  out.ts.reserve(samples);
  out.states.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    const double t = t_last * i / (samples - 1);
    auto y = sample_dense_raw(raw, t);
    out.ts.push_back(t);
    out.states.push_back({y[0], y[1], y[2]});
  }

  // Trapezoidal time average of omega over the final tenth of the run,
  // taken on the integrator's own samples.
  const double t_from = t_last - 0.1 * (t_last - raw.ts.front());
  double area = 0.0, width = 0.0;
  for (std::size_t i = 1; i < raw.ts.size(); ++i) {
    const double ta = raw.ts[i - 1], tb = raw.ts[i];
    if (tb <= t_from) continue;
    const double lo = std::max(ta, t_from);
    // Interpolate omega linearly onto the clipped segment start.
    const double wa = raw.ys[i - 1][2], wb = raw.ys[i][2];
    const double w_lo =
        (tb == ta) ? wa : wa + (wb - wa) * (lo - ta) / (tb - ta);
    area += 0.5 * (w_lo + wb) * (tb - lo);
    width += tb - lo;
  }
  out.terminal_mean_omega = (width > 0.0) ? area / width : raw.ys.back()[2];
  return out;
}

}  // namespace modlab
