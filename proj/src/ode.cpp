#include "modlab/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace modlab {

namespace {

bool all_finite(const std::vector<double>& y) {
  for (double x : y)
    if (!std::isfinite(x)) return false;
  return true;
}

// Dormand-Prince 4(5) tableau. The b row is the 5th-order solution (the one
// we advance with); e = b - bhat gives the embedded error estimate directly.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Dopri {
  const VectorField& rhs;
  std::size_t n;
  std::vector<double> k2, k3, k4, k5, k6, ytmp;

  Dopri(const VectorField& f, std::size_t dim)
      : rhs(f), n(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), ytmp(dim) {}

  // One attempted step from (t, y, k1 = f(t, y)). On return ynew holds the
  // 5th-order result, k7 = f(t + h, ynew) (FSAL), err the componentwise
  // error estimate. 6 rhs evaluations.
  void step(double t, const std::vector<double>& y, const std::vector<double>& k1,
            double h, std::vector<double>& ynew, std::vector<double>& k7,
            std::vector<double>& err) {
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    rhs(t + c2 * h, ytmp, k2);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, ytmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * h, ytmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * h, ytmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                            a64 * k4[i] + a65 * k5[i]);
    rhs(t + h, ytmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                            b6 * k6[i]);
    rhs(t + h, ynew, k7);
    for (std::size_t i = 0; i < n; ++i)
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                    e6 * k6[i] + e7 * k7[i]);
  }
};

double error_norm(const std::vector<double>& err, const std::vector<double>& y0,
                  const std::vector<double>& y1, double atol, double rtol) {
  double m = 0.0;
  for (std::size_t i = 0; i < err.size(); ++i) {
    double scale = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    m = std::max(m, std::abs(err[i]) / scale);
  }
  return m;
}

// Starting step size following Hairer/Norsett/Wanner (II.4), max-norm variant.
double initial_step(const VectorField& rhs, double t0,
                    const std::vector<double>& y0, const std::vector<double>& f0,
                    double dir, double span, double atol, double rtol,
                    StepStats& stats) {
  const std::size_t n = y0.size();
  double d0 = 0.0, d1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double scale = atol + rtol * std::abs(y0[i]);
    d0 = std::max(d0, std::abs(y0[i]) / scale);
    d1 = std::max(d1, std::abs(f0[i]) / scale);
  }
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, span);

  std::vector<double> y1(n), f1(n);
  for (std::size_t i = 0; i < n; ++i) y1[i] = y0[i] + dir * h0 * f0[i];
  rhs(t0 + dir * h0, y1, f1);
  ++stats.rhs_evals;
  double d2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double scale = atol + rtol * std::abs(y0[i]);
    d2 = std::max(d2, std::abs(f1[i] - f0[i]) / scale);
  }
  d2 /= h0;

  double h1 = (std::max(d1, d2) <= 1e-15)
                  ? std::max(1e-6, h0 * 1e-3)
                  : std::pow(0.01 / std::max(d1, d2), 0.2);
  return std::min({100.0 * h0, h1, span});
}

RawTrajectory run_rk45(const VectorField& rhs, double t0, std::vector<double> y0,
                       double t_end, const IntegratorConfig& cfg) {
  RawTrajectory out;
  out.dense = cfg.dense;
  out.method = StepperKind::rk45_adaptive;
  out.rtol = cfg.rtol;
  out.atol = cfg.atol;

  const std::size_t n = y0.size();
  const double dir = (t_end >= t0) ? 1.0 : -1.0;
  const double span = std::abs(t_end - t0);

  std::vector<double> f0(n);
  rhs(t0, y0, f0);
  ++out.stats.rhs_evals;
  if (!all_finite(f0) || !all_finite(y0)) {
    out.failure = NumericalFailure{NumericalFailure::Kind::non_finite, t0,
                                   "non-finite state or derivative at start"};
    return out;
  }

  out.ts.push_back(t0);
  out.ys.push_back(y0);
  if (cfg.dense) out.fs.push_back(f0);
  if (span == 0.0) return out;

  double h = initial_step(rhs, t0, y0, f0, dir, span, cfg.atol, cfg.rtol,
                          out.stats);

  Dopri stepper(rhs, n);
  std::vector<double> y = std::move(y0), k1 = std::move(f0);
  std::vector<double> ynew(n), k7(n), err(n);
  double t = t0;
  double err_prev = 1e-4;  // PI controller memory
  const double safety = 0.9, alpha = 0.17, beta = 0.04;

  while (dir * (t_end - t) > 0.0) {
    if (out.stats.accepted + out.stats.rejected >= cfg.max_steps) {
      out.failure = NumericalFailure{NumericalFailure::Kind::max_steps_exceeded,
                                     t, "step budget exhausted"};
      return out;
    }
    double hmin = 16.0 * std::numeric_limits<double>::epsilon() *
                  std::max(std::abs(t), std::abs(t_end));
    bool last = false;
    if (h >= std::abs(t_end - t)) {
      h = std::abs(t_end - t);
      last = true;
    }

    stepper.step(t, y, k1, dir * h, ynew, k7, err);
    out.stats.rhs_evals += 6;

    if (!all_finite(ynew)) {
      out.failure = NumericalFailure{NumericalFailure::Kind::non_finite, t,
                                     "non-finite state during step"};
      return out;
    }
    double e = error_norm(err, y, ynew, cfg.atol, cfg.rtol);

    if (e <= 1.0) {
      ++out.stats.accepted;
      t = last ? t_end : t + dir * h;
      y.swap(ynew);
      k1.swap(k7);  // FSAL
      out.ts.push_back(t);
      out.ys.push_back(y);
      if (cfg.dense) out.fs.push_back(k1);

      double fac = safety * std::pow(std::max(e, 1e-16), -alpha) *
                   std::pow(err_prev, beta);
      h *= std::clamp(fac, 0.2, 5.0);
      err_prev = std::max(e, 1e-4);
    } else {
      ++out.stats.rejected;
      if (h <= hmin) {
        out.failure = NumericalFailure{NumericalFailure::Kind::step_underflow, t,
                                       "step size underflow"};
        return out;
      }
      h *= std::clamp(safety * std::pow(e, -0.2), 0.2, 1.0);
    }
    if (h < hmin && dir * (t_end - t) > 0.0) {
      out.failure = NumericalFailure{NumericalFailure::Kind::step_underflow, t,
                                     "step size underflow"};
      return out;
    }
  }
  return out;
}

RawTrajectory run_rk4(const VectorField& rhs, double t0, std::vector<double> y0,
                      double t_end, const IntegratorConfig& cfg) {
  RawTrajectory out;
  out.dense = cfg.dense;
  out.method = StepperKind::rk4_fixed;
  out.dt = cfg.dt;

  const std::size_t n = y0.size();
  const double dir = (t_end >= t0) ? 1.0 : -1.0;
  const double span = std::abs(t_end - t0);
  const long nsteps = std::max(1L, static_cast<long>(std::ceil(span / cfg.dt)));
  if (nsteps > cfg.max_steps) {
    out.failure = NumericalFailure{NumericalFailure::Kind::max_steps_exceeded,
                                   t0, "fixed-step count exceeds budget"};
    return out;
  }

  std::vector<double> k1(n), k2(n), k3(n), k4(n), ytmp(n);
  std::vector<double> y = std::move(y0);
  double t = t0;

  rhs(t, y, k1);
  ++out.stats.rhs_evals;
  if (!all_finite(y) || !all_finite(k1)) {
    out.failure = NumericalFailure{NumericalFailure::Kind::non_finite, t,
                                   "non-finite state or derivative at start"};
    return out;
  }
  out.ts.push_back(t);
  out.ys.push_back(y);
  if (cfg.dense) out.fs.push_back(k1);
  if (span == 0.0) return out;

  for (long step = 0; step < nsteps; ++step) {
    // Final step is shortened to land exactly on t_end.
    double h = (step == nsteps - 1) ? dir * (t_end - t) : dir * cfg.dt;
    rhs(t, y, k1);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + 0.5 * h * k1[i];
    rhs(t + 0.5 * h, ytmp, k2);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + 0.5 * h * k2[i];
    rhs(t + 0.5 * h, ytmp, k3);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * k3[i];
    rhs(t + h, ytmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    out.stats.rhs_evals += 4;
    t = (step == nsteps - 1) ? t_end : t + h;

    if (!all_finite(y)) {
      out.failure = NumericalFailure{NumericalFailure::Kind::non_finite, t,
                                     "non-finite state during step"};
      return out;
    }
    ++out.stats.accepted;
    out.ts.push_back(t);
    out.ys.push_back(y);
    if (cfg.dense) {
      rhs(t, y, k1);
      ++out.stats.rhs_evals;
      out.fs.push_back(k1);
    }
  }
  return out;
}

}  // namespace

RawTrajectory integrate_raw(const VectorField& rhs, double t0,
                            std::vector<double> y0, double t_end,
                            const IntegratorConfig& cfg) {
  if (y0.empty()) throw std::invalid_argument("integrate: empty state");
  if (cfg.max_steps <= 0)
    throw std::invalid_argument("integrate: max_steps must be positive");
  if (cfg.method == StepperKind::rk4_fixed) {
    if (!(cfg.dt > 0.0))
      throw std::invalid_argument("integrate: dt must be positive");
    return run_rk4(rhs, t0, std::move(y0), t_end, cfg);
  }
  if (!(cfg.rtol > 0.0) || !(cfg.atol > 0.0))
    throw std::invalid_argument("integrate: tolerances must be positive");
  return run_rk45(rhs, t0, std::move(y0), t_end, cfg);
}

std::vector<double> sample_dense_raw(const RawTrajectory& traj, double t) {
  if (!traj.dense || traj.fs.size() != traj.ts.size())
    throw std::logic_error("sample_dense: trajectory has no dense output");
  if (traj.ts.size() < 2) {
    if (traj.ts.size() == 1 && t == traj.ts.front()) return traj.ys.front();
    throw std::out_of_range("sample_dense: trajectory too short");
  }

  const bool fwd = traj.ts.back() >= traj.ts.front();
  const double lo = fwd ? traj.ts.front() : traj.ts.back();
  const double hi = fwd ? traj.ts.back() : traj.ts.front();
  const double slack = 1e-9 * std::max({1.0, std::abs(lo), std::abs(hi)});
  if (t < lo - slack || t > hi + slack)
    throw std::out_of_range("sample_dense: time outside trajectory interval");
  double tc = std::clamp(t, lo, hi);

  // Locate the bracketing interval [ts[k], ts[k+1]] in integration order.
  std::size_t k;
  if (fwd) {
    auto it = std::upper_bound(traj.ts.begin(), traj.ts.end(), tc);
    k = static_cast<std::size_t>(std::distance(traj.ts.begin(), it));
    k = std::clamp<std::size_t>(k, 1, traj.ts.size() - 1) - 1;
  } else {
    auto it = std::upper_bound(traj.ts.begin(), traj.ts.end(), tc,
                               [](double a, double b) { return a > b; });
    k = static_cast<std::size_t>(std::distance(traj.ts.begin(), it));
    k = std::clamp<std::size_t>(k, 1, traj.ts.size() - 1) - 1;
  }

  const double t0 = traj.ts[k], t1 = traj.ts[k + 1], h = t1 - t0;
  const auto& y0 = traj.ys[k];
  const auto& y1 = traj.ys[k + 1];
  const auto& f0 = traj.fs[k];
  const auto& f1 = traj.fs[k + 1];
  const double s = (tc - t0) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;

  std::vector<double> y(y0.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
  return y;
}

State Trajectory::state_at(std::size_t i) const {
  const auto& y = raw.ys.at(i);
  State s;
  s.t = raw.ts[i];
  s.q.assign(y.begin(), y.begin() + dim);
  s.v.assign(y.begin() + dim, y.end());
  return s;
}

Trajectory integrate(const VectorField& rhs, const State& s0, double t_end,
                     const IntegratorConfig& cfg) {
  if (s0.q.size() != s0.v.size() || s0.q.empty())
    throw std::invalid_argument("integrate: q and v must be same nonzero size");
  std::vector<double> y0;
  y0.reserve(2 * s0.q.size());
  y0.insert(y0.end(), s0.q.begin(), s0.q.end());
  y0.insert(y0.end(), s0.v.begin(), s0.v.end());
  Trajectory traj;
  traj.dim = static_cast<int>(s0.q.size());
  traj.raw = integrate_raw(rhs, s0.t, std::move(y0), t_end, cfg);
  return traj;
}

std::vector<State> sample_dense(const Trajectory& traj,
                                const std::vector<double>& times) {
  std::vector<State> out;
  out.reserve(times.size());
  for (double t : times) {
    std::vector<double> y = sample_dense_raw(traj.raw, t);
    State s;
    s.t = t;
    s.q.assign(y.begin(), y.begin() + traj.dim);
    s.v.assign(y.begin() + traj.dim, y.end());
    out.push_back(std::move(s));
  }
  return out;
}

Trajectory trajectory_from_states(const std::vector<State>& samples) {
  if (samples.empty())
    throw std::invalid_argument("trajectory_from_states: no samples");
  Trajectory traj;
  traj.dim = static_cast<int>(samples.front().q.size());
  traj.raw.dense = false;
  for (const auto& s : samples) {
    if (s.q.size() != samples.front().q.size() || s.q.size() != s.v.size())
      throw std::invalid_argument("trajectory_from_states: inconsistent dims");
    traj.raw.ts.push_back(s.t);
    std::vector<double> y;
    y.reserve(2 * s.q.size());
    y.insert(y.end(), s.q.begin(), s.q.end());
    y.insert(y.end(), s.v.begin(), s.v.end());
    traj.raw.ys.push_back(std::move(y));
  }
  return traj;
}

Trajectory merge_two_sided(const Trajectory& backward, const Trajectory& forward) {
  if (backward.dim != forward.dim)
    throw std::invalid_argument("merge_two_sided: dimension mismatch");
  if (backward.raw.ts.empty() || forward.raw.ts.empty())
    throw std::invalid_argument("merge_two_sided: empty leg");
  if (backward.raw.ts.front() != forward.raw.ts.front())
    throw std::invalid_argument("merge_two_sided: legs must share the anchor time");

  Trajectory out;
  out.dim = forward.dim;
  auto& r = out.raw;
  const auto& b = backward.raw;
  const auto& f = forward.raw;

  r.dense = b.dense && f.dense;
  r.method = f.method;
  r.rtol = f.rtol;
  r.atol = f.atol;
  r.dt = f.dt;
  r.stats.accepted = b.stats.accepted + f.stats.accepted;
  r.stats.rejected = b.stats.rejected + f.stats.rejected;
  r.stats.rhs_evals = b.stats.rhs_evals + f.stats.rhs_evals;
  if (b.failure) {
    r.failure = b.failure;
    r.failure->message = "backward leg: " + r.failure->message;
  } else if (f.failure) {
    r.failure = f.failure;
    r.failure->message = "forward leg: " + r.failure->message;
  }

  const std::size_t nb = b.ts.size();
  r.ts.reserve(nb + f.ts.size() - 1);
  r.ys.reserve(nb + f.ts.size() - 1);
  for (std::size_t i = nb; i-- > 1;) {  // skip the shared anchor sample
    r.ts.push_back(b.ts[i]);
    r.ys.push_back(b.ys[i]);
    if (r.dense) r.fs.push_back(b.fs[i]);
  }
  for (std::size_t i = 0; i < f.ts.size(); ++i) {
    r.ts.push_back(f.ts[i]);
    r.ys.push_back(f.ys[i]);
    if (r.dense) r.fs.push_back(f.fs[i]);
  }
  return out;
}

}  // namespace modlab
