#include "modlab/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace modlab {

namespace {

bool canonical_saddle_signature(const SystemSpec& sys) {
  return sys.signature.sigma.size() == 2 && sys.signature.sigma[0] == 1 &&
         sys.signature.sigma[1] == -1;
}

}  // namespace

std::pair<double, double> kapitza_integrals(const State& s, double omega) {
  const double x = s.q[0], y = s.q[1];
  const double u = s.v[0] / omega, w = s.v[1] / omega;
  const double i1 = 0.5 * (u * u - w * w) + 0.5 * (x * x - y * y) + x * y;
  const double i2 = u * w - 0.5 * (x * x - y * y) + x * y;
  return {i1, i2};
}

std::pair<double, double> monkey_integrals(const State& s, double omega) {
  const double x = s.q[0], y = s.q[1];
  const double u = s.v[0] / omega, w = s.v[1] / omega;
  const double g2 = x * x * x / 3.0 - x * y * y;
  const double g2r = x * x * y - y * y * y / 3.0;
  const double i1 = 0.5 * (u * u - w * w) + g2 + g2r;
  const double i2 = u * w + g2r - g2;
  return {i1, i2};
}

double kapitza_invariant_phase(int which, const std::vector<double>& q,
                               const std::vector<double>& p) {
  const double x = q[0], y = q[1], px = p[0], py = p[1];
  if (which == 1)
    return 0.5 * (px * px - py * py) + 0.5 * (x * x - y * y) + x * y;
  if (which == 2) return -px * py - 0.5 * (x * x - y * y) + x * y;
  throw std::invalid_argument("kapitza_invariant_phase: which must be 1 or 2");
}

double monkey_invariant_phase(int which, const std::vector<double>& q,
                              const std::vector<double>& p) {
  const double x = q[0], y = q[1], px = p[0], py = p[1];
  const double g2 = x * x * x / 3.0 - x * y * y;
  const double g2r = x * x * y - y * y * y / 3.0;
  if (which == 1) return 0.5 * (px * px - py * py) + g2 + g2r;
  if (which == 2) return -px * py + g2r - g2;
  throw std::invalid_argument("monkey_invariant_phase: which must be 1 or 2");
}

double generic_integral(const SystemSpec& sys, const State& s) {
  const double w = sys.profile.omega(s.t);
  double kinetic = 0.0;
  for (std::size_t i = 0; i < s.v.size(); ++i) {
    const double u = s.v[i] / w;
    kinetic += 0.5 * sys.signature.sigma[i] * u * u;
  }
  return kinetic + sys.potential.value(s.q);
}

InvariantSet invariant_set_for(const SystemSpec& sys) {
  InvariantSet set;
  if (sys.potential.kind() == PotentialKind::simple_saddle_pair &&
      canonical_saddle_signature(sys)) {
    set.labels = {"I1", "I2"};
    set.eval.push_back([](const State& s, double w) {
      return kapitza_integrals(s, w).first;
    });
    set.eval.push_back([](const State& s, double w) {
      return kapitza_integrals(s, w).second;
    });
    return set;
  }
  if (sys.potential.kind() == PotentialKind::monkey_saddle_pair &&
      canonical_saddle_signature(sys)) {
    set.labels = {"I1", "I2"};
    set.eval.push_back(
        [](const State& s, double w) { return monkey_integrals(s, w).first; });
    set.eval.push_back(
        [](const State& s, double w) { return monkey_integrals(s, w).second; });
    return set;
  }
  set.labels = {"I1"};
  auto sigma = sys.signature.sigma;
  auto pot = sys.potential;
  set.eval.push_back([sigma, pot](const State& s, double w) {
    double kinetic = 0.0;
    for (std::size_t i = 0; i < s.v.size(); ++i) {
      const double u = s.v[i] / w;
      kinetic += 0.5 * sigma[i] * u * u;
    }
    return kinetic + pot.value(s.q);
  });
  return set;
}

InvariantReport drift_report(const Trajectory& traj, const SystemSpec& sys) {
  const double inf = std::numeric_limits<double>::infinity();
  return drift_report(traj, sys, -inf, inf);
}

InvariantReport drift_report(const Trajectory& traj, const SystemSpec& sys,
                             double t_lo, double t_hi) {
  if (t_lo > t_hi)
    throw std::invalid_argument("drift_report: empty window (t_lo > t_hi)");
  const InvariantSet set = invariant_set_for(sys);

  InvariantReport rep;
  rep.entries.resize(set.size());
  bool first = true;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.raw.ts[i];
    if (t < t_lo || t > t_hi) continue;
    const State s = traj.state_at(i);
    const double w = sys.profile.omega(t);
    if (first) {
      rep.t_lo = t;
      for (std::size_t k = 0; k < set.size(); ++k) {
        rep.entries[k].label = set.labels[k];
        rep.entries[k].initial = set.eval[k](s, w);
        rep.entries[k].t_at_max = t;
      }
      first = false;
    } else {
      for (std::size_t k = 0; k < set.size(); ++k) {
        const double d = std::abs(set.eval[k](s, w) - rep.entries[k].initial);
        if (d > rep.entries[k].max_abs) {
          rep.entries[k].max_abs = d;
          rep.entries[k].t_at_max = t;
        }
      }
    }
    rep.t_hi = t;
    ++rep.samples;
  }
  if (rep.samples == 0)
    throw std::invalid_argument("drift_report: window contains no samples");
  for (auto& e : rep.entries)
    e.max_rel = e.max_abs / std::max(std::abs(e.initial), 1e-12);
  return rep;
}

namespace {

double partial(const PhaseFunction& f, std::vector<double> q,
               std::vector<double> p, std::size_t i, bool wrt_q, double h) {
  auto diff = [&](double step) {
    double& c = wrt_q ? q[i] : p[i];
    const double saved = c;
    c = saved + step;
    const double fp = f(q, p);
    c = saved - step;
    const double fm = f(q, p);
    c = saved;
    return (fp - fm) / (2.0 * step);
  };
  // One Richardson refinement: (4 D(h/2) - D(h)) / 3.
  return (4.0 * diff(0.5 * h) - diff(h)) / 3.0;
}

}  // namespace

double poisson_bracket(const PhaseFunction& f, const PhaseFunction& g,
                       const std::vector<double>& q,
                       const std::vector<double>& p, double h) {
  if (q.size() != p.size())
    throw std::invalid_argument("poisson_bracket: q and p sizes differ");
  if (!(h > 0.0)) throw std::invalid_argument("poisson_bracket: h must be > 0");
  double sum = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    sum += partial(f, q, p, i, true, h) * partial(g, q, p, i, false, h) -
           partial(f, q, p, i, false, h) * partial(g, q, p, i, true, h);
  }
  return sum;
}

}  // namespace modlab
