#include "modlab/runio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace modlab {

namespace {

using nlohmann::json;

std::string fmt(double x, const char* spec = "%.12g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

void write_file(const std::string& dir, const std::string& name,
                const std::string& content) {
  const std::filesystem::path p = std::filesystem::path(dir) / name;
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + p.string());
  out << content;
  out.close();
  if (out.fail()) throw std::runtime_error("write failed: " + p.string());
}

json failure_json(const NumericalFailure& f) {
  const char* kind = "non-finite";
  switch (f.kind) {
    case NumericalFailure::Kind::step_underflow:
      kind = "step-underflow";
      break;
    case NumericalFailure::Kind::max_steps_exceeded:
      kind = "max-steps-exceeded";
      break;
    case NumericalFailure::Kind::non_finite:
      kind = "non-finite";
      break;
  }
  return json{{"kind", kind}, {"t", f.t}, {"message", f.message}};
}

const char* cell_color(Stability s) {
  switch (s) {
    case Stability::bounded_oscillatory:
      return "#2e7d32";
    case Stability::marginal:
      return "#f9a825";
    case Stability::unstable:
      return "#c62828";
    case Stability::out_of_domain:
      return "#9e9e9e";
  }
  return "#000000";
}

// Pads a data range by 5% and guards against zero width.
void pad_range(double& lo, double& hi) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  } else {
    const double m = 0.05 * (hi - lo);
    lo -= m;
    hi += m;
  }
}

std::string svg_open(double w, double h) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"";
  s += fmt(w, "%.0f");
  s += "\" height=\"";
  s += fmt(h, "%.0f");
  s += "\" viewBox=\"0 0 " + fmt(w, "%.0f") + " " + fmt(h, "%.0f") + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + fmt(w, "%.0f") + "\" height=\"" +
       fmt(h, "%.0f") + "\" fill=\"#ffffff\"/>\n";
  return s;
}

std::string svg_text(double x, double y, const std::string& text,
                     const char* anchor = "start",
                     const char* transform = nullptr) {
  std::string s = "<text x=\"" + fmt(x, "%.1f") + "\" y=\"" + fmt(y, "%.1f") +
                  "\" font-family=\"sans-serif\" font-size=\"13\" fill=\"#222\"" +
                  " text-anchor=\"" + anchor + "\"";
  if (transform) s += std::string(" transform=\"") + transform + "\"";
  s += ">" + text + "</text>\n";
  return s;
}

}  // namespace

const char* run_mode_name(RunMode m) {
  switch (m) {
    case RunMode::simulate:
      return "simulate";
    case RunMode::invariants_only:
      return "invariants";
    case RunMode::floquet:
      return "floquet";
    case RunMode::sweep:
      return "sweep";
    case RunMode::hopf:
      return "hopf";
    case RunMode::figure:
      return "figure";
  }
  return "?";
}

Trajectory integrate_span(const SystemSpec& sys, const InitialCondition& ic,
                          double t_from, double t_to,
                          const IntegratorConfig& cfg) {
  if (!(t_from < t_to))
    throw std::invalid_argument("integrate_span: t_from must be < t_to");
  if (ic.t < t_from || ic.t > t_to)
    throw std::invalid_argument("integrate_span: initial time outside span");

  // A modulation-positivity violation mid-run surfaces as a thrown domain
  // error from the profile; map it to NaN derivatives so the integrator
  // records a non-finite failure and keeps the partial trajectory.
  const VectorField inner = newtonian_field(sys);
  const VectorField rhs = [inner](double t, const std::vector<double>& y,
                                  std::vector<double>& dy) {
    try {
      inner(t, y, dy);
    } catch (const std::domain_error&) {
      std::fill(dy.begin(), dy.end(),
                std::numeric_limits<double>::quiet_NaN());
    }
  };

  const State s0{ic.t, ic.q, ic.v};
  const double slack =
      1e-12 * std::max({1.0, std::abs(t_from), std::abs(t_to)});
  if (ic.t <= t_from + slack) return integrate(rhs, s0, t_to, cfg);
  if (ic.t >= t_to - slack) {
    Trajectory back = integrate(rhs, s0, t_from, cfg);
    std::reverse(back.raw.ts.begin(), back.raw.ts.end());
    std::reverse(back.raw.ys.begin(), back.raw.ys.end());
    std::reverse(back.raw.fs.begin(), back.raw.fs.end());
    return back;
  }
  const Trajectory back = integrate(rhs, s0, t_from, cfg);
  const Trajectory fwd = integrate(rhs, s0, t_to, cfg);
  return merge_two_sided(back, fwd);
}

std::vector<State> resample_uniform(const Trajectory& traj, int samples) {
  if (traj.size() == 0)
    throw std::invalid_argument("resample_uniform: empty trajectory");
  if (samples < 2)
    throw std::invalid_argument("resample_uniform: need at least 2 samples");
  if (!traj.raw.dense || traj.size() == 1) {
    // No interpolant available: hand back the stored samples.
    std::vector<State> out;
    out.reserve(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) out.push_back(traj.state_at(i));
    return out;
  }
  double lo = traj.raw.ts.front(), hi = traj.raw.ts.back();
  if (lo > hi) std::swap(lo, hi);
  std::vector<double> times(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i)
    times[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / (samples - 1);
  times.back() = hi;
  return sample_dense(traj, times);
}

std::string trajectory_csv(const std::vector<State>& samples,
                           const ModulationProfile& profile,
                           const InvariantSet* invariants) {
  if (samples.empty())
    throw std::invalid_argument("trajectory_csv: no samples");
  const std::size_t d = samples.front().q.size();
  if (d != 1 && d != 2)
    throw std::invalid_argument("trajectory_csv: 1- or 2-dimensional only");

  std::string out = "t,x,vx";
  if (d == 2) out += ",y,vy";
  if (invariants)
    for (const std::string& label : invariants->labels) out += "," + label;
  out += "\n";

  for (const State& s : samples) {
    out += fmt(s.t);
    for (std::size_t i = 0; i < d; ++i) {
      out += "," + fmt(s.q[i]) + "," + fmt(s.v[i]);
    }
    if (invariants) {
      for (const InvariantFn& fn : invariants->eval) {
        double val = std::numeric_limits<double>::quiet_NaN();
        try {
          val = fn(s, profile.omega(s.t));
        } catch (const std::domain_error&) {
        }
        out += "," + fmt(val);
      }
    }
    out += "\n";
  }
  return out;
}

nlohmann::json trajectory_table_json(const std::vector<State>& samples,
                                     const ModulationProfile& profile,
                                     const InvariantSet* invariants) {
  if (samples.empty())
    throw std::invalid_argument("trajectory_table_json: no samples");
  const std::size_t d = samples.front().q.size();
  if (d != 1 && d != 2)
    throw std::invalid_argument("trajectory_table_json: 1- or 2-dimensional only");

  json columns = json::array({"t", "x", "vx"});
  if (d == 2) {
    columns.push_back("y");
    columns.push_back("vy");
  }
  if (invariants)
    for (const std::string& label : invariants->labels) columns.push_back(label);

  json rows = json::array();
  for (const State& s : samples) {
    json row = json::array();
    row.push_back(s.t);
    for (std::size_t i = 0; i < d; ++i) {
      row.push_back(s.q[i]);
      row.push_back(s.v[i]);
    }
    if (invariants) {
      for (const InvariantFn& fn : invariants->eval) {
        double val = std::numeric_limits<double>::quiet_NaN();
        try {
          val = fn(s, profile.omega(s.t));
        } catch (const std::domain_error&) {
        }
        row.push_back(val);
      }
    }
    rows.push_back(std::move(row));
  }
  return json{{"columns", columns}, {"rows", rows}};
}

std::string portrait_svg(const PhasePortrait& p) {
  const char* xl = p.index == 0 ? "x" : "y";
  const char* yl = p.index == 0 ? "vx" : "vy";
  const double W = 720, H = 540;
  const double L = 70, R = 690, T = 30, B = 470;

  double qlo = p.q_min, qhi = p.q_max, vlo = p.v_min, vhi = p.v_max;
  pad_range(qlo, qhi);
  pad_range(vlo, vhi);
  const auto mx = [&](double u) { return L + (u - qlo) / (qhi - qlo) * (R - L); };
  const auto my = [&](double u) { return B - (u - vlo) / (vhi - vlo) * (B - T); };

  std::string s = svg_open(W, H);
  s += "<rect x=\"" + fmt(L, "%.1f") + "\" y=\"" + fmt(T, "%.1f") +
       "\" width=\"" + fmt(R - L, "%.1f") + "\" height=\"" + fmt(B - T, "%.1f") +
       "\" fill=\"none\" stroke=\"#444444\"/>\n";

  if (p.points.empty()) {
    s += svg_text((L + R) / 2, (T + B) / 2, "no data", "middle");
  } else {
    s += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1\" points=\"";
    for (const auto& pt : p.points) {
      s += fmt(mx(pt[0]), "%.2f");
      s += ",";
      s += fmt(my(pt[1]), "%.2f");
      s += " ";
    }
    s += "\"/>\n";
  }

  s += svg_text(L, B + 18, fmt(qlo, "%.4g"));
  s += svg_text(R, B + 18, fmt(qhi, "%.4g"), "end");
  s += svg_text(L - 8, B, fmt(vlo, "%.4g"), "end");
  s += svg_text(L - 8, T + 10, fmt(vhi, "%.4g"), "end");
  s += svg_text((L + R) / 2, B + 40, xl, "middle");
  s += svg_text(18, (T + B) / 2, yl, "middle",
                ("rotate(-90 18 " + fmt((T + B) / 2, "%.1f") + ")").c_str());
  s += "</svg>\n";
  return s;
}

std::string sweep_csv(const StabilityGrid& grid) {
  std::string out = "a,q,max_abs_multiplier,classification\n";
  for (std::size_t ia = 0; ia < grid.a_values.size(); ++ia) {
    for (std::size_t iq = 0; iq < grid.q_values.size(); ++iq) {
      const StabilityCell& c = grid.cell(ia, iq);
      out += fmt(grid.a_values[ia]) + "," + fmt(grid.q_values[iq]) + "," +
             fmt(c.max_abs_multiplier) + "," + stability_name(c.cls) + "\n";
    }
  }
  return out;
}

std::string sweep_svg(const StabilityGrid& grid) {
  const double W = 760, H = 560;
  const double L = 80, R = 700, T = 40, B = 460;
  const std::size_t na = grid.a_values.size(), nq = grid.q_values.size();

  std::string s = svg_open(W, H);
  s += svg_text(W / 2, 22, std::string("stability sweep: ") +
                               sweep_family_name(grid.family),
                "middle");

  const double cw = (R - L) / static_cast<double>(na);
  const double ch = (B - T) / static_cast<double>(nq);
  for (std::size_t ia = 0; ia < na; ++ia) {
    for (std::size_t iq = 0; iq < nq; ++iq) {
      const double x = L + static_cast<double>(ia) * cw;
      const double y = B - static_cast<double>(iq + 1) * ch;
      s += "<rect x=\"" + fmt(x, "%.2f") + "\" y=\"" + fmt(y, "%.2f") +
           "\" width=\"" + fmt(cw, "%.2f") + "\" height=\"" + fmt(ch, "%.2f") +
           "\" fill=\"" + cell_color(grid.cell(ia, iq).cls) + "\"/>\n";
    }
  }
  s += "<rect x=\"" + fmt(L, "%.1f") + "\" y=\"" + fmt(T, "%.1f") +
       "\" width=\"" + fmt(R - L, "%.1f") + "\" height=\"" + fmt(B - T, "%.1f") +
       "\" fill=\"none\" stroke=\"#444444\"/>\n";

  s += svg_text(L, B + 18, fmt(grid.a_values.front(), "%.4g"));
  s += svg_text(R, B + 18, fmt(grid.a_values.back(), "%.4g"), "end");
  s += svg_text(L - 8, B, fmt(grid.q_values.front(), "%.4g"), "end");
  s += svg_text(L - 8, T + 10, fmt(grid.q_values.back(), "%.4g"), "end");
  s += svg_text((L + R) / 2, B + 40, "a", "middle");
  s += svg_text(20, (T + B) / 2, "q", "middle",
                ("rotate(-90 20 " + fmt((T + B) / 2, "%.1f") + ")").c_str());

  const std::pair<Stability, const char*> legend[] = {
      {Stability::bounded_oscillatory, "bounded-oscillatory"},
      {Stability::marginal, "marginal"},
      {Stability::unstable, "unstable"},
      {Stability::out_of_domain, "out-of-domain"}};
  double lx = L;
  for (const auto& [cls, name] : legend) {
    s += "<rect x=\"" + fmt(lx, "%.1f") + "\" y=\"510\" width=\"14\" height=\"14\" fill=\"" +
         cell_color(cls) + "\"/>\n";
    s += svg_text(lx + 20, 522, name);
    lx += 40 + 8.0 * std::string(name).size();
  }
  s += "</svg>\n";
  return s;
}

std::string hopf_csv(const HopfRunResult& result) {
  std::string out = "t,x,y,omega\n";
  for (std::size_t i = 0; i < result.ts.size(); ++i) {
    out += fmt(result.ts[i]) + "," + fmt(result.states[i][0]) + "," +
           fmt(result.states[i][1]) + "," + fmt(result.states[i][2]) + "\n";
  }
  return out;
}

nlohmann::json monodromy_json(const MonodromyResult& m) {
  json matrix = json::array();
  for (Eigen::Index i = 0; i < m.M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.M.cols(); ++j) row.push_back(m.M(i, j));
    matrix.push_back(std::move(row));
  }
  json multipliers = json::array();
  double max_abs = 0.0;
  for (const auto& lam : m.multipliers) {
    max_abs = std::max(max_abs, std::abs(lam));
    multipliers.push_back(
        {{"re", lam.real()}, {"im", lam.imag()}, {"abs", std::abs(lam)}});
  }
  json exponents = json::array();
  for (const auto& mu : m.exponents)
    exponents.push_back({{"re", mu.real()}, {"im", mu.imag()}});
  return json{{"period", m.period},
              {"det", m.det},
              {"classification", stability_name(m.cls)},
              {"max_abs_multiplier", max_abs},
              {"matrix", matrix},
              {"multipliers", multipliers},
              {"exponents", exponents}};
}

nlohmann::json drift_json(const InvariantReport& report) {
  json entries = json::array();
  for (const DriftEntry& e : report.entries) {
    entries.push_back({{"label", e.label},
                       {"initial", e.initial},
                       {"max_abs_drift", e.max_abs},
                       {"max_rel_drift", e.max_rel},
                       {"t_at_max", e.t_at_max}});
  }
  return json{{"window", {{"from", report.t_lo}, {"to", report.t_hi}}},
              {"samples", report.samples},
              {"entries", entries}};
}

nlohmann::json verdict_json(const TrapVerdict& verdict) {
  json coords = json::array();
  for (std::size_t i = 0; i < verdict.coords.size(); ++i) {
    const CoordinateVerdict& cv = verdict.coords[i];
    json c = {{"coordinate", i == 0 ? "x" : "y"},
              {"fate",
               cv.fate == CoordinateFate::trapped ? "trapped" : "escaped"},
              {"max_abs", cv.max_abs}};
    if (cv.escape_time) c["escape_time"] = *cv.escape_time;
    coords.push_back(std::move(c));
  }
  return json{{"overall", verdict.overall},
              {"radius", verdict.radius},
              {"max_norm", verdict.max_norm},
              {"coordinates", coords}};
}

namespace {

// Shared trajectory pipeline for simulate, invariants, and figure modes.
void run_trajectory_modes(const ExperimentConfig& cfg, const RunOptions& opts,
                          RunResult& result) {
  if (!cfg.system)
    throw ConfigError("system", "required for this mode");
  if (!cfg.initial)
    throw ConfigError("initial", "required for this mode");
  if (!cfg.has_time)
    throw ConfigError("time", "required for this mode");

  const SystemSpec& sys = *cfg.system;
  const Trajectory traj =
      integrate_span(sys, *cfg.initial, cfg.t_from, cfg.t_to, cfg.integrator);
  if (!traj.ok()) {
    result.summary["status"] = "numerical-failure";
    result.summary["failure"] = failure_json(*traj.raw.failure);
    result.exit_code = 3;
  }

  const std::vector<State> samples = resample_uniform(traj, cfg.output.samples);
  const Trajectory sampled = trajectory_from_states(samples);

  InvariantSet inv;
  if (cfg.analysis.invariants) inv = invariant_set_for(sys);
  const InvariantSet* inv_ptr = cfg.analysis.invariants ? &inv : nullptr;

  json results;
  if (inv_ptr) results["invariants"] = drift_json(drift_report(sampled, sys));

  const State s0{cfg.initial->t, cfg.initial->q, cfg.initial->v};
  const double radius = cfg.analysis.escape_radius
                            ? *cfg.analysis.escape_radius
                            : default_escape_radius(s0);
  const TrapVerdict verdict = classify_trapping(sampled, radius);
  results["verdict"] = verdict_json(verdict);

  // On escaping runs the full-window drift is dominated by cancellation on
  // huge states; report the drift up to the first escape separately.
  if (inv_ptr) {
    double t_escape = std::numeric_limits<double>::infinity();
    for (const CoordinateVerdict& cv : verdict.coords)
      if (cv.escape_time) t_escape = std::min(t_escape, *cv.escape_time);
    if (std::isfinite(t_escape) && t_escape > samples.front().t)
      results["invariants_pre_escape"] =
          drift_json(drift_report(sampled, sys, samples.front().t, t_escape));
  }

  results["steps"] = {{"accepted", traj.raw.stats.accepted},
                      {"rejected", traj.raw.stats.rejected},
                      {"rhs_evals", traj.raw.stats.rhs_evals}};
  results["trajectory"] = {{"rows", samples.size()},
                           {"t_from", samples.front().t},
                           {"t_to", samples.back().t}};
  result.summary["results"] = std::move(results);

  if (opts.mode == RunMode::invariants_only) return;

  if (cfg.output.csv) {
    if (cfg.output.format == "json") {
      write_file(opts.out_dir, "trajectory.json",
                 trajectory_table_json(samples, sys.profile, inv_ptr).dump(2) +
                     "\n");
      result.artifacts.push_back("trajectory.json");
    } else {
      write_file(opts.out_dir, "trajectory.csv",
                 trajectory_csv(samples, sys.profile, inv_ptr));
      result.artifacts.push_back("trajectory.csv");
    }
  }
  if (cfg.output.svg) {
    const PhasePortrait portrait =
        phase_portrait(sampled, cfg.output.portrait_coordinate);
    write_file(opts.out_dir, "portrait.svg", portrait_svg(portrait));
    result.artifacts.push_back("portrait.svg");
  }
}

void run_floquet_mode(const ExperimentConfig& cfg, const RunOptions& opts,
                      RunResult& result) {
  if (!cfg.system) throw ConfigError("system", "required for floquet mode");
  const FloquetOptions fopts = cfg.floquet.value_or(FloquetOptions{});
  double T = 0.0;
  if (fopts.period) {
    T = *fopts.period;
  } else {
    const auto p = cfg.system->profile.period();
    if (!p)
      throw ConfigError("floquet.period",
                        "required for the constant profile (no canonical "
                        "period exists)");
    T = *p;
  }
  IntegratorConfig icfg = cfg.integrator;
  icfg.rtol = fopts.rtol;
  icfg.atol = fopts.atol;
  MonodromyResult m;
  try {
    m = monodromy(*cfg.system, T, icfg);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("floquet", e.what());
  }
  const json mj = monodromy_json(m);
  result.summary["results"] = {{"floquet", mj}};
  write_file(opts.out_dir, "floquet.json", mj.dump(2) + "\n");
  result.artifacts.push_back("floquet.json");
}

void run_sweep_mode(const ExperimentConfig& cfg, const RunOptions& opts,
                    RunResult& result) {
  if (!cfg.sweep) throw ConfigError("sweep", "required for sweep mode");
  const StabilityGrid grid =
      stability_sweep(cfg.sweep->family, cfg.sweep->a_axis, cfg.sweep->q_axis,
                      cfg.integrator, opts.jobs);

  std::size_t counts[4] = {0, 0, 0, 0};
  for (const StabilityCell& c : grid.cells)
    ++counts[static_cast<std::size_t>(c.cls)];
  result.summary["results"] = {
      {"sweep",
       {{"family", sweep_family_name(grid.family)},
        {"cells", grid.cells.size()},
        {"bounded_oscillatory",
         counts[static_cast<std::size_t>(Stability::bounded_oscillatory)]},
        {"marginal", counts[static_cast<std::size_t>(Stability::marginal)]},
        {"unstable", counts[static_cast<std::size_t>(Stability::unstable)]},
        {"out_of_domain",
         counts[static_cast<std::size_t>(Stability::out_of_domain)]}}}};

  write_file(opts.out_dir, "sweep_grid.csv", sweep_csv(grid));
  result.artifacts.push_back("sweep_grid.csv");
  if (cfg.output.svg) {
    write_file(opts.out_dir, "sweep.svg", sweep_svg(grid));
    result.artifacts.push_back("sweep.svg");
  }
}

void run_hopf_mode(const ExperimentConfig& cfg, const RunOptions& opts,
                   RunResult& result) {
  const HopfOptions h = cfg.hopf.value_or(HopfOptions{});
  const HopfRunResult r =
      run_adaptive_hopf(h.mu, h.eps, h.forcing, h.omega0, h.x0, h.y0,
                        h.horizon, cfg.integrator, cfg.output.samples);
  if (r.failure) {
    result.summary["status"] = "numerical-failure";
    result.summary["failure"] = failure_json(*r.failure);
    result.exit_code = 3;
  }
  result.summary["results"] = {
      {"hopf",
       {{"terminal_mean_omega", r.terminal_mean_omega},
        {"final_omega", r.states.empty() ? 0.0 : r.states.back()[2]},
        {"forcing_frequency", h.forcing.frequency},
        {"horizon", h.horizon},
        {"rows", r.ts.size()}}}};

  write_file(opts.out_dir, "hopf.csv", hopf_csv(r));
  result.artifacts.push_back("hopf.csv");
}

}  // namespace

RunResult run(const ExperimentConfig& cfg_in, const RunOptions& opts) {
  ExperimentConfig cfg = cfg_in;
  std::vector<FigureParamRecord> records;
  if (opts.mode == RunMode::figure) {
    FigurePreset preset;
    try {
      preset = preset_figure(opts.figure);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("figure", e.what());
    }
    // Output handling and the seed stay user-controlled; the physics of the
    // preset does not.
    preset.config.output = cfg_in.output;
    preset.config.seed = cfg_in.seed;
    records = std::move(preset.records);
    cfg = std::move(preset.config);
  }

  std::filesystem::create_directories(opts.out_dir);

  RunResult result;
  result.summary["mode"] = run_mode_name(opts.mode);
  result.summary["status"] = "ok";

  switch (opts.mode) {
    case RunMode::simulate:
    case RunMode::invariants_only:
    case RunMode::figure:
      run_trajectory_modes(cfg, opts, result);
      break;
    case RunMode::floquet:
      run_floquet_mode(cfg, opts, result);
      break;
    case RunMode::sweep:
      run_sweep_mode(cfg, opts, result);
      break;
    case RunMode::hopf:
      run_hopf_mode(cfg, opts, result);
      break;
  }

  result.summary["config"] = config_to_json(cfg);
  if (opts.mode == RunMode::figure) {
    result.summary["figure"] = opts.figure;
    json recs = json::array();
    for (const FigureParamRecord& r : records)
      recs.push_back({{"label", r.label},
                      {"params", r.params},
                      {"runnable", r.runnable},
                      {"note", r.note}});
    result.summary["records"] = std::move(recs);
  }

  result.artifacts.push_back("summary.json");
  result.summary["artifacts"] = result.artifacts;
  write_file(opts.out_dir, "summary.json", result.summary.dump(2) + "\n");
  return result;
}

}  // namespace modlab
