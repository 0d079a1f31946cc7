#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "modlab/runio.hpp"

using namespace modlab;
namespace fs = std::filesystem;

namespace {

SystemSpec harmonic_unit() {
  return build_system(ModulationProfile::constant(1.0),
                      PotentialField::harmonic(), KineticSignature::plus_one());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Splits a CSV document into cells; every data cell must parse as a double.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

struct DirGuard {
  fs::path path;
  explicit DirGuard(const std::string& name) : path(name) {
    fs::remove_all(path);
  }
  ~DirGuard() { fs::remove_all(path); }
};

}  // namespace

TEST_SUITE_BEGIN("runio");

TEST_CASE("integrate_span merges two legs around an interior start") {
  const SystemSpec sys = harmonic_unit();
  InitialCondition ic;
  ic.t = 0.0;
  ic.q = {1.0};
  ic.v = {0.0};
  IntegratorConfig cfg;

  const Trajectory traj = integrate_span(sys, ic, -M_PI, M_PI, cfg);
  REQUIRE(traj.ok());
  REQUIRE(traj.size() > 4);
  // strictly increasing times covering the whole span
  for (std::size_t i = 1; i < traj.size(); ++i)
    CHECK(traj.raw.ts[i] > traj.raw.ts[i - 1]);
  CHECK(traj.raw.ts.front() == doctest::Approx(-M_PI));
  CHECK(traj.raw.ts.back() == doctest::Approx(M_PI));
  // x = cos t on both legs
  CHECK(traj.state_at(0).q[0] == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(traj.state_at(traj.size() - 1).q[0] ==
        doctest::Approx(-1.0).epsilon(1e-8));

  // forward-only and backward-only degenerate spans
  const Trajectory fwd = integrate_span(sys, ic, 0.0, 1.0, cfg);
  CHECK(fwd.raw.ts.front() == 0.0);
  CHECK(fwd.raw.ts.back() == doctest::Approx(1.0));
  const Trajectory back = integrate_span(sys, ic, -1.0, 0.0, cfg);
  CHECK(back.raw.ts.front() == doctest::Approx(-1.0));
  CHECK(back.raw.ts.back() == 0.0);
  for (std::size_t i = 1; i < back.size(); ++i)
    CHECK(back.raw.ts[i] > back.raw.ts[i - 1]);
  CHECK(back.state_at(0).q[0] == doctest::Approx(std::cos(1.0)).epsilon(1e-8));

  CHECK_THROWS_AS(integrate_span(sys, ic, 2.0, 1.0, cfg),
                  std::invalid_argument);
  InitialCondition outside = ic;
  outside.t = 5.0;
  CHECK_THROWS_AS(integrate_span(sys, outside, -1.0, 1.0, cfg),
                  std::invalid_argument);
}

TEST_CASE("resample_uniform covers the reached interval") {
  const SystemSpec sys = harmonic_unit();
  InitialCondition ic;
  ic.q = {1.0};
  ic.v = {0.0};
  IntegratorConfig cfg;
  const Trajectory traj = integrate_span(sys, ic, 0.0, 10.0, cfg);

  const std::vector<State> samples = resample_uniform(traj, 101);
  REQUIRE(samples.size() == 101);
  CHECK(samples.front().t == doctest::Approx(0.0));
  CHECK(samples.back().t == doctest::Approx(10.0));
  const double h = samples[1].t - samples[0].t;
  CHECK(h == doctest::Approx(0.1).epsilon(1e-12));
  for (std::size_t i = 0; i < samples.size(); ++i)
    CHECK(samples[i].q[0] ==
          doctest::Approx(std::cos(samples[i].t)).epsilon(1e-7));

  CHECK_THROWS_AS(resample_uniform(traj, 1), std::invalid_argument);
}

TEST_CASE("trajectory_csv format and header variants") {
  const SystemSpec sys = harmonic_unit();
  std::vector<State> samples = {{0.0, {1.0}, {0.0}},
                                {0.5, {0.877582561890373}, {-0.479425538604203}},
                                {1.0, {0.540302305868140}, {-0.841470984807897}}};

  const std::string bare = trajectory_csv(samples, sys.profile, nullptr);
  auto rows = parse_csv(bare);
  REQUIRE(rows.size() == 4);  // header + 3 samples
  CHECK(rows[0] == std::vector<std::string>{"t", "x", "vx"});
  CHECK(bare.back() == '\n');
  // 12 significant digits
  CHECK(rows[1][1] == "1");
  CHECK(rows[2][1] == "0.87758256189");

  const InvariantSet inv = invariant_set_for(sys);
  const std::string with_inv = trajectory_csv(samples, sys.profile, &inv);
  rows = parse_csv(with_inv);
  CHECK(rows[0] == std::vector<std::string>{"t", "x", "vx", "I1"});
  CHECK(std::strtod(rows[1][3].c_str(), nullptr) == doctest::Approx(0.5));

  // two-coordinate header ordering
  const SystemSpec kap = build_system(ModulationProfile::constant(1.0),
                                      PotentialField::simple_saddle_pair(),
                                      KineticSignature::saddle_pair());
  std::vector<State> pair_samples = {{0.0, {1.0, 0.0}, {0.0, 0.0}}};
  const InvariantSet kinv = invariant_set_for(kap);
  rows = parse_csv(trajectory_csv(pair_samples, kap.profile, &kinv));
  CHECK(rows[0] ==
        std::vector<std::string>{"t", "x", "vx", "y", "vy", "I1", "I2"});

  CHECK_THROWS_AS(trajectory_csv({}, sys.profile, nullptr),
                  std::invalid_argument);
}

TEST_CASE("csv round trip reproduces the drift report") {
  const SystemSpec sys = build_system(ModulationProfile::sqrt_cosine(0.25, 0.1),
                                      PotentialField::harmonic(),
                                      KineticSignature::plus_one());
  InitialCondition ic;
  ic.q = {0.1};
  ic.v = {0.0};
  IntegratorConfig cfg;
  const Trajectory traj = integrate_span(sys, ic, 0.0, 30.0, cfg);
  const std::vector<State> samples = resample_uniform(traj, 500);
  const Trajectory sampled = trajectory_from_states(samples);
  const InvariantReport report = drift_report(sampled, sys);
  REQUIRE(report.entries.size() == 1);

  const InvariantSet inv = invariant_set_for(sys);
  const auto rows = parse_csv(trajectory_csv(samples, sys.profile, &inv));
  REQUIRE(rows.size() == 501);

  double initial = 0.0, max_abs = 0.0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const double value = std::strtod(rows[r][3].c_str(), nullptr);
    if (r == 1) initial = value;
    max_abs = std::max(max_abs, std::abs(value - initial));
  }
  // re-derived maxima agree within the 12-digit representation precision
  CHECK(initial == doctest::Approx(report.entries[0].initial).epsilon(1e-11));
  CHECK(std::abs(max_abs - report.entries[0].max_abs) < 1e-11);
}

TEST_CASE("portrait svg is self-contained") {
  PhasePortrait p;
  p.index = 0;
  p.points = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}};
  p.q_min = -1.0;
  p.q_max = 1.0;
  p.v_min = 0.0;
  p.v_max = 1.0;
  const std::string svg = portrait_svg(p);
  CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\"") !=
        std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find(">x<") != std::string::npos);
  CHECK(svg.find(">vx<") != std::string::npos);
  CHECK(svg.find("http://") == svg.find("http://www.w3.org/2000/svg"));
  CHECK(svg.find("</svg>") != std::string::npos);

  PhasePortrait empty;
  empty.index = 1;
  const std::string blank = portrait_svg(empty);
  CHECK(blank.find("no data") != std::string::npos);
  CHECK(blank.find("polyline") == std::string::npos);
  CHECK(blank.find(">vy<") != std::string::npos);
}

TEST_CASE("sweep exports") {
  AxisSpec a{0.5, 1.5, 3};
  AxisSpec q{0.0, 0.2, 2};
  IntegratorConfig cfg;
  cfg.rtol = 1e-9;
  cfg.atol = 1e-11;
  const StabilityGrid grid =
      stability_sweep(SweepFamily::classical_mathieu, a, q, cfg, 2);

  const std::string csv = sweep_csv(grid);
  const auto rows = parse_csv(csv);
  REQUIRE(rows.size() == 1 + 6);
  CHECK(rows[0] == std::vector<std::string>{"a", "q", "max_abs_multiplier",
                                            "classification"});
  for (std::size_t r = 1; r < rows.size(); ++r) {
    REQUIRE(rows[r].size() == 4);
    const std::string& cls = rows[r][3];
    CHECK((cls == "bounded-oscillatory" || cls == "marginal" ||
           cls == "unstable" || cls == "out-of-domain"));
  }

  const std::string svg = sweep_svg(grid);
  std::size_t rects = 0;
  for (std::size_t pos = 0; (pos = svg.find("<rect", pos)) != std::string::npos;
       ++pos)
    ++rects;
  CHECK(rects >= 6);  // one per cell plus frame and legend swatches
  CHECK(svg.find("classical-mathieu") != std::string::npos);
  CHECK(svg.find("out-of-domain") != std::string::npos);
}

TEST_CASE("json report shapes") {
  const SystemSpec kap = build_system(
      ModulationProfile::cosine_squared(2.0, 1.0, 1.0),
      PotentialField::simple_saddle_pair(), KineticSignature::saddle_pair());
  IntegratorConfig cfg;
  cfg.rtol = 1e-12;
  cfg.atol = 1e-14;
  const MonodromyResult m = monodromy(kap, 2.0 * M_PI, cfg);
  const nlohmann::json mj = monodromy_json(m);
  CHECK(mj.at("det").get<double>() == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(mj.at("classification") == "unstable");
  CHECK(mj.at("matrix").size() == 4);
  CHECK(mj.at("multipliers").size() == 4);
  CHECK(mj.at("max_abs_multiplier").get<double>() ==
        doctest::Approx(53.328057465822).epsilon(1e-6));

  TrapVerdict v;
  v.overall = "mixed";
  v.radius = 2.0;
  v.max_norm = 5.0;
  CoordinateVerdict trapped;
  trapped.max_abs = 1.0;
  CoordinateVerdict escaped;
  escaped.fate = CoordinateFate::escaped;
  escaped.escape_time = 3.25;
  escaped.max_abs = 5.0;
  v.coords = {trapped, escaped};
  const nlohmann::json vj = verdict_json(v);
  CHECK(vj.at("overall") == "mixed");
  CHECK(vj.at("coordinates")[0].at("coordinate") == "x");
  CHECK(vj.at("coordinates")[0].at("fate") == "trapped");
  CHECK_FALSE(vj.at("coordinates")[0].contains("escape_time"));
  CHECK(vj.at("coordinates")[1].at("escape_time").get<double>() == 3.25);
}

TEST_CASE("run simulate writes coherent artifacts") {
  DirGuard dir("runio_sim_out");

  ExperimentConfig cfg;
  cfg.system = build_system(ModulationProfile::sqrt_cosine(0.25, 0.1),
                            PotentialField::harmonic(),
                            KineticSignature::plus_one());
  cfg.initial = InitialCondition{0.0, {0.1}, {0.0}};
  cfg.has_time = true;
  cfg.t_from = 0.0;
  cfg.t_to = 20.0;
  cfg.output.samples = 400;

  RunOptions opts;
  opts.mode = RunMode::simulate;
  opts.out_dir = dir.path.string();

  const RunResult result = run(cfg, opts);
  CHECK(result.exit_code == 0);
  CHECK(result.summary.at("status") == "ok");
  REQUIRE(result.artifacts ==
          std::vector<std::string>{"trajectory.csv", "portrait.svg",
                                   "summary.json"});
  for (const std::string& name : result.artifacts)
    CHECK(fs::exists(dir.path / name));

  // summary digests match the files and the recomputed report exactly
  const auto rows = parse_csv(slurp(dir.path / "trajectory.csv"));
  CHECK(rows.size() ==
        1 + result.summary.at("results").at("trajectory").at("rows")
                .get<std::size_t>());

  const Trajectory traj =
      integrate_span(*cfg.system, *cfg.initial, 0.0, 20.0, cfg.integrator);
  const Trajectory sampled =
      trajectory_from_states(resample_uniform(traj, 400));
  const InvariantReport report = drift_report(sampled, *cfg.system);
  const auto& entry =
      result.summary.at("results").at("invariants").at("entries").at(0);
  CHECK(entry.at("max_abs_drift").get<double>() == report.entries[0].max_abs);
  CHECK(entry.at("max_rel_drift").get<double>() == report.entries[0].max_rel);
  CHECK(entry.at("initial").get<double>() == report.entries[0].initial);

  // the summary echoes a config that parses back
  const ExperimentConfig echoed = parse_config(result.summary.at("config"));
  CHECK(echoed.t_to == 20.0);
  CHECK(echoed.output.samples == 400);
}

TEST_CASE("run invariants mode emits the summary only") {
  DirGuard dir("runio_inv_out");

  ExperimentConfig cfg;
  cfg.system = harmonic_unit();
  cfg.initial = InitialCondition{0.0, {1.0}, {0.0}};
  cfg.has_time = true;
  cfg.t_from = 0.0;
  cfg.t_to = 5.0;
  cfg.output.samples = 50;

  RunOptions opts;
  opts.mode = RunMode::invariants_only;
  opts.out_dir = dir.path.string();
  const RunResult result = run(cfg, opts);
  CHECK(result.artifacts == std::vector<std::string>{"summary.json"});
  CHECK(fs::exists(dir.path / "summary.json"));
  CHECK_FALSE(fs::exists(dir.path / "trajectory.csv"));
  CHECK(result.summary.at("results").contains("invariants"));
}

TEST_CASE("run validates mode requirements") {
  DirGuard dir("runio_err_out");
  RunOptions opts;
  opts.out_dir = dir.path.string();

  ExperimentConfig empty;
  opts.mode = RunMode::simulate;
  CHECK_THROWS_AS(run(empty, opts), ConfigError);
  opts.mode = RunMode::sweep;
  CHECK_THROWS_AS(run(empty, opts), ConfigError);
  opts.mode = RunMode::floquet;
  CHECK_THROWS_AS(run(empty, opts), ConfigError);

  // constant profile has no canonical period
  ExperimentConfig constant;
  constant.system = harmonic_unit();
  opts.mode = RunMode::floquet;
  try {
    run(constant, opts);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.path == "floquet.period");
  }

  opts.mode = RunMode::figure;
  opts.figure = 7;
  CHECK_THROWS_AS(run(empty, opts), ConfigError);
}

TEST_CASE("figure preset runs are reproducible") {
  DirGuard dir1("runio_fig_a");
  DirGuard dir2("runio_fig_b");

  ExperimentConfig cfg;  // defaults; the preset supplies the physics
  cfg.output.samples = 600;

  RunOptions opts;
  opts.mode = RunMode::figure;
  opts.figure = 1;
  opts.out_dir = dir1.path.string();
  const RunResult first = run(cfg, opts);
  opts.out_dir = dir2.path.string();
  const RunResult second = run(cfg, opts);

  CHECK(first.exit_code == 0);
  CHECK(first.summary.at("figure") == 1);
  CHECK(first.summary.at("records").size() == 1);
  CHECK(slurp(dir1.path / "trajectory.csv") ==
        slurp(dir2.path / "trajectory.csv"));
  CHECK(slurp(dir1.path / "summary.json") == slurp(dir2.path / "summary.json"));

  // trapped verdict with a bounded portrait
  CHECK(first.summary.at("results").at("verdict").at("overall") == "trapped");
}

TEST_SUITE_END();
