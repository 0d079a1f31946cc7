// modlab: command-line driver for the modulated-systems laboratory.
//
// Subcommands: simulate, invariants, floquet, sweep, figure <1|2|3>, hopf.
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "modlab/config.hpp"
#include "modlab/runio.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::string out_dir = ".";
  std::string format;
  bool svg_on = false;
  bool svg_off = false;
  long long seed = -1;
};

void add_common(CLI::App* sub, CommonFlags& c, bool with_config,
                bool config_required) {
  if (with_config) {
    auto* opt = sub->add_option("--config", c.config,
                                "experiment configuration file (JSON)");
    if (config_required) opt->required();
  }
  sub->add_option("--out-dir", c.out_dir,
                  "output directory, created if missing (default: .)");
  sub->add_option("--format", c.format, "trajectory table format")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_flag("--svg", c.svg_on, "write SVG artifacts (default)");
  sub->add_flag("--no-svg", c.svg_off, "suppress SVG artifacts");
  sub->add_option("--seed", c.seed, "seed recorded in the summary")
      ->check(CLI::NonNegativeNumber);
}

int dispatch(modlab::RunMode mode, const CommonFlags& flags, int figure,
             int jobs) {
  using namespace modlab;
  try {
    ExperimentConfig cfg;
    if (!flags.config.empty()) cfg = parse_config_file(flags.config);
    if (!flags.format.empty()) cfg.output.format = flags.format;
    if (flags.svg_on) cfg.output.svg = true;
    if (flags.svg_off) cfg.output.svg = false;
    if (flags.seed >= 0) cfg.seed = static_cast<std::uint64_t>(flags.seed);

    RunOptions opts;
    opts.mode = mode;
    opts.out_dir = flags.out_dir;
    opts.figure = figure;
    opts.jobs = jobs;

    const RunResult result = run(cfg, opts);
    std::printf("status: %s\n",
                result.summary.at("status").get<std::string>().c_str());
    for (const std::string& name : result.artifacts)
      std::printf("wrote %s/%s\n", flags.out_dir.c_str(), name.c_str());
    if (result.exit_code != 0 && result.summary.contains("failure")) {
      std::fprintf(
          stderr, "numerical failure: %s\n",
          result.summary.at("failure").at("message").get<std::string>().c_str());
    }
    return result.exit_code;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "modlab: integrate, verify, and classify integrable-modulated "
      "mechanical systems"};
  app.require_subcommand(1);

  CommonFlags sim_flags, inv_flags, flo_flags, swp_flags, fig_flags, hop_flags;
  int figure = 0;
  int jobs = 0;

  CLI::App* sim = app.add_subcommand(
      "simulate", "integrate a configured system and export the trajectory");
  add_common(sim, sim_flags, true, true);

  CLI::App* inv = app.add_subcommand(
      "invariants", "integrate and report first-integral drift only");
  add_common(inv, inv_flags, true, true);

  CLI::App* flo = app.add_subcommand(
      "floquet", "monodromy matrix and stability of a linear periodic system");
  add_common(flo, flo_flags, true, true);

  CLI::App* swp = app.add_subcommand(
      "sweep", "stability classification over an (a, q) parameter grid");
  add_common(swp, swp_flags, true, true);
  swp->add_option("--jobs", jobs, "worker threads (0 = automatic)")
      ->check(CLI::NonNegativeNumber);

  CLI::App* fig = app.add_subcommand(
      "figure", "run one of the built-in reference-trajectory presets");
  fig->add_option("which", figure, "preset number (1, 2, or 3)")
      ->required()
      ->check(CLI::Range(1, 3));
  add_common(fig, fig_flags, false, false);

  CLI::App* hop = app.add_subcommand(
      "hopf", "adaptive Hopf frequency-learning experiment");
  add_common(hop, hop_flags, true, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // command-line misuse is a config error
  }

  using modlab::RunMode;
  if (sim->parsed()) return dispatch(RunMode::simulate, sim_flags, 0, 0);
  if (inv->parsed()) return dispatch(RunMode::invariants_only, inv_flags, 0, 0);
  if (flo->parsed()) return dispatch(RunMode::floquet, flo_flags, 0, 0);
  if (swp->parsed()) return dispatch(RunMode::sweep, swp_flags, 0, jobs);
  if (fig->parsed()) return dispatch(RunMode::figure, fig_flags, figure, 0);
  if (hop->parsed()) return dispatch(RunMode::hopf, hop_flags, 0, 0);
  return 2;
}
