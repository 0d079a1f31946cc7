#include "modlab/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>

namespace modlab {

namespace {

using nlohmann::json;

std::string join(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

void check_object(const json& node, const std::string& path) {
  if (!node.is_object()) throw ConfigError(path, "expected an object");
}

void check_allowed(const json& obj, const std::string& path,
                   std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError(join(path, it.key()), "unknown key");
  }
}

double get_number(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key))
    throw ConfigError(join(path, key), "missing required number");
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(join(path, key), "expected a number");
  return v.get<double>();
}

double get_number_or(const json& obj, const std::string& path, const char* key,
                     double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(join(path, key), "expected a number");
  return v.get<double>();
}

long get_integer_or(const json& obj, const std::string& path, const char* key,
                    long fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer())
    throw ConfigError(join(path, key), "expected an integer");
  return v.get<long>();
}

bool get_bool_or(const json& obj, const std::string& path, const char* key,
                 bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) throw ConfigError(join(path, key), "expected a boolean");
  return v.get<bool>();
}

std::string get_string(const json& obj, const std::string& path,
                       const char* key) {
  if (!obj.contains(key))
    throw ConfigError(join(path, key), "missing required string");
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(join(path, key), "expected a string");
  return v.get<std::string>();
}

std::vector<double> get_number_array(const json& obj, const std::string& path,
                                     const char* key) {
  if (!obj.contains(key))
    throw ConfigError(join(path, key), "missing required array");
  const json& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(join(path, key), "expected an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!x.is_number())
      throw ConfigError(join(path, key), "expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

ModulationProfile parse_profile(const json& node, const std::string& path) {
  check_object(node, path);
  const std::string kind = get_string(node, path, "kind");
  try {
    if (kind == "constant") {
      check_allowed(node, path, {"kind", "omega0"});
      return ModulationProfile::constant(get_number(node, path, "omega0"));
    }
    if (kind == "cosine-squared") {
      check_allowed(node, path, {"kind", "a", "b", "Omega"});
      return ModulationProfile::cosine_squared(get_number(node, path, "a"),
                                               get_number(node, path, "b"),
                                               get_number(node, path, "Omega"));
    }
    if (kind == "cosine-direct") {
      check_allowed(node, path, {"kind", "a", "q"});
      return ModulationProfile::cosine_direct(get_number(node, path, "a"),
                                              get_number(node, path, "q"));
    }
    if (kind == "sqrt-cosine") {
      check_allowed(node, path, {"kind", "a", "q"});
      return ModulationProfile::sqrt_cosine(get_number(node, path, "a"),
                                            get_number(node, path, "q"));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(join(path, "kind"),
                    "unknown modulation kind '" + kind +
                        "' (expected constant, cosine-squared, cosine-direct, "
                        "or sqrt-cosine)");
}

PotentialField parse_potential(const json& node, const std::string& path) {
  check_object(node, path);
  const std::string kind = get_string(node, path, "kind");
  if (kind == "harmonic") {
    check_allowed(node, path, {"kind"});
    return PotentialField::harmonic();
  }
  if (kind == "cubic-quartic") {
    check_allowed(node, path, {"kind", "alpha1", "alpha2"});
    return PotentialField::cubic_quartic(
        get_number_or(node, path, "alpha1", 0.0),
        get_number_or(node, path, "alpha2", 0.0));
  }
  if (kind == "simple-saddle-pair") {
    check_allowed(node, path, {"kind"});
    return PotentialField::simple_saddle_pair();
  }
  if (kind == "monkey-saddle-pair") {
    check_allowed(node, path, {"kind"});
    return PotentialField::monkey_saddle_pair();
  }
  throw ConfigError(join(path, "kind"),
                    "unknown potential kind '" + kind +
                        "' (expected harmonic, cubic-quartic, "
                        "simple-saddle-pair, or monkey-saddle-pair)");
}

SystemSpec parse_system(const json& node, const std::string& path) {
  check_object(node, path);
  check_allowed(node, path, {"modulation", "potential", "signature"});
  if (!node.contains("modulation"))
    throw ConfigError(join(path, "modulation"), "missing required object");
  if (!node.contains("potential"))
    throw ConfigError(join(path, "potential"), "missing required object");

  ModulationProfile prof =
      parse_profile(node.at("modulation"), join(path, "modulation"));
  PotentialField pot =
      parse_potential(node.at("potential"), join(path, "potential"));

  KineticSignature sig;
  if (node.contains("signature")) {
    const json& s = node.at("signature");
    if (!s.is_array())
      throw ConfigError(join(path, "signature"),
                        "expected an array of +1/-1 entries");
    for (const auto& x : s) {
      if (!x.is_number_integer())
        throw ConfigError(join(path, "signature"),
                          "expected an array of +1/-1 entries");
      sig.sigma.push_back(x.get<int>());
    }
  } else {
    sig = (pot.dim() == 1) ? KineticSignature::plus_one()
                           : KineticSignature::saddle_pair();
  }
  try {
    return build_system(std::move(prof), std::move(pot), std::move(sig));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

InitialCondition parse_initial(const json& node, const std::string& path) {
  check_object(node, path);
  check_allowed(node, path, {"t", "q", "v"});
  InitialCondition ic;
  ic.t = get_number_or(node, path, "t", 0.0);
  ic.q = get_number_array(node, path, "q");
  ic.v = get_number_array(node, path, "v");
  if (ic.q.empty()) throw ConfigError(join(path, "q"), "must be nonempty");
  if (ic.q.size() != ic.v.size())
    throw ConfigError(path, "q and v must have the same length");
  return ic;
}

IntegratorConfig parse_integrator(const json& node, const std::string& path) {
  check_object(node, path);
  check_allowed(node, path,
                {"method", "rtol", "atol", "dt", "max_steps", "dense"});
  IntegratorConfig cfg;
  if (node.contains("method")) {
    const std::string m = get_string(node, path, "method");
    if (m == "rk45")
      cfg.method = StepperKind::rk45_adaptive;
    else if (m == "rk4")
      cfg.method = StepperKind::rk4_fixed;
    else
      throw ConfigError(join(path, "method"),
                        "unknown method '" + m + "' (expected rk45 or rk4)");
  }
  cfg.rtol = get_number_or(node, path, "rtol", cfg.rtol);
  cfg.atol = get_number_or(node, path, "atol", cfg.atol);
  cfg.dt = get_number_or(node, path, "dt", cfg.dt);
  cfg.max_steps = get_integer_or(node, path, "max_steps", cfg.max_steps);
  cfg.dense = get_bool_or(node, path, "dense", cfg.dense);
  if (!(cfg.rtol > 0.0)) throw ConfigError(join(path, "rtol"), "must be > 0");
  if (!(cfg.atol > 0.0)) throw ConfigError(join(path, "atol"), "must be > 0");
  if (!(cfg.dt > 0.0)) throw ConfigError(join(path, "dt"), "must be > 0");
  if (cfg.max_steps <= 0)
    throw ConfigError(join(path, "max_steps"), "must be > 0");
  return cfg;
}

AnalysisOptions parse_analysis(const json& node, const std::string& path) {
  check_object(node, path);
  check_allowed(node, path, {"invariants", "escape_radius"});
  AnalysisOptions opts;
  opts.invariants = get_bool_or(node, path, "invariants", true);
  if (node.contains("escape_radius")) {
    const double r = get_number(node, path, "escape_radius");
    if (!(r > 0.0))
      throw ConfigError(join(path, "escape_radius"), "must be > 0");
    opts.escape_radius = r;
  }
  return opts;
}

OutputOptions parse_output(const json& node, const std::string& path) {
  check_object(node, path);
  check_allowed(node, path,
                {"samples", "csv", "svg", "format", "portrait_coordinate"});
  OutputOptions opts;
  opts.samples =
      static_cast<int>(get_integer_or(node, path, "samples", opts.samples));
  if (opts.samples < 2)
    throw ConfigError(join(path, "samples"), "must be >= 2");
  opts.csv = get_bool_or(node, path, "csv", opts.csv);
  opts.svg = get_bool_or(node, path, "svg", opts.svg);
  if (node.contains("format")) {
    opts.format = get_string(node, path, "format");
    if (opts.format != "csv" && opts.format != "json")
      throw ConfigError(join(path, "format"), "expected 'csv' or 'json'");
  }
  opts.portrait_coordinate = static_cast<int>(
      get_integer_or(node, path, "portrait_coordinate", 0));
  if (opts.portrait_coordinate < 0)
    throw ConfigError(join(path, "portrait_coordinate"), "must be >= 0");
  return opts;
}

FloquetOptions parse_floquet(const json& node, const std::string& path) {
  check_object(node, path);
  check_allowed(node, path, {"period", "rtol", "atol"});
  FloquetOptions opts;
  if (node.contains("period")) {
    const double T = get_number(node, path, "period");
    if (!(T > 0.0)) throw ConfigError(join(path, "period"), "must be > 0");
    opts.period = T;
  }
  opts.rtol = get_number_or(node, path, "rtol", opts.rtol);
  opts.atol = get_number_or(node, path, "atol", opts.atol);
  if (!(opts.rtol > 0.0)) throw ConfigError(join(path, "rtol"), "must be > 0");
  if (!(opts.atol > 0.0)) throw ConfigError(join(path, "atol"), "must be > 0");
  return opts;
}

AxisSpec parse_axis(const json& node, const std::string& path) {
  check_object(node, path);
  check_allowed(node, path, {"from", "to", "count"});
  AxisSpec ax;
  ax.lo = get_number(node, path, "from");
  ax.hi = get_number(node, path, "to");
  ax.count = static_cast<int>(get_integer_or(node, path, "count", 2));
  if (ax.hi < ax.lo) throw ConfigError(path, "'to' must be >= 'from'");
  if (ax.count < 1) throw ConfigError(join(path, "count"), "must be >= 1");
  if (ax.count > 2048)
    throw ConfigError(join(path, "count"), "must be <= 2048");
  return ax;
}

SweepOptions parse_sweep(const json& node, const std::string& path) {
  check_object(node, path);
  check_allowed(node, path, {"family", "a", "q"});
  SweepOptions opts;
  const std::string fam = get_string(node, path, "family");
  if (fam == "classical-mathieu")
    opts.family = SweepFamily::classical_mathieu;
  else if (fam == "modulated-mathieu")
    opts.family = SweepFamily::modulated_mathieu;
  else if (fam == "mathieu-kapitza")
    opts.family = SweepFamily::mathieu_kapitza;
  else
    throw ConfigError(join(path, "family"),
                      "unknown family '" + fam +
                          "' (expected classical-mathieu, modulated-mathieu, "
                          "or mathieu-kapitza)");
  if (!node.contains("a"))
    throw ConfigError(join(path, "a"), "missing required axis object");
  if (!node.contains("q"))
    throw ConfigError(join(path, "q"), "missing required axis object");
  opts.a_axis = parse_axis(node.at("a"), join(path, "a"));
  opts.q_axis = parse_axis(node.at("q"), join(path, "q"));
  return opts;
}

HopfOptions parse_hopf(const json& node, const std::string& path) {
  check_object(node, path);
  check_allowed(node, path,
                {"mu", "eps", "omega0", "x0", "y0", "horizon", "forcing"});
  HopfOptions opts;
  opts.mu = get_number_or(node, path, "mu", opts.mu);
  opts.eps = get_number_or(node, path, "eps", opts.eps);
  opts.omega0 = get_number_or(node, path, "omega0", opts.omega0);
  opts.x0 = get_number_or(node, path, "x0", opts.x0);
  opts.y0 = get_number_or(node, path, "y0", opts.y0);
  opts.horizon = get_number_or(node, path, "horizon", opts.horizon);
  if (!(opts.horizon > 0.0))
    throw ConfigError(join(path, "horizon"), "must be > 0");
  if (std::hypot(opts.x0, opts.y0) < 1e-12)
    throw ConfigError(path, "initial point (x0, y0) must not be the origin");
  if (node.contains("forcing")) {
    const json& f = node.at("forcing");
    const std::string fpath = join(path, "forcing");
    check_object(f, fpath);
    check_allowed(f, fpath, {"amplitude", "frequency", "phase"});
    opts.forcing.amplitude =
        get_number_or(f, fpath, "amplitude", opts.forcing.amplitude);
    opts.forcing.frequency =
        get_number_or(f, fpath, "frequency", opts.forcing.frequency);
    opts.forcing.phase = get_number_or(f, fpath, "phase", opts.forcing.phase);
  }
  return opts;
}

}  // namespace

ExperimentConfig parse_config(const nlohmann::json& doc) {
  check_object(doc, "");
  check_allowed(doc, "",
                {"system", "initial", "time", "integrator", "analysis",
                 "output", "floquet", "sweep", "hopf", "seed"});

  ExperimentConfig cfg;
  if (doc.contains("system"))
    cfg.system = parse_system(doc.at("system"), "system");
  if (doc.contains("initial"))
    cfg.initial = parse_initial(doc.at("initial"), "initial");
  if (doc.contains("time")) {
    const json& t = doc.at("time");
    check_object(t, "time");
    check_allowed(t, "time", {"from", "to"});
    cfg.t_from = get_number(t, "time", "from");
    cfg.t_to = get_number(t, "time", "to");
    if (!(cfg.t_from < cfg.t_to))
      throw ConfigError("time", "'from' must be strictly less than 'to'");
    cfg.has_time = true;
  }
  if (doc.contains("integrator"))
    cfg.integrator = parse_integrator(doc.at("integrator"), "integrator");
  if (doc.contains("analysis"))
    cfg.analysis = parse_analysis(doc.at("analysis"), "analysis");
  if (doc.contains("output"))
    cfg.output = parse_output(doc.at("output"), "output");
  if (doc.contains("floquet"))
    cfg.floquet = parse_floquet(doc.at("floquet"), "floquet");
  if (doc.contains("sweep")) cfg.sweep = parse_sweep(doc.at("sweep"), "sweep");
  if (doc.contains("hopf")) cfg.hopf = parse_hopf(doc.at("hopf"), "hopf");
  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (!s.is_number_integer() ||
        (!s.is_number_unsigned() && s.get<std::int64_t>() < 0))
      throw ConfigError("seed", "expected a nonnegative integer");
    cfg.seed = s.get<std::uint64_t>();
  }

  // Cross-field checks.
  if (cfg.system && cfg.initial) {
    if (static_cast<int>(cfg.initial->q.size()) != cfg.system->dim())
      throw ConfigError("initial",
                        "dimension does not match the system potential");
  }
  if (cfg.initial && cfg.has_time) {
    if (cfg.initial->t < cfg.t_from || cfg.initial->t > cfg.t_to)
      throw ConfigError("initial.t", "must lie within [time.from, time.to]");
  }
  if (cfg.system &&
      cfg.output.portrait_coordinate >= cfg.system->dim())
    throw ConfigError("output.portrait_coordinate",
                      "out of range for the system dimension");
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file: " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json out;
  if (cfg.system) {
    nlohmann::json mod{{"kind", std::string(cfg.system->profile.name())}};
    for (const auto& [k, v] : cfg.system->profile.params()) mod[k] = v;
    nlohmann::json pot{{"kind", std::string(cfg.system->potential.name())}};
    for (const auto& [k, v] : cfg.system->potential.params()) pot[k] = v;
    out["system"] = {{"modulation", mod},
                     {"potential", pot},
                     {"signature", cfg.system->signature.sigma}};
  }
  if (cfg.initial)
    out["initial"] = {{"t", cfg.initial->t},
                      {"q", cfg.initial->q},
                      {"v", cfg.initial->v}};
  if (cfg.has_time) out["time"] = {{"from", cfg.t_from}, {"to", cfg.t_to}};
  out["integrator"] = {
      {"method",
       cfg.integrator.method == StepperKind::rk45_adaptive ? "rk45" : "rk4"},
      {"rtol", cfg.integrator.rtol},
      {"atol", cfg.integrator.atol},
      {"dt", cfg.integrator.dt},
      {"max_steps", cfg.integrator.max_steps},
      {"dense", cfg.integrator.dense}};
  out["analysis"] = {{"invariants", cfg.analysis.invariants}};
  if (cfg.analysis.escape_radius)
    out["analysis"]["escape_radius"] = *cfg.analysis.escape_radius;
  out["output"] = {{"samples", cfg.output.samples},
                   {"csv", cfg.output.csv},
                   {"svg", cfg.output.svg},
                   {"format", cfg.output.format},
                   {"portrait_coordinate", cfg.output.portrait_coordinate}};
  if (cfg.floquet) {
    out["floquet"] = {{"rtol", cfg.floquet->rtol}, {"atol", cfg.floquet->atol}};
    if (cfg.floquet->period) out["floquet"]["period"] = *cfg.floquet->period;
  }
  if (cfg.sweep) {
    auto axis = [](const AxisSpec& ax) {
      return nlohmann::json{
          {"from", ax.lo}, {"to", ax.hi}, {"count", ax.count}};
    };
    out["sweep"] = {{"family", sweep_family_name(cfg.sweep->family)},
                    {"a", axis(cfg.sweep->a_axis)},
                    {"q", axis(cfg.sweep->q_axis)}};
  }
  if (cfg.hopf) {
    out["hopf"] = {{"mu", cfg.hopf->mu},
                   {"eps", cfg.hopf->eps},
                   {"omega0", cfg.hopf->omega0},
                   {"x0", cfg.hopf->x0},
                   {"y0", cfg.hopf->y0},
                   {"horizon", cfg.hopf->horizon},
                   {"forcing",
                    {{"amplitude", cfg.hopf->forcing.amplitude},
                     {"frequency", cfg.hopf->forcing.frequency},
                     {"phase", cfg.hopf->forcing.phase}}}};
  }
  out["seed"] = cfg.seed;
  return out;
}

FigurePreset preset_figure(int which) {
  FigurePreset preset;
  preset.figure = which;
  ExperimentConfig& cfg = preset.config;
  cfg.integrator.rtol = 1e-10;
  cfg.integrator.atol = 1e-12;
  cfg.has_time = true;
  cfg.t_from = -50.0;
  cfg.t_to = 50.0;

  switch (which) {
    case 1: {
      cfg.system = build_system(
          ModulationProfile::cosine_squared(0.01, 0.01, 0.01),
          PotentialField::harmonic(), KineticSignature::plus_one());
      cfg.initial = InitialCondition{0.0, {0.0}, {0.1}};
      FigureParamRecord rec;
      rec.label = "as-printed";
      rec.params = {{"modulation",
                     {{"kind", "cosine-squared"},
                      {"a", 0.01},
                      {"b", 0.01},
                      {"Omega", 0.01}}},
                    {"extras", {{"q", 0.1}, {"alpha1", 0.01}, {"alpha2", 0.01}}}};
      rec.runnable = true;
      rec.note =
          "The as-printed record also lists q = 0.1 and alpha1 = alpha2 = 0.01; "
          "those constants do not enter this oscillator's equation of motion "
          "and are carried for reference only.";
      preset.records.push_back(std::move(rec));
      break;
    }
    case 2:
    case 3: {
      auto adjusted = ModulationProfile::sqrt_cosine(0.25, 0.1);
      if (which == 2) {
        cfg.system = build_system(adjusted,
                                  PotentialField::cubic_quartic(0.1, 0.1),
                                  KineticSignature::plus_one());
        cfg.initial = InitialCondition{0.0, {0.0}, {0.1}};
      } else {
        cfg.system = build_system(adjusted,
                                  PotentialField::simple_saddle_pair(),
                                  KineticSignature::saddle_pair());
        cfg.initial = InitialCondition{0.0, {0.0, 0.0}, {0.1, 0.1}};
      }
      FigureParamRecord nominal;
      nominal.label = "as-printed";
      nominal.params = {
          {"modulation",
           {{"kind", "sqrt-cosine"}, {"a", 0.01}, {"q", 0.1}}}};
      nominal.runnable = false;
      nominal.note =
          "a = 0.01 < 2|q| = 0.2 makes the squared frequency negative over "
          "part of every period; the profile is not constructible and the "
          "record is carried for reference only.";
      preset.records.push_back(std::move(nominal));

      FigureParamRecord adj;
      adj.label = "positivity-adjusted";
      adj.params = {
          {"modulation",
           {{"kind", "sqrt-cosine"}, {"a", 0.25}, {"q", 0.1}}}};
      adj.runnable = true;
      adj.note = "a raised to 0.25 so that a > 2|q| holds everywhere.";
      preset.records.push_back(std::move(adj));
      break;
    }
    default:
      throw std::invalid_argument("preset_figure: figure must be 1, 2, or 3");
  }
  return preset;
}

}  // namespace modlab
