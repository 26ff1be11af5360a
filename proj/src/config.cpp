#include "fermigas/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"

namespace fermigas {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

double number(const json& j, const std::string& key, const std::string& where) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where + "." + key + " must be finite");
  return x;
}

long long integer(const json& j, const std::string& key, const std::string& where) {
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
  return v.get<long long>();
}

std::vector<double> number_list(const json& j, const std::string& key, const std::string& where) {
  const auto& v = j.at(key);
  if (!v.is_array()) throw ConfigError(where + "." + key + " must be a list");
  if (v.empty()) throw ConfigError(where + "." + key + " must not be empty");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(where + "." + key + " must hold numbers");
    out.push_back(x.get<double>());
    if (!std::isfinite(out.back())) throw ConfigError(where + "." + key + " must hold finite numbers");
  }
  return out;
}

std::string text(const json& j, const std::string& key, const std::string& where) {
  const auto& v = j.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + " must be a string");
  return v.get<std::string>();
}

PotentialKind potential_kind(const std::string& name) {
  for (auto k : {PotentialKind::HarmonicPlusOne, PotentialKind::PowerPlusOne, PotentialKind::CustomRadial,
                 PotentialKind::AnisotropicHarmonic})
    if (kind_name(k) == name) return k;
  throw ConfigError("unknown potential kind '" + name + "'");
}

InteractionKind interaction_kind(const std::string& name) {
  for (auto k : {InteractionKind::Zero, InteractionKind::SquareBarrier, InteractionKind::HardCore,
                 InteractionKind::Bump, InteractionKind::Tabulated})
    if (kind_name(k) == name) return k;
  throw ConfigError("unknown interaction kind '" + name + "'");
}

PotentialSpec potential_from(const json& j) {
  const std::string where = "potential";
  reject_unknown(j, {"kind", "offset", "exponent", "frequencies", "table_radii", "table_values", "growth_exponent"},
                 where);
  if (!j.contains("kind")) throw ConfigError("potential.kind is required");
  PotentialSpec spec;
  spec.kind = potential_kind(text(j, "kind", where));
  if (j.contains("offset")) spec.offset = number(j, "offset", where);
  if (j.contains("exponent")) spec.exponent = number(j, "exponent", where);
  if (j.contains("frequencies")) {
    const auto w = number_list(j, "frequencies", where);
    if (w.size() != 3) throw ConfigError("potential.frequencies needs three entries");
    spec.frequencies = {w[0], w[1], w[2]};
  }
  if (j.contains("table_radii")) spec.table_radii = number_list(j, "table_radii", where);
  if (j.contains("table_values")) spec.table_values = number_list(j, "table_values", where);
  if (j.contains("growth_exponent")) spec.growth_exponent = number(j, "growth_exponent", where);
  if (spec.kind == PotentialKind::CustomRadial && spec.table_radii.size() != spec.table_values.size())
    throw ConfigError("potential table radii and values differ in length");
  // Construction runs the remaining checks.
  (void)Potential(spec);
  return spec;
}

InteractionSpec interaction_from(const json& j) {
  const std::string where = "interaction";
  reject_unknown(j, {"kind", "amplitude", "radius", "table_radii", "table_values"}, where);
  if (!j.contains("kind")) throw ConfigError("interaction.kind is required");
  InteractionSpec spec;
  spec.kind = interaction_kind(text(j, "kind", where));
  if (j.contains("amplitude")) spec.amplitude = number(j, "amplitude", where);
  if (j.contains("radius")) spec.radius = number(j, "radius", where);
  if (j.contains("table_radii")) spec.table_radii = number_list(j, "table_radii", where);
  if (j.contains("table_values")) spec.table_values = number_list(j, "table_values", where);
  if (spec.kind == InteractionKind::Tabulated && spec.table_radii.size() != spec.table_values.size())
    throw ConfigError("interaction table radii and values differ in length");
  (void)Interaction(spec);
  return spec;
}

Tolerance tolerance_from(const json& j) {
  const std::string where = "tolerance";
  reject_unknown(j, {"abs", "rel", "max_refinements"}, where);
  Tolerance tol;
  if (j.contains("abs")) tol.abs = number(j, "abs", where);
  if (j.contains("rel")) tol.rel = number(j, "rel", where);
  if (j.contains("max_refinements")) tol.max_refinements = static_cast<int>(integer(j, "max_refinements", where));
  tol.validate();
  return tol;
}

json parse_text(const std::string& json_text) {
  try {
    return json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
}

json potential_json(const PotentialSpec& s) {
  json j{{"kind", kind_name(s.kind)}, {"offset", s.offset}};
  switch (s.kind) {
    case PotentialKind::PowerPlusOne: j["exponent"] = s.exponent; break;
    case PotentialKind::AnisotropicHarmonic:
      j["frequencies"] = {s.frequencies[0], s.frequencies[1], s.frequencies[2]};
      break;
    case PotentialKind::CustomRadial:
      j["table_radii"] = s.table_radii;
      j["table_values"] = s.table_values;
      j["growth_exponent"] = s.growth_exponent;
      break;
    case PotentialKind::HarmonicPlusOne: break;
  }
  return j;
}

json interaction_json(const InteractionSpec& s) {
  json j{{"kind", kind_name(s.kind)}};
  if (s.kind == InteractionKind::Zero) return j;
  j["amplitude"] = s.amplitude;
  if (s.kind == InteractionKind::Tabulated) {
    j["table_radii"] = s.table_radii;
    j["table_values"] = s.table_values;
  } else {
    j["radius"] = s.radius;
  }
  return j;
}

}  // namespace

const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> names{"tf",      "scatter", "semiclass", "spectra",   "husimi",
                                              "predict", "boxes",   "budget",    "verify-all"};
  return names;
}

RunConfig default_run_config(const std::string& command) {
  RunConfig cfg;
  cfg.command = command;
  validate_run_config(cfg);
  return cfg;
}

RunConfig parse_run_config(const std::string& json_text) {
  const json root = parse_text(json_text);
  reject_unknown(root, {"command", "potential", "interaction", "sweeps", "tolerance", "options", "output"},
                 "configuration");
  if (!root.contains("command")) throw ConfigError("configuration.command is required");
  RunConfig cfg;
  cfg.command = text(root, "command", "configuration");
  try {
    if (root.contains("potential")) cfg.potential = potential_from(root.at("potential"));
    if (root.contains("interaction")) cfg.interaction = interaction_from(root.at("interaction"));
    if (root.contains("tolerance")) cfg.tolerance = tolerance_from(root.at("tolerance"));
    if (root.contains("sweeps")) {
      const auto& s = root.at("sweeps");
      const std::string where = "sweeps";
      reject_unknown(s, {"n", "beta", "levels", "amplitudes", "fermi_momenta", "couplings", "hbar"}, where);
      if (s.contains("n")) cfg.sweeps.n = number_list(s, "n", where);
      if (s.contains("levels")) cfg.sweeps.levels = number_list(s, "levels", where);
      if (s.contains("amplitudes")) cfg.sweeps.amplitudes = number_list(s, "amplitudes", where);
      if (s.contains("fermi_momenta")) cfg.sweeps.fermi_momenta = number_list(s, "fermi_momenta", where);
      if (s.contains("couplings")) cfg.sweeps.couplings = number_list(s, "couplings", where);
      if (s.contains("hbar")) cfg.sweeps.hbar = number_list(s, "hbar", where);
      if (s.contains("beta")) {
        const auto& b = s.at("beta");
        if (!b.is_array() || b.empty()) throw ConfigError("sweeps.beta must be a nonempty list");
        for (const auto& x : b) {
          if (x.is_string())
            cfg.sweeps.beta.push_back(x.get<std::string>());
          else if (x.is_number())
            cfg.sweeps.beta.push_back(x.dump());  // decimal text as written
          else
            throw ConfigError("sweeps.beta entries must be numbers or strings such as \"34/81\"");
        }
      }
    }
    if (root.contains("options")) {
      const auto& o = root.at("options");
      const std::string where = "options";
      reject_unknown(o,
                     {"hbar", "level", "half_width", "points", "fill", "trap", "free_states", "scale", "epsilon",
                      "r_max", "fermi_momentum", "profile_points", "h2_threshold"},
                     where);
      auto& opt = cfg.options;
      if (o.contains("hbar")) opt.hbar = number(o, "hbar", where);
      if (o.contains("level")) opt.level = number(o, "level", where);
      if (o.contains("half_width")) opt.half_width = number(o, "half_width", where);
      if (o.contains("points")) opt.points = static_cast<int>(integer(o, "points", where));
      if (o.contains("fill")) opt.fill = static_cast<int>(integer(o, "fill", where));
      if (o.contains("trap")) opt.trap = text(o, "trap", where);
      if (o.contains("free_states")) opt.free_states = integer(o, "free_states", where);
      if (o.contains("scale")) opt.scale = number(o, "scale", where);
      if (o.contains("epsilon")) opt.epsilon = number(o, "epsilon", where);
      if (o.contains("r_max")) opt.r_max = number(o, "r_max", where);
      if (o.contains("fermi_momentum")) opt.fermi_momentum = number(o, "fermi_momentum", where);
      if (o.contains("profile_points")) opt.profile_points = static_cast<int>(integer(o, "profile_points", where));
      if (o.contains("h2_threshold")) opt.h2_threshold = number(o, "h2_threshold", where);
    }
    if (root.contains("output")) {
      const auto& o = root.at("output");
      reject_unknown(o, {"directory", "json_mirror"}, "output");
      if (o.contains("directory")) cfg.output_directory = text(o, "directory", "output");
      if (o.contains("json_mirror")) {
        if (!o.at("json_mirror").is_boolean()) throw ConfigError("output.json_mirror must be true or false");
        cfg.json_mirror = o.at("json_mirror").get<bool>();
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("configuration: ") + e.what());
  }
  validate_run_config(cfg);
  return cfg;
}

void validate_run_config(const RunConfig& cfg) {
  const auto& names = known_commands();
  if (std::find(names.begin(), names.end(), cfg.command) == names.end())
    throw ConfigError("unknown command '" + cfg.command + "'");
  const auto need_potential = [&]() {
    if (!cfg.potential) throw ConfigError("command '" + cfg.command + "' needs a potential section");
  };
  const auto need_interaction = [&]() {
    if (!cfg.interaction) throw ConfigError("command '" + cfg.command + "' needs an interaction section");
  };
  const auto need = [&](bool present, const std::string& what) {
    if (!present) throw ConfigError("command '" + cfg.command + "' needs sweeps." + what);
  };
  const auto& c = cfg.command;
  const auto& o = cfg.options;
  if (c == "tf" || c == "semiclass") need_potential();
  if (c == "semiclass") need(!cfg.sweeps.levels.empty(), "levels");
  if (c == "scatter") need_interaction();
  if (c == "predict" || c == "boxes") {
    need_potential();
    need_interaction();
    need(!cfg.sweeps.n.empty(), "n");
    need(!cfg.sweeps.beta.empty(), "beta");
  }
  if (c == "budget") {
    need(!cfg.sweeps.n.empty(), "n");
    need(!cfg.sweeps.beta.empty(), "beta");
  }
  if (c == "spectra") {
    if (o.trap != "harmonic_3d" && o.trap != "fd_1d") throw ConfigError("options.trap must be harmonic_3d or fd_1d");
    if (o.trap == "fd_1d") need_potential();
  }
  if (c == "husimi") need_potential();
  if (!(o.hbar > 0.0)) throw ConfigError("options.hbar must be > 0");
  if (!(o.half_width > 0.0)) throw ConfigError("options.half_width must be > 0");
  if (o.points < 200) throw ConfigError("options.points must be >= 200");
  if (o.fill < 1) throw ConfigError("options.fill must be >= 1");
  if (o.free_states < 0) throw ConfigError("options.free_states must be >= 0");
  if (o.scale < 0.0 || o.epsilon < 0.0 || o.r_max < 0.0 || o.level < 0.0)
    throw ConfigError("options scale, epsilon, r_max and level must be >= 0");
  if (!(o.fermi_momentum > 0.0)) throw ConfigError("options.fermi_momentum must be > 0");
  if (o.profile_points < 16) throw ConfigError("options.profile_points must be >= 16");
  if (cfg.output_directory.empty()) throw ConfigError("output.directory must not be empty");
  for (double x : cfg.sweeps.n)
    if (!(x >= 1.0)) throw ConfigError("sweeps.n entries must be >= 1");
  cfg.tolerance.validate();
}

std::string resolved_config_json(const RunConfig& cfg) {
  json j;
  j["command"] = cfg.command;
  if (cfg.potential) j["potential"] = potential_json(*cfg.potential);
  if (cfg.interaction) j["interaction"] = interaction_json(*cfg.interaction);
  json s = json::object();
  if (!cfg.sweeps.n.empty()) s["n"] = cfg.sweeps.n;
  if (!cfg.sweeps.beta.empty()) s["beta"] = cfg.sweeps.beta;
  if (!cfg.sweeps.levels.empty()) s["levels"] = cfg.sweeps.levels;
  if (!cfg.sweeps.amplitudes.empty()) s["amplitudes"] = cfg.sweeps.amplitudes;
  if (!cfg.sweeps.fermi_momenta.empty()) s["fermi_momenta"] = cfg.sweeps.fermi_momenta;
  if (!cfg.sweeps.couplings.empty()) s["couplings"] = cfg.sweeps.couplings;
  if (!cfg.sweeps.hbar.empty()) s["hbar"] = cfg.sweeps.hbar;
  j["sweeps"] = s;
  j["tolerance"] = {{"abs", cfg.tolerance.abs}, {"rel", cfg.tolerance.rel},
                    {"max_refinements", cfg.tolerance.max_refinements}};
  const auto& o = cfg.options;
  j["options"] = {{"hbar", o.hbar},
                  {"level", o.level},
                  {"half_width", o.half_width},
                  {"points", o.points},
                  {"fill", o.fill},
                  {"trap", o.trap},
                  {"free_states", o.free_states},
                  {"scale", o.scale},
                  {"epsilon", o.epsilon},
                  {"r_max", o.r_max},
                  {"fermi_momentum", o.fermi_momentum},
                  {"profile_points", o.profile_points},
                  {"h2_threshold", o.h2_threshold}};
  j["output"] = {{"json_mirror", cfg.json_mirror}};
  j["seedless"] = cfg.seedless;
  return j.dump();
}

PotentialSpec parse_potential_spec(const std::string& json_text) {
  try {
    return potential_from(parse_text(json_text));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("potential: ") + e.what());
  }
}

InteractionSpec parse_interaction_spec(const std::string& json_text) {
  try {
    return interaction_from(parse_text(json_text));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("interaction: ") + e.what());
  }
}

Tolerance parse_tolerance(const std::string& json_text) {
  try {
    return tolerance_from(parse_text(json_text));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("tolerance: ") + e.what());
  }
}

}  // namespace fermigas
