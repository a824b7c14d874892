// cli/config.hpp
// Run configuration: JSON schema, validation with key paths, scenario presets,
// and the resolved-config dump.

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wavemodels/curve_models.hpp"
#include "wavemodels/error.hpp"
#include "wavemodels/evolution.hpp"
#include "wavemodels/graph_models.hpp"
#include "wavemodels/model_id.hpp"
#include "wavemodels/timestep.hpp"

namespace wavemodels::cli {

using Json = nlohmann::ordered_json;

struct ModeTerm {
  int k = 0;
  double cos_amp = 0.0;
  double sin_amp = 0.0;

  friend bool operator==(const ModeTerm&, const ModeTerm&) = default;
};

/// Either a named profile ("circle", "graph-1", "graph-2") or per-field Fourier modes.
/// `scale` multiplies the profile or modes; it does not change the circle.
struct InitialSpec {
  std::string profile;
  std::map<std::string, std::vector<ModeTerm>> modes;
  double scale = 1.0;
};

enum class EventKind { max_curvature, arc_chord, self_intersect };

struct EventSpec {
  EventKind kind = EventKind::self_intersect;
  double threshold = 0.0;
};

struct RunConfig {
  std::string name = "run";
  std::string model = "inviscid-bi";
  ModelParams params;
  int n_nodes = 256;
  double t_max = 1.0;
  double sample_every = 0.1;
  IntegratorConfig integrator;
  InitialSpec initial;
  std::vector<std::string> diagnostics;
  std::vector<EventSpec> events;
  double filter_level = 0.0;
  int viscous_node_cap = 512;
  std::string output_dir;
  std::uint64_t seed = 0;

  ModelId model_id() const { return *parse_model_id(model); }
};

inline const std::vector<std::string>& initial_profiles() {
  static const std::vector<std::string> names{"circle", "graph-1", "graph-2"};
  return names;
}

inline const std::vector<std::string>& known_diagnostics(StateKind kind) {
  static const std::vector<std::string> graph{"l2", "h1", "mean"};
  static const std::vector<std::string> profile{"l2", "h1", "mean", "wiener-strip"};
  static const std::vector<std::string> curve{"max-curvature", "arc-chord", "length"};
  switch (kind) {
    case StateKind::profile: return profile;
    case StateKind::curve: return curve;
    default: return graph;
  }
}

inline std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::max_curvature: return "max-curvature";
    case EventKind::arc_chord: return "arc-chord";
    case EventKind::self_intersect: return "self-intersect";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

struct ScenarioPreset {
  std::string name;
  std::string description;
  RunConfig config;
};

namespace detail {

inline RunConfig curve_preset(const std::string& name, double atwood) {
  RunConfig c;
  c.name = name;
  c.model = "zmodel";
  c.params.atwood = atwood;
  c.params.gravity = 9.8;
  c.params.surface_tension = 0.0;
  c.n_nodes = 2048;
  c.t_max = 2.0;
  c.sample_every = 0.05;
  c.initial.profile = "circle";
  c.diagnostics = {"max-curvature", "arc-chord"};
  c.events = {{EventKind::max_curvature, 1e3}, {EventKind::self_intersect, 0.0}};
  c.filter_level = 1e-9;
  return c;
}

inline RunConfig graph_preset(const std::string& name) {
  RunConfig c;
  c.name = name;
  c.model = "inviscid-bi";
  c.n_nodes = 256;
  c.t_max = 5.0;
  c.sample_every = 0.1;
  c.initial.profile = name;
  c.diagnostics = {"l2", "h1"};
  return c;
}

}  // namespace detail

inline const std::vector<ScenarioPreset>& presets() {
  static const std::vector<ScenarioPreset> table{
      {"bubble", "rising bubble: z-model, A=1/3, g=9.8, unit circle, w=0", detail::curve_preset("bubble", 1.0 / 3.0)},
      {"drop", "falling drop: z-model, A=-1/3, g=9.8, unit circle, w=0", detail::curve_preset("drop", -1.0 / 3.0)},
      {"graph-1", "h(x,0) = sin(x)/3, h_t(x,0) = 0", detail::graph_preset("graph-1")},
      {"graph-2", "h(x,0) = 0.1*(2/5)*(0.25*(sin 5x + 0.1 sin 8x)), h_t(x,0) = 0", detail::graph_preset("graph-2")},
  };
  return table;
}

inline std::optional<RunConfig> find_preset(const std::string& name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p.config;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Initial data
// ---------------------------------------------------------------------------

inline double graph_profile(const std::string& name, double x) {
  if (name == "graph-1") return std::sin(x) / 3.0;
  if (name == "graph-2") return 0.1 * (0.4 * (0.25 * (std::sin(5.0 * x) + 0.1 * std::sin(8.0 * x))));
  throw ConfigError("unknown graph profile '" + name + "'", "initial.profile");
}

inline SpectralField mode_field(const PeriodicGrid& grid, const std::vector<ModeTerm>& terms, double scale) {
  return SpectralField::sample(grid, [&](double x) {
    double v = 0.0;
    for (const auto& m : terms) {
      const double kx = grid.wavenumber(m.k) * x;
      v += m.cos_amp * std::cos(kx) + m.sin_amp * std::sin(kx);
    }
    return scale * v;
  });
}

/// Packed initial state for cfg on a grid of cfg.n_nodes nodes.
inline State initial_state(const RunConfig& cfg) {
  const PeriodicGrid grid = make_grid(static_cast<std::size_t>(cfg.n_nodes));
  const ModelId id = cfg.model_id();
  const auto names = field_names(id);
  std::vector<SpectralField> fields;
  if (cfg.initial.profile == "circle") {
    const CurveState c = circle_curve(grid, 1.0, Orientation::clockwise);
    fields = {c.z1, c.z2, c.w};
  } else {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (!cfg.initial.profile.empty() && i == 0) {
        const std::string prof = cfg.initial.profile;
        const double s = cfg.initial.scale;
        fields.push_back(SpectralField::sample(grid, [&](double x) { return s * graph_profile(prof, x); }));
        continue;
      }
      const auto it = cfg.initial.modes.find(names[i]);
      fields.push_back(it == cfg.initial.modes.end() ? SpectralField(grid)
                                                     : mode_field(grid, it->second, cfg.initial.scale));
    }
  }
  return pack(fields);
}

// ---------------------------------------------------------------------------
// JSON parsing
// ---------------------------------------------------------------------------

namespace detail {

inline void reject_unknown(const Json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError("expected an object", path.empty() ? "<root>" : path);
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key", path.empty() ? key : path + "." + key);
  }
}

inline std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

template <class T>
T get_as(const Json& j, const std::string& path) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("wrong type: ") + e.what(), path);
  }
}

inline double get_number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError("expected a number", path);
  return j.get<double>();
}

inline int get_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError("expected an integer", path);
  return j.get<int>();
}

inline void read_params(const Json& j, ModelParams& p) {
  const std::string path = "params";
  reject_unknown(j, path,
                 {"epsilon", "beta", "alpha1", "alpha2", "alpha", "atwood", "gravity", "surface_tension", "rho_plus",
                  "rho_minus"});
  auto num = [&](const char* key, double& out) {
    if (j.contains(key)) out = get_number(j.at(key), join(path, key));
  };
  num("epsilon", p.epsilon);
  num("beta", p.beta);
  num("alpha1", p.alpha1);
  num("alpha2", p.alpha2);
  num("alpha", p.alpha);
  num("atwood", p.atwood);
  num("gravity", p.gravity);
  num("surface_tension", p.surface_tension);
  for (const char* key : {"rho_plus", "rho_minus"}) {
    if (!j.contains(key)) continue;
    auto& slot = std::string(key) == "rho_plus" ? p.rho_plus : p.rho_minus;
    if (j.at(key).is_null()) slot.reset();
    else slot = get_number(j.at(key), join(path, key));
  }
  try {
    p.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(e.what(), path);
  }
}

inline void read_integrator(const Json& j, IntegratorConfig& c) {
  const std::string path = "integrator";
  reject_unknown(j, path, {"rel_tol", "abs_tol", "dt_initial", "dt_min", "dt_max", "safety", "max_steps"});
  auto num = [&](const char* key, double& out) {
    if (j.contains(key)) out = get_number(j.at(key), join(path, key));
  };
  num("rel_tol", c.rel_tol);
  num("abs_tol", c.abs_tol);
  num("dt_initial", c.dt_initial);
  num("dt_min", c.dt_min);
  num("dt_max", c.dt_max);
  num("safety", c.safety);
  if (j.contains("max_steps")) {
    if (!j.at("max_steps").is_number_integer()) throw ConfigError("expected an integer", "integrator.max_steps");
    c.max_steps = j.at("max_steps").get<long>();
  }
}

inline std::vector<ModeTerm> read_modes(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError("expected a list of [k, cos, sin] triples", path);
  std::vector<ModeTerm> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const Json& t = j[i];
    if (!t.is_array() || t.size() != 3) throw ConfigError("expected [k, cos, sin]", p);
    out.push_back({get_int(t[0], p + "[0]"), get_number(t[1], p + "[1]"), get_number(t[2], p + "[2]")});
  }
  return out;
}

inline void read_initial(const Json& j, InitialSpec& s) {
  const std::string path = "initial";
  reject_unknown(j, path, {"profile", "modes", "scale"});
  if (j.contains("profile")) s.profile = get_as<std::string>(j.at("profile"), "initial.profile");
  if (j.contains("scale")) s.scale = get_number(j.at("scale"), "initial.scale");
  if (j.contains("modes")) {
    const Json& m = j.at("modes");
    if (!m.is_object()) throw ConfigError("expected an object of field -> modes", "initial.modes");
    s.modes.clear();
    for (const auto& [field, list] : m.items()) s.modes[field] = read_modes(list, "initial.modes." + field);
  }
}

inline std::vector<EventSpec> read_events(const Json& j) {
  if (!j.is_array()) throw ConfigError("expected a list", "events");
  std::vector<EventSpec> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string path = "events[" + std::to_string(i) + "]";
    reject_unknown(j[i], path, {"kind", "threshold"});
    if (!j[i].contains("kind")) throw ConfigError("missing key", path + ".kind");
    const auto kind = get_as<std::string>(j[i].at("kind"), path + ".kind");
    EventSpec e;
    if (kind == "max-curvature") e.kind = EventKind::max_curvature;
    else if (kind == "arc-chord") e.kind = EventKind::arc_chord;
    else if (kind == "self-intersect") e.kind = EventKind::self_intersect;
    else throw ConfigError("unknown event kind '" + kind + "'", path + ".kind");
    if (e.kind != EventKind::self_intersect) {
      if (!j[i].contains("threshold")) throw ConfigError("missing key", path + ".threshold");
      e.threshold = get_number(j[i].at("threshold"), path + ".threshold");
    }
    out.push_back(e);
  }
  return out;
}

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace detail

/// Checks cross-field invariants; throws ConfigError naming the offending key.
inline void validate(const RunConfig& c) {
  const auto id = parse_model_id(c.model);
  if (!id) throw ConfigError("unknown model id '" + c.model + "'", "model");
  if (!detail::is_power_of_two(c.n_nodes) || c.n_nodes < 8) {
    throw ConfigError("must be a power of two >= 8", "n_nodes");
  }
  if (*id == ModelId::viscous_bi && c.n_nodes > c.viscous_node_cap) {
    throw ConfigError("viscous-bi runs are capped at " + std::to_string(c.viscous_node_cap) +
                          " nodes (raise viscous_node_cap to override)",
                      "n_nodes");
  }
  if (!(c.t_max > 0.0) || !std::isfinite(c.t_max)) throw ConfigError("must be > 0", "t_max");
  if (!std::isfinite(c.sample_every)) throw ConfigError("must be finite", "sample_every");
  if (!(c.filter_level >= 0.0)) throw ConfigError("must be >= 0", "filter_level");
  try {
    c.params.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(e.what(), "params");
  }
  c.integrator.validate();
  if (state_kind(*id) == StateKind::profile && !(c.params.epsilon > 0.0)) {
    throw ConfigError("unidirectional models need epsilon > 0", "params.epsilon");
  }

  const bool curve = is_curve_model(*id);
  const auto& prof = c.initial.profile;
  if (!prof.empty()) {
    bool known = false;
    for (const auto& p : initial_profiles()) known = known || p == prof;
    if (!known) throw ConfigError("unknown profile '" + prof + "'", "initial.profile");
    if (curve != (prof == "circle")) {
      throw ConfigError("profile '" + prof + "' does not match the state of " + c.model, "initial.profile");
    }
  } else if (curve) {
    throw ConfigError("curve models need initial.profile = \"circle\"", "initial.profile");
  }
  const auto names = field_names(*id);
  for (const auto& [field, terms] : c.initial.modes) {
    bool known = false;
    for (const auto& n : names) known = known || n == field;
    if (!known) throw ConfigError("model " + c.model + " has no field '" + field + "'", "initial.modes." + field);
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const auto& m = terms[i];
      const std::string path = "initial.modes." + field + "[" + std::to_string(i) + "]";
      if (m.k < 0 || m.k >= c.n_nodes / 2) throw ConfigError("mode outside 0 <= k < n/2", path);
      // the profile equations and the graph velocity evolve mean-zero data
      if (m.k == 0 && m.cos_amp != 0.0 && state_kind(*id) == StateKind::profile) {
        throw ConfigError("profile models need mean-zero data", path);
      }
    }
  }
  if (!prof.empty() && !c.initial.modes.empty() && c.initial.modes.count(names.front())) {
    throw ConfigError("give either a profile or modes for " + names.front(), "initial.modes." + names.front());
  }

  const auto& known = known_diagnostics(state_kind(*id));
  for (std::size_t i = 0; i < c.diagnostics.size(); ++i) {
    bool ok = false;
    for (const auto& k : known) ok = ok || k == c.diagnostics[i];
    if (!ok) {
      throw ConfigError("diagnostic '" + c.diagnostics[i] + "' is not available for " + c.model,
                        "diagnostics[" + std::to_string(i) + "]");
    }
  }
  for (std::size_t i = 0; i < c.events.size(); ++i) {
    if (!curve) throw ConfigError("geometry events need a curve model", "events[" + std::to_string(i) + "]");
    if (c.events[i].kind != EventKind::self_intersect && !(c.events[i].threshold > 0.0)) {
      throw ConfigError("must be > 0", "events[" + std::to_string(i) + "].threshold");
    }
  }
}

/// Parses JSON config text. A top-level "preset" key starts from that scenario; other keys override it.
inline RunConfig parse_config(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("parse failure: ") + e.what(), "<root>");
  }
  detail::reject_unknown(j, "",
                         {"preset", "name", "model", "params", "n_nodes", "t_max", "sample_every", "integrator",
                          "initial", "diagnostics", "events", "filter_level", "viscous_node_cap", "output_dir",
                          "seed"});
  RunConfig c;
  bool explicit_diagnostics = false;
  if (j.contains("preset")) {
    const auto name = detail::get_as<std::string>(j.at("preset"), "preset");
    auto p = find_preset(name);
    if (!p) throw ConfigError("unknown preset '" + name + "'", "preset");
    c = *p;
    explicit_diagnostics = true;
  }
  if (j.contains("name")) c.name = detail::get_as<std::string>(j.at("name"), "name");
  if (j.contains("model")) {
    c.model = detail::get_as<std::string>(j.at("model"), "model");
    if (!parse_model_id(c.model)) throw ConfigError("unknown model id '" + c.model + "'", "model");
  }
  if (j.contains("params")) detail::read_params(j.at("params"), c.params);
  if (j.contains("n_nodes")) c.n_nodes = detail::get_int(j.at("n_nodes"), "n_nodes");
  if (j.contains("t_max")) c.t_max = detail::get_number(j.at("t_max"), "t_max");
  if (j.contains("sample_every")) c.sample_every = detail::get_number(j.at("sample_every"), "sample_every");
  if (j.contains("integrator")) detail::read_integrator(j.at("integrator"), c.integrator);
  if (j.contains("initial")) detail::read_initial(j.at("initial"), c.initial);
  if (j.contains("diagnostics")) {
    const Json& d = j.at("diagnostics");
    if (!d.is_array()) throw ConfigError("expected a list", "diagnostics");
    c.diagnostics.clear();
    for (std::size_t i = 0; i < d.size(); ++i) {
      c.diagnostics.push_back(detail::get_as<std::string>(d[i], "diagnostics[" + std::to_string(i) + "]"));
    }
    explicit_diagnostics = true;
  }
  if (j.contains("events")) c.events = detail::read_events(j.at("events"));
  if (j.contains("filter_level")) c.filter_level = detail::get_number(j.at("filter_level"), "filter_level");
  if (j.contains("viscous_node_cap")) c.viscous_node_cap = detail::get_int(j.at("viscous_node_cap"), "viscous_node_cap");
  if (j.contains("output_dir")) c.output_dir = detail::get_as<std::string>(j.at("output_dir"), "output_dir");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("expected a nonnegative integer", "seed");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (!explicit_diagnostics && parse_model_id(c.model)) {
    c.diagnostics = is_curve_model(c.model_id()) ? std::vector<std::string>{"max-curvature", "arc-chord"}
                                                 : std::vector<std::string>{"l2", "h1"};
  }
  validate(c);
  return c;
}

/// Every field of the config, defaults included. Parsing the dump gives back the same config.
inline Json to_json(const RunConfig& c) {
  Json j;
  j["name"] = c.name;
  j["model"] = c.model;
  Json p;
  p["epsilon"] = c.params.epsilon;
  p["beta"] = c.params.beta;
  p["alpha1"] = c.params.alpha1;
  p["alpha2"] = c.params.alpha2;
  p["alpha"] = c.params.alpha;
  p["atwood"] = c.params.atwood;
  p["gravity"] = c.params.gravity;
  p["surface_tension"] = c.params.surface_tension;
  p["rho_plus"] = c.params.rho_plus ? Json(*c.params.rho_plus) : Json(nullptr);
  p["rho_minus"] = c.params.rho_minus ? Json(*c.params.rho_minus) : Json(nullptr);
  j["params"] = p;
  j["n_nodes"] = c.n_nodes;
  j["t_max"] = c.t_max;
  j["sample_every"] = c.sample_every;
  Json in;
  in["rel_tol"] = c.integrator.rel_tol;
  in["abs_tol"] = c.integrator.abs_tol;
  in["dt_initial"] = c.integrator.dt_initial;
  in["dt_min"] = c.integrator.dt_min;
  in["dt_max"] = c.integrator.dt_max;
  in["safety"] = c.integrator.safety;
  in["max_steps"] = c.integrator.max_steps;
  j["integrator"] = in;
  Json init;
  init["profile"] = c.initial.profile;
  Json modes = Json::object();
  for (const auto& [field, terms] : c.initial.modes) {
    Json list = Json::array();
    for (const auto& m : terms) list.push_back(Json::array({m.k, m.cos_amp, m.sin_amp}));
    modes[field] = list;
  }
  init["modes"] = modes;
  init["scale"] = c.initial.scale;
  j["initial"] = init;
  j["diagnostics"] = c.diagnostics;
  Json ev = Json::array();
  for (const auto& e : c.events) {
    Json o;
    o["kind"] = to_string(e.kind);
    if (e.kind != EventKind::self_intersect) o["threshold"] = e.threshold;
    ev.push_back(o);
  }
  j["events"] = ev;
  j["filter_level"] = c.filter_level;
  j["viscous_node_cap"] = c.viscous_node_cap;
  j["output_dir"] = c.output_dir;
  j["seed"] = c.seed;
  return j;
}

inline std::string dump_resolved(const RunConfig& c) { return to_json(c).dump(2) + "\n"; }

}  // namespace wavemodels::cli
