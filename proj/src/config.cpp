#include "pcdoa/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include "pcdoa/error.hpp"

namespace pcdoa {

using nlohmann::json;

namespace {

void check_keys(const json& object, std::initializer_list<const char*> allowed,
                const std::string& where) {
  if (!object.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& item : object.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* key) { return item.key() == key; });
    if (!known) throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

template <typename T>
T get_or(const json& object, const char* key, T fallback, const std::string& where) {
  const auto it = object.find(key);
  if (it == object.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("wrong type for '") + key + "' in " + where);
  }
}

double number(const json& value, const std::string& where) {
  if (!value.is_number()) throw ConfigError(where + " must be a number");
  return value.get<double>();
}

int positive_int(const json& object, const char* key, int fallback, const std::string& where) {
  const int v = get_or<int>(object, key, fallback, where);
  if (v < 1) throw ConfigError(std::string("'") + key + "' in " + where + " must be positive");
  return v;
}

Layout parse_layout(const std::string& text) {
  if (text == "equidistant") return Layout::equidistant;
  if (text == "uniform_random") return Layout::uniform_random;
  throw ConfigError("unknown layout '" + text + "'");
}

Estimator parse_estimator(const std::string& text) {
  if (text == "mf") return Estimator::mf;
  if (text == "nls") return Estimator::nls;
  throw ConfigError("unknown estimator '" + text + "'");
}

SweepAxis parse_axis(const std::string& text) {
  if (text == "none") return SweepAxis::none;
  if (text == "snr") return SweepAxis::snr;
  if (text == "separation") return SweepAxis::separation;
  throw ConfigError("unknown sweep axis '" + text + "'");
}

void parse_geometry(const json& g, GeometryParams& out) {
  const std::string where = "geometry";
  check_keys(g, {"layout", "subarrays", "elements", "spacing", "aperture", "wavelength", "seed"},
             where);
  out.layout = parse_layout(get_or<std::string>(g, "layout", to_string(out.layout), where));
  out.subarrays = positive_int(g, "subarrays", out.subarrays, where);
  out.elements = positive_int(g, "elements", out.elements, where);
  out.spacing = get_or<double>(g, "spacing", out.spacing, where);
  out.aperture = get_or<double>(g, "aperture", out.aperture, where);
  out.wavelength = get_or<double>(g, "wavelength", out.wavelength, where);
  out.seed = get_or<std::uint64_t>(g, "seed", out.seed, where);
}

void parse_sources(const json& s, ScenarioSpec& out) {
  check_keys(s, {"directions_deg", "amplitudes"}, "sources");
  if (!s.contains("directions_deg") || !s["directions_deg"].is_array())
    throw ConfigError("sources.directions_deg must be a list");
  for (const json& v : s["directions_deg"]) out.directions_deg.push_back(number(v, "direction"));
  if (!s.contains("amplitudes")) {
    out.amplitudes.assign(out.directions_deg.size(), Complex(1.0, 0.0));
    return;
  }
  if (!s["amplitudes"].is_array()) throw ConfigError("sources.amplitudes must be a list");
  for (const json& a : s["amplitudes"]) {
    check_keys(a, {"magnitude", "phase_deg"}, "amplitude");
    const double magnitude = a.contains("magnitude") ? number(a["magnitude"], "magnitude") : 1.0;
    const double phase = a.contains("phase_deg") ? number(a["phase_deg"], "phase_deg") : 0.0;
    out.amplitudes.push_back(std::polar(magnitude, deg_to_rad(phase)));
  }
  if (out.amplitudes.size() != out.directions_deg.size())
    throw ConfigError("sources.amplitudes and sources.directions_deg differ in length");
}

std::vector<double> parse_sweep_values(const json& sweep) {
  std::vector<double> values;
  if (sweep.contains("values")) {
    if (sweep.contains("start") || sweep.contains("stop") || sweep.contains("step"))
      throw ConfigError("run.sweep takes either values or start/stop/step");
    if (!sweep["values"].is_array()) throw ConfigError("run.sweep.values must be a list");
    for (const json& v : sweep["values"]) values.push_back(number(v, "sweep value"));
    return values;
  }
  if (!sweep.contains("start") && !sweep.contains("stop") && !sweep.contains("step"))
    return values;
  if (!sweep.contains("start") || !sweep.contains("stop") || !sweep.contains("step"))
    throw ConfigError("run.sweep needs start, stop and step together");
  const double start = number(sweep["start"], "sweep start");
  const double stop = number(sweep["stop"], "sweep stop");
  const double step = number(sweep["step"], "sweep step");
  if (!(step > 0.0) || stop < start) throw ConfigError("run.sweep range is empty");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i) values.push_back(start + static_cast<double>(i) * step);
  return values;
}

void parse_run(const json& r, RunConfig& out) {
  const std::string where = "run";
  check_keys(r, {"estimator", "grid", "seed", "trials", "sweep", "threads", "mode", "layouts"},
             where);
  if (r.contains("estimator")) {
    const json& e = r["estimator"];
    out.estimators.clear();
    if (e.is_string() && e.get<std::string>() == "both") {
      out.estimators = {Estimator::mf, Estimator::nls};
    } else if (e.is_string()) {
      out.estimators.push_back(parse_estimator(e.get<std::string>()));
    } else if (e.is_array()) {
      for (const json& v : e) {
        if (!v.is_string()) throw ConfigError("run.estimator entries must be strings");
        out.estimators.push_back(parse_estimator(v.get<std::string>()));
      }
    } else {
      throw ConfigError("run.estimator must be a string or a list");
    }
    if (out.estimators.empty()) throw ConfigError("run.estimator is empty");
  }
  if (r.contains("grid")) {
    const json& g = r["grid"];
    check_keys(g, {"start", "stop", "step"}, "run.grid");
    out.grid.start = get_or<double>(g, "start", out.grid.start, "run.grid");
    out.grid.stop = get_or<double>(g, "stop", out.grid.stop, "run.grid");
    out.grid.step = get_or<double>(g, "step", out.grid.step, "run.grid");
  }
  out.seed = get_or<std::uint64_t>(r, "seed", out.seed, where);
  out.trials = positive_int(r, "trials", out.trials, where);
  out.threads = get_or<unsigned>(r, "threads", out.threads, where);
  if (r.contains("sweep")) {
    const json& s = r["sweep"];
    check_keys(s, {"axis", "values", "start", "stop", "step"}, "run.sweep");
    out.axis = parse_axis(get_or<std::string>(s, "axis", "none", "run.sweep"));
    out.sweep_values = parse_sweep_values(s);
  }
  if (r.contains("mode")) {
    const std::string mode = get_or<std::string>(r, "mode", "jade", where);
    if (mode == "jade") out.mode = OrthogonalityMode::jade;
    else if (mode == "statistics") out.mode = OrthogonalityMode::statistics;
    else throw ConfigError("unknown orthogonality mode '" + mode + "'");
  }
  if (r.contains("layouts")) {
    if (!r["layouts"].is_array()) throw ConfigError("run.layouts must be a list");
    out.layouts.clear();
    for (const json& v : r["layouts"]) {
      if (!v.is_string()) throw ConfigError("run.layouts entries must be strings");
      out.layouts.push_back(parse_layout(v.get<std::string>()));
    }
  }
}

}  // namespace

std::string to_string(Layout layout) {
  return layout == Layout::equidistant ? "equidistant" : "uniform_random";
}

std::string to_string(Estimator estimator) { return estimator == Estimator::mf ? "mf" : "nls"; }

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::snr: return "snr";
    case SweepAxis::separation: return "separation";
    default: return "none";
  }
}

std::filesystem::path resolve_config_path(const std::string& name_or_path) {
  namespace fs = std::filesystem;
  const fs::path direct(name_or_path);
  if (fs::is_regular_file(direct)) return direct;
  const fs::path local = fs::path("configs") / (name_or_path + ".json");
  if (fs::is_regular_file(local)) return local;
  const fs::path installed = fs::path(PCDOA_CONFIG_DIR) / (name_or_path + ".json");
  if (fs::is_regular_file(installed)) return installed;
  throw IoError("config '" + name_or_path + "' not found");
}

RunConfig parse_config(const json& document) {
  check_keys(document, {"geometry", "sources", "noise", "run"}, "config");
  RunConfig out;
  if (document.contains("geometry")) parse_geometry(document["geometry"], out.geometry);
  if (!document.contains("sources")) throw ConfigError("config has no sources block");
  parse_sources(document["sources"], out.scenario);
  if (document.contains("noise")) {
    const json& n = document["noise"];
    check_keys(n, {"snr_db"}, "noise");
    if (n.contains("snr_db") && !n["snr_db"].is_null())
      out.scenario.snr_db = number(n["snr_db"], "noise.snr_db");
  }
  if (document.contains("run")) parse_run(document["run"], out);

  try {
    trial_config(out, out.estimators.front()).validate();
    build_geometry(out.geometry);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return out;
}

RunConfig load_config(const std::string& name_or_path) {
  const auto path = resolve_config_path(name_or_path);
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  json document;
  try {
    document = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(document);
}

json to_json(const RunConfig& config) {
  json geometry = {{"layout", to_string(config.geometry.layout)},
                   {"subarrays", config.geometry.subarrays},
                   {"elements", config.geometry.elements},
                   {"spacing", config.geometry.spacing},
                   {"aperture", config.geometry.aperture},
                   {"wavelength", config.geometry.wavelength},
                   {"seed", config.geometry.seed}};
  json amplitudes = json::array();
  for (const Complex& a : config.scenario.amplitudes)
    amplitudes.push_back({{"magnitude", std::abs(a)}, {"phase_deg", rad_to_deg(std::arg(a))}});
  json estimators = json::array();
  for (Estimator e : config.estimators) estimators.push_back(to_string(e));
  json layouts = json::array();
  for (Layout l : config.layouts) layouts.push_back(to_string(l));

  json run = {{"estimator", estimators},
              {"grid", {{"start", config.grid.start}, {"stop", config.grid.stop}, {"step", config.grid.step}}},
              {"seed", config.seed},
              {"trials", config.trials},
              {"sweep", {{"axis", to_string(config.axis)}, {"values", config.sweep_values}}},
              {"threads", config.threads},
              {"mode", config.mode == OrthogonalityMode::jade ? "jade" : "statistics"},
              {"layouts", layouts}};
  json snr = std::isfinite(config.scenario.snr_db) ? json(config.scenario.snr_db) : json(nullptr);
  return {{"geometry", geometry},
          {"sources", {{"directions_deg", config.scenario.directions_deg}, {"amplitudes", amplitudes}}},
          {"noise", {{"snr_db", snr}}},
          {"run", run}};
}

TrialConfig trial_config(const RunConfig& config, Estimator estimator) {
  TrialConfig out;
  out.geometry = config.geometry;
  out.scenario = config.scenario;
  out.estimator = estimator;
  out.grid = config.grid;
  out.axis = config.axis;
  out.sweep_values = config.sweep_values;
  out.trials = config.trials;
  out.base_seed = config.seed;
  out.threads = config.threads;
  return out;
}

OrthogonalityConfig orthogonality_config(const RunConfig& config, Layout layout) {
  if (config.scenario.directions_deg.size() != 2)
    throw ConfigError("orthogonality runs need exactly two sources");
  if (config.axis != SweepAxis::separation)
    throw ConfigError("orthogonality runs need a separation sweep");
  OrthogonalityConfig out;
  out.geometry = config.geometry;
  out.geometry.layout = layout;
  out.theta1_deg = config.scenario.directions_deg[0];
  out.amplitudes = config.scenario.amplitudes;
  out.snr_db = config.scenario.snr_db;
  out.separations = config.sweep_values;
  out.seed = config.seed;
  return out;
}

}  // namespace pcdoa
