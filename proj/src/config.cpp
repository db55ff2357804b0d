#include "snsim/config.hpp"

#include <array>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "snsim/errors.hpp"

namespace snsim {

namespace {

using nlohmann::json;

enum class Kind { number, integer, unsigned64, boolean, geometry_mode, angle_mode };

struct KeySpec {
  const char* name;
  Kind kind;
};

// Alphabetical; this is also the canonical serialization order.
constexpr std::array<KeySpec, 20> kKeys = {{
    {"angle_mode", Kind::angle_mode},
    {"burn_in_s", Kind::number},
    {"collective", Kind::boolean},
    {"ddi", Kind::boolean},
    {"delta_rad_s", Kind::number},
    {"density_m3", Kind::number},
    {"dt_s", Kind::number},
    {"dt_samp_s", Kind::number},
    {"duration_s", Kind::number},
    {"excited_zeeman", Kind::boolean},
    {"gamma0_rad_s", Kind::number},
    {"gamma_t_rad_s", Kind::number},
    {"geometry_mode", Kind::geometry_mode},
    {"k0_rad_m", Kind::number},
    {"larmor_rad_s", Kind::number},
    {"omega_rad_s", Kind::number},
    {"rmin_m", Kind::number},
    {"seed", Kind::unsigned64},
    {"tau_c_s", Kind::number},
    {"trajectories", Kind::integer},
}};

double need_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key + " must be a number", key);
  return v.get<double>();
}

bool need_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) throw ConfigError(key + " must be a boolean", key);
  return v.get<bool>();
}

void apply_key(SimConfig& cfg, const std::string& key, const json& v) {
  if (key == "omega_rad_s") cfg.drive.omega = need_number(v, key);
  else if (key == "delta_rad_s") cfg.drive.delta = need_number(v, key);
  else if (key == "larmor_rad_s") cfg.drive.larmor = need_number(v, key);
  else if (key == "gamma0_rad_s") cfg.gamma0 = need_number(v, key);
  else if (key == "gamma_t_rad_s") cfg.gamma_t = need_number(v, key);
  else if (key == "density_m3") cfg.geometry.density = need_number(v, key);
  else if (key == "tau_c_s") cfg.geometry.tau_c = need_number(v, key);
  else if (key == "rmin_m") cfg.geometry.r_min = need_number(v, key);
  else if (key == "k0_rad_m") cfg.k0 = need_number(v, key);
  else if (key == "duration_s") cfg.duration = need_number(v, key);
  else if (key == "dt_s") cfg.dt = need_number(v, key);
  else if (key == "dt_samp_s") cfg.dt_samp = need_number(v, key);
  else if (key == "burn_in_s") cfg.burn_in = need_number(v, key);
  else if (key == "trajectories") {
    if (!v.is_number_integer() && !v.is_number_unsigned())
      throw ConfigError("trajectories must be an integer", key);
    cfg.trajectories = v.get<int>();
  } else if (key == "seed") {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<int64_t>() >= 0))
      throw ConfigError("seed must be a non-negative integer", key);
    cfg.seed = v.get<uint64_t>();
  } else if (key == "ddi") cfg.ddi = need_bool(v, key);
  else if (key == "collective") cfg.collective = need_bool(v, key);
  else if (key == "excited_zeeman") cfg.excited_zeeman = need_bool(v, key);
  else if (key == "geometry_mode") {
    if (!v.is_string()) throw ConfigError("geometry_mode must be a string", key);
    const std::string s = v.get<std::string>();
    if (s == "fixed-period") cfg.geometry.mode = ResampleMode::fixed_period;
    else if (s == "exponential") cfg.geometry.mode = ResampleMode::exponential;
    else throw ConfigError("geometry_mode must be 'fixed-period' or 'exponential'", key);
  } else if (key == "angle_mode") {
    if (!v.is_string()) throw ConfigError("angle_mode must be a string", key);
    const std::string s = v.get<std::string>();
    if (s == "sphere") cfg.angle_mode = AngleMode::sphere;
    else if (s == "uniform-theta") cfg.angle_mode = AngleMode::uniform_theta;
    else throw ConfigError("angle_mode must be 'sphere' or 'uniform-theta'", key);
  } else {
    throw ConfigError("unknown config key '" + key + "'", key);
  }
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string value_text(const SimConfig& cfg, const KeySpec& spec) {
  const std::string key = spec.name;
  if (key == "omega_rad_s") return format_double(cfg.drive.omega);
  if (key == "delta_rad_s") return format_double(cfg.drive.delta);
  if (key == "larmor_rad_s") return format_double(cfg.drive.larmor);
  if (key == "gamma0_rad_s") return format_double(cfg.gamma0);
  if (key == "gamma_t_rad_s") return format_double(cfg.gamma_t);
  if (key == "density_m3") return format_double(cfg.geometry.density);
  if (key == "tau_c_s") return format_double(cfg.geometry.tau_c);
  if (key == "rmin_m") return format_double(cfg.geometry.r_min);
  if (key == "k0_rad_m") return format_double(cfg.k0);
  if (key == "duration_s") return format_double(cfg.duration);
  if (key == "dt_s") return format_double(cfg.dt);
  if (key == "dt_samp_s") return format_double(cfg.dt_samp);
  if (key == "burn_in_s") return format_double(cfg.burn_in);
  if (key == "trajectories") return std::to_string(cfg.trajectories);
  if (key == "seed") return std::to_string(cfg.seed);
  if (key == "ddi") return cfg.ddi ? "true" : "false";
  if (key == "collective") return cfg.collective ? "true" : "false";
  if (key == "excited_zeeman") return cfg.excited_zeeman ? "true" : "false";
  if (key == "geometry_mode")
    return cfg.geometry.mode == ResampleMode::fixed_period ? "fixed-period" : "exponential";
  return cfg.angle_mode == AngleMode::sphere ? "sphere" : "uniform-theta";
}

json parse_env_value(const KeySpec& spec, const char* raw) {
  const std::string env = std::string("SNSIM_") + spec.name;
  switch (spec.kind) {
    case Kind::number: {
      char* end = nullptr;
      const double d = std::strtod(raw, &end);
      if (end == raw || *end != '\0')
        throw ConfigError(env + " is not a number", spec.name);
      return json(d);
    }
    case Kind::integer: {
      char* end = nullptr;
      const long long i = std::strtoll(raw, &end, 10);
      if (end == raw || *end != '\0')
        throw ConfigError(env + " is not an integer", spec.name);
      return json(i);
    }
    case Kind::unsigned64: {
      if (raw[0] == '-') throw ConfigError(env + " must be non-negative", spec.name);
      char* end = nullptr;
      const unsigned long long u = std::strtoull(raw, &end, 10);
      if (end == raw || *end != '\0')
        throw ConfigError(env + " is not an integer", spec.name);
      return json(static_cast<uint64_t>(u));
    }
    case Kind::boolean: {
      const std::string s = raw;
      if (s == "true" || s == "1") return json(true);
      if (s == "false" || s == "0") return json(false);
      throw ConfigError(env + " must be true/false", spec.name);
    }
    default:
      return json(std::string(raw));
  }
}

}  // namespace

SimConfig config_from_json_text(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what(), origin);
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object", origin);

  SimConfig cfg;
  for (const auto& item : j.items()) apply_key(cfg, item.key(), item.value());
  return cfg;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'", path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json_text(buf.str(), path);
}

void apply_env_overrides(SimConfig& cfg) {
  for (const KeySpec& spec : kKeys) {
    std::string env = "SNSIM_";
    for (const char* c = spec.name; *c; ++c)
      env.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(*c))));
    const char* raw = std::getenv(env.c_str());
    if (!raw) continue;
    apply_key(cfg, spec.name, parse_env_value(spec, raw));
  }
}

std::string config_to_json(const SimConfig& cfg) {
  json j = json::object();
  j["omega_rad_s"] = cfg.drive.omega;
  j["delta_rad_s"] = cfg.drive.delta;
  j["larmor_rad_s"] = cfg.drive.larmor;
  j["gamma0_rad_s"] = cfg.gamma0;
  j["gamma_t_rad_s"] = cfg.gamma_t;
  j["density_m3"] = cfg.geometry.density;
  j["tau_c_s"] = cfg.geometry.tau_c;
  j["rmin_m"] = cfg.geometry.r_min;
  j["geometry_mode"] =
      cfg.geometry.mode == ResampleMode::fixed_period ? "fixed-period" : "exponential";
  j["angle_mode"] = cfg.angle_mode == AngleMode::sphere ? "sphere" : "uniform-theta";
  j["k0_rad_m"] = cfg.k0;
  j["duration_s"] = cfg.duration;
  j["dt_s"] = cfg.dt;
  j["dt_samp_s"] = cfg.dt_samp;
  j["burn_in_s"] = cfg.burn_in;
  j["trajectories"] = cfg.trajectories;
  j["seed"] = cfg.seed;
  j["ddi"] = cfg.ddi;
  j["collective"] = cfg.collective;
  j["excited_zeeman"] = cfg.excited_zeeman;
  return j.dump(2);
}

uint64_t config_hash(const SimConfig& cfg) {
  uint64_t h = 14695981039346656037ULL;
  auto mix = [&h](const std::string& s) {
    for (const unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
  };
  for (const KeySpec& spec : kKeys) {
    if (std::string(spec.name) == "seed") continue;
    mix(spec.name);
    mix("=");
    mix(value_text(cfg, spec));
    mix(";");
  }
  return h;
}

std::string config_hash_hex(const SimConfig& cfg) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(config_hash(cfg)));
  return buf;
}

}  // namespace snsim
