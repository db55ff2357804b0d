#pragma once

#include <cstdint>
#include <string>

#include "snsim/dynamics.hpp"

namespace snsim {

// Flat JSON object with SI-suffixed keys (omega_rad_s, density_m3, ...).
// Unknown keys and malformed values raise ConfigError naming the field.
SimConfig config_from_json_text(const std::string& text, const std::string& origin = "<inline>");
SimConfig load_config(const std::string& path);

// SNSIM_<KEY> environment variables override config values, e.g.
// SNSIM_DENSITY_M3=4e20.  Applied by the CLI after the file is read.
void apply_env_overrides(SimConfig& cfg);

std::string config_to_json(const SimConfig& cfg);  // canonical ordering

// FNV-1a 64 over the canonical serialization of every physics and numerics
// key except the seed.
uint64_t config_hash(const SimConfig& cfg);
std::string config_hash_hex(const SimConfig& cfg);

}  // namespace snsim
