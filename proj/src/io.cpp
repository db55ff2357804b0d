#include "snsim/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "snsim/errors.hpp"

namespace snsim {

namespace {

constexpr const char* kSpectrumHeader = "freq_hz,psd,stderr";

}  // namespace

void write_spectrum_csv(const std::string& path, const SpectrumRecord& spec) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw ConfigError("cannot open '" + path + "' for writing", path);
  std::fprintf(f, "%s\n", kSpectrumHeader);
  for (size_t i = 0; i < spec.freq_hz.size(); ++i)
    std::fprintf(f, "%.9e,%.9e,%.9e\n", spec.freq_hz[i], spec.psd[i],
                 spec.stderr_psd[i]);
  std::fclose(f);
}

SpectrumRecord read_spectrum_csv(const std::string& path) {
  const std::string text = read_text_file(path);
  SpectrumRecord spec;

  size_t pos = 0;
  auto fail = [&](size_t at) {
    throw ConfigError("malformed spectrum CSV at byte " + std::to_string(at) +
                          " of '" + path + "'",
                      path);
  };

  const size_t header_len = std::strlen(kSpectrumHeader);
  if (text.compare(0, header_len, kSpectrumHeader) != 0) fail(0);
  pos = header_len;
  if (pos < text.size() && text[pos] == '\r') ++pos;
  if (pos >= text.size() || text[pos] != '\n') fail(pos);
  ++pos;

  while (pos < text.size()) {
    double vals[3];
    for (int col = 0; col < 3; ++col) {
      const char* start = text.c_str() + pos;
      char* end = nullptr;
      vals[col] = std::strtod(start, &end);
      if (end == start) fail(pos);
      pos += static_cast<size_t>(end - start);
      if (col < 2) {
        if (pos >= text.size() || text[pos] != ',') fail(pos);
        ++pos;
      }
    }
    if (pos < text.size() && text[pos] == '\r') ++pos;
    if (pos < text.size()) {
      if (text[pos] != '\n') fail(pos);
      ++pos;
    }
    spec.freq_hz.push_back(vals[0]);
    spec.psd.push_back(vals[1]);
    spec.stderr_psd.push_back(vals[2]);
  }
  if (spec.freq_hz.size() < 2)
    throw ConfigError("spectrum CSV '" + path + "' holds fewer than two bins", path);
  spec.rbw_hz = spec.freq_hz[1] - spec.freq_hz[0];
  spec.n_avg = 1;
  return spec;
}

void write_metadata_json(const std::string& path, const SimConfig& cfg,
                         const SpectrumRecord& spec, const RunStats& stats) {
  nlohmann::json j;
  j["config"] = nlohmann::json::parse(config_to_json(cfg));
  j["config_hash"] = config_hash_hex(cfg);
  j["rbw_hz"] = spec.rbw_hz;
  j["n_avg"] = spec.n_avg;
  j["n_freq_bins"] = spec.freq_hz.size();
  j["base_dt_s"] = stats.base_dt;
  j["effective_dt_s"] = stats.effective_dt;
  j["startup_halvings"] = stats.startup_halvings;
  j["refined_segments"] = stats.refined_segments;
  j["max_refine_depth"] = stats.max_refine_depth;
  j["max_trace_dev"] = stats.max_trace_dev;
  j["burn_in_samples"] = stats.burn_in_samples;
  j["spectrum_samples"] = stats.spectrum_samples;
  write_text_file(path, j.dump(2) + "\n");
}

std::string fit_to_json(const FitResult& fr) {
  nlohmann::json j;
  j["converged"] = fr.converged;
  j["iterations"] = fr.iterations;
  j["baseline"] = fr.baseline;
  j["residual_norm"] = fr.residual_norm;
  j["components"] = nlohmann::json::array();
  for (size_t i = 0; i < fr.components.size(); ++i) {
    const FitComponentResult& c = fr.components[i];
    nlohmann::json jc;
    jc["center_hz"] = c.center_hz;
    jc["center_err_hz"] = c.center_err_hz;
    jc["hwhm_hz"] = c.hwhm_hz;
    jc["hwhm_err_hz"] = c.hwhm_err_hz;
    jc["area"] = c.area;
    jc["area_err"] = c.area_err;
    jc["power_fraction"] = power_fraction(fr, i);
    jc["power_fraction_err"] = power_fraction_err(fr, i);
    j["components"].push_back(jc);
  }
  return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing", path);
  out << content;
  if (!out) throw ConfigError("write to '" + path + "' failed", path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'", path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace snsim
