#include "snsim/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <filesystem>

#include <json.hpp>

#include "snsim/errors.hpp"
#include "snsim/io.hpp"
#include "snsim/vapor.hpp"

namespace snsim {

namespace {

constexpr const char* kSummaryHeader =
    "axis_value,hwhm_hz,hwhm_err_hz,low_freq_fraction,low_freq_fraction_err,"
    "delta_ddi_hz,fit_converged";

const char* axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::density: return "density";
    case SweepAxis::power: return "power";
    default: return "detuning";
  }
}

void apply_axis(SimConfig& cfg, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::density: cfg.geometry.density = value; break;
    case SweepAxis::power: cfg.drive.omega = value; break;
    case SweepAxis::detuning: cfg.drive.delta = value; break;
  }
}

std::string point_name(size_t i) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "point_%03zu_spectrum.csv", i);
  return buf;
}

}  // namespace

SweepSpec load_sweep_spec(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid sweep JSON: ") + e.what(), path);
  }
  if (!j.is_object()) throw ConfigError("sweep spec must be a JSON object", path);

  SweepSpec spec;
  bool have_axis = false, have_values = false;
  for (const auto& item : j.items()) {
    const std::string& key = item.key();
    const nlohmann::json& v = item.value();
    if (key == "axis") {
      if (!v.is_string()) throw ConfigError("axis must be a string", key);
      const std::string s = v.get<std::string>();
      if (s == "density") spec.axis = SweepAxis::density;
      else if (s == "power") spec.axis = SweepAxis::power;
      else if (s == "detuning") spec.axis = SweepAxis::detuning;
      else throw ConfigError("axis must be 'density', 'power' or 'detuning'", key);
      have_axis = true;
    } else if (key == "values") {
      if (!v.is_array() || v.empty())
        throw ConfigError("values must be a non-empty array", key);
      for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError("values must be numbers", key);
        spec.values.push_back(x.get<double>());
      }
      have_values = true;
    } else if (key == "fit_components") {
      if (!v.is_number_integer() && !v.is_number_unsigned())
        throw ConfigError("fit_components must be an integer", key);
      spec.fit_components = v.get<int>();
    } else if (key == "vbar_m_s") {
      if (!v.is_number()) throw ConfigError("vbar_m_s must be a number", key);
      spec.vbar_m_s = v.get<double>();
    } else if (key == "config") {
      if (!v.is_object()) throw ConfigError("config must be an object", key);
      spec.base = config_from_json_text(v.dump(), path + ":config");
    } else {
      throw ConfigError("unknown sweep key '" + key + "'", key);
    }
  }
  if (!have_axis) throw ConfigError("sweep spec is missing 'axis'", path);
  if (!have_values) throw ConfigError("sweep spec is missing 'values'", path);
  if (spec.fit_components < 1 || spec.fit_components > 3)
    throw ConfigError("fit_components must be 1, 2 or 3", "fit_components");
  return spec;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const std::string& out_dir,
                                int threads) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + out_dir + "'", out_dir);

  nlohmann::json manifest;
  manifest["axis"] = axis_name(spec.axis);
  manifest["n_points"] = spec.values.size();
  manifest["fit_components"] = spec.fit_components;
  manifest["vbar_m_s"] = spec.vbar_m_s;
  manifest["created_unix"] = static_cast<long long>(std::time(nullptr));
  manifest["points"] = nlohmann::json::array();

  std::vector<SweepRow> rows;
  rows.reserve(spec.values.size());
  for (size_t i = 0; i < spec.values.size(); ++i) {
    SimConfig cfg = spec.base;
    apply_axis(cfg, spec.axis, spec.values[i]);

    RunStats stats;
    const SpectrumRecord ps = run_simulate(cfg, threads, &stats);

    const std::string csv_name = point_name(i);
    const std::string csv_path = out_dir + "/" + csv_name;
    write_spectrum_csv(csv_path, ps);
    write_metadata_json(csv_path.substr(0, csv_path.size() - 4) + ".meta.json", cfg,
                        ps, stats);

    SweepRow row;
    row.axis_value = spec.values[i];

    // spectral max marks the precessing peak; the fitted component closest to
    // it carries the width for the summary
    size_t kmax = 1;
    for (size_t k = 1; k < ps.psd.size(); ++k)
      if (ps.psd[k] > ps.psd[kmax]) kmax = k;
    const double f_peak = ps.freq_hz[kmax];

    try {
      const FitModel init = default_init(ps, spec.fit_components);
      const FitResult fr = fit_spectrum(ps, init);
      size_t best = 0;
      for (size_t k = 1; k < fr.components.size(); ++k)
        if (std::abs(fr.components[k].center_hz - f_peak) <
            std::abs(fr.components[best].center_hz - f_peak))
          best = k;
      row.hwhm_hz = fr.components[best].hwhm_hz;
      row.hwhm_err_hz = fr.components[best].hwhm_err_hz;
      double frac = 0.0, frac_err_sq = 0.0;
      for (size_t k = 0; k < fr.components.size(); ++k) {
        if (std::abs(fr.components[k].center_hz) >= ps.rbw_hz) continue;
        frac += power_fraction(fr, k);
        const double e = power_fraction_err(fr, k);
        frac_err_sq += e * e;
      }
      row.low_freq_fraction = frac;
      row.low_freq_fraction_err = std::sqrt(frac_err_sq);
      row.fit_converged = fr.converged;
    } catch (const std::exception&) {
      const HwhmResult raw = hwhm(ps, f_peak, 0.5 * f_peak + 10.0 * ps.rbw_hz);
      row.hwhm_hz = raw.ok ? raw.hz : 0.0;
      row.hwhm_err_hz = raw.ok ? raw.err_hz : 0.0;
      row.fit_converged = false;
    }

    const double floor_hz = cfg.gamma_t / (2.0 * pi) +
                            spin_exchange_rate_hz(cfg.geometry.density, spec.vbar_m_s);
    row.delta_ddi_hz = std::max(0.0, row.hwhm_hz - floor_hz);
    rows.push_back(row);

    nlohmann::json jp;
    jp["axis_value"] = spec.values[i];
    jp["spectrum_csv"] = csv_name;
    jp["metadata"] = csv_name.substr(0, csv_name.size() - 4) + ".meta.json";
    jp["config_hash"] = config_hash_hex(cfg);
    manifest["points"].push_back(jp);
  }

  write_summary_csv(out_dir + "/summary.csv", rows);
  manifest["summary_csv"] = "summary.csv";
  write_text_file(out_dir + "/manifest.json", manifest.dump(2) + "\n");
  return rows;
}

void write_summary_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw ConfigError("cannot open '" + path + "' for writing", path);
  std::fprintf(f, "%s\n", kSummaryHeader);
  for (const SweepRow& r : rows)
    std::fprintf(f, "%.9e,%.9e,%.9e,%.9e,%.9e,%.9e,%d\n", r.axis_value, r.hwhm_hz,
                 r.hwhm_err_hz, r.low_freq_fraction, r.low_freq_fraction_err,
                 r.delta_ddi_hz, r.fit_converged ? 1 : 0);
  std::fclose(f);
}

std::vector<SweepRow> read_summary_csv(const std::string& path) {
  const std::string text = read_text_file(path);
  auto fail = [&](size_t at) {
    throw ConfigError("malformed summary CSV at byte " + std::to_string(at) +
                          " of '" + path + "'",
                      path);
  };

  size_t pos = 0;
  const size_t header_len = std::strlen(kSummaryHeader);
  if (text.compare(0, header_len, kSummaryHeader) != 0) fail(0);
  pos = header_len;
  if (pos < text.size() && text[pos] == '\r') ++pos;
  if (pos >= text.size() || text[pos] != '\n') fail(pos);
  ++pos;

  std::vector<SweepRow> rows;
  while (pos < text.size()) {
    double vals[7];
    for (int col = 0; col < 7; ++col) {
      const char* start = text.c_str() + pos;
      char* end = nullptr;
      vals[col] = std::strtod(start, &end);
      if (end == start) fail(pos);
      pos += static_cast<size_t>(end - start);
      if (col < 6) {
        if (pos >= text.size() || text[pos] != ',') fail(pos);
        ++pos;
      }
    }
    if (pos < text.size() && text[pos] == '\r') ++pos;
    if (pos < text.size()) {
      if (text[pos] != '\n') fail(pos);
      ++pos;
    }
    SweepRow r;
    r.axis_value = vals[0];
    r.hwhm_hz = vals[1];
    r.hwhm_err_hz = vals[2];
    r.low_freq_fraction = vals[3];
    r.low_freq_fraction_err = vals[4];
    r.delta_ddi_hz = vals[5];
    r.fit_converged = vals[6] != 0.0;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace snsim
