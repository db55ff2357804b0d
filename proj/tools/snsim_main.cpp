#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "snsim/config.hpp"
#include "snsim/dipole_coupling.hpp"
#include "snsim/errors.hpp"
#include "snsim/fitting.hpp"
#include "snsim/io.hpp"
#include "snsim/pipeline.hpp"
#include "snsim/svg_plot.hpp"
#include "snsim/sweep.hpp"
#include "snsim/vapor.hpp"
#include "snsim/version.hpp"

namespace {

using namespace snsim;

void dump_traces(const std::string& path, const std::vector<TrajectoryRecord>& recs) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw ConfigError("cannot open '" + path + "' for writing", path);
  std::fprintf(f, "t_s");
  for (size_t i = 0; i < recs.size(); ++i) std::fprintf(f, ",sz_%03zu", i);
  std::fprintf(f, "\n");
  for (size_t k = 0; k < recs.front().times.size(); ++k) {
    std::fprintf(f, "%.9e", recs.front().times[k]);
    for (const TrajectoryRecord& r : recs) std::fprintf(f, ",%.9e", r.sz[k]);
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

std::string axis_label(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::density: return "Density (m^-3)";
    case SweepAxis::power: return "Rabi frequency (rad/s)";
    default: return "Detuning (rad/s)";
  }
}

nlohmann::json tensor_json(const Eigen::Matrix3cd& m, bool imag_part) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < 3; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < 3; ++c) row.push_back(imag_part ? m(r, c).imag() : m(r, c).real());
    rows.push_back(row);
  }
  return rows;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    write_text_file(out_path, text);
    std::printf("wrote %s\n", out_path.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-atom spin-noise simulator and spectrum toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config_path, out_path;
  uint64_t seed = 0;
  int threads = 0;
  std::string quality = "draft";
  app.add_option("--config", config_path, "simulation config JSON");
  CLI::Option* seed_opt = app.add_option("--seed", seed, "override the config seed");
  app.add_option("--threads", threads, "worker threads (0 = all hardware threads)");
  app.add_option("--out", out_path, "output file, prefix or directory");
  app.add_option("--quality", quality, "draft keeps the config; paper runs 4x trajectories, 2x duration")
      ->check(CLI::IsMember({"draft", "paper"}));

  CLI::App* sim = app.add_subcommand("simulate", "run the ensemble and write the averaged spectrum");
  sim->fallthrough();
  bool want_traces = false;
  sim->add_flag("--dump-traces", want_traces, "also write the per-trajectory spin traces");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep with per-point fits");
  sweep_cmd->fallthrough();
  std::string sweep_path;
  sweep_cmd->add_option("--spec", sweep_path, "sweep spec JSON")->required();

  CLI::App* fit_cmd = app.add_subcommand("fit", "fit Lorentzian components to a spectrum CSV");
  fit_cmd->fallthrough();
  std::string fit_in;
  int fit_components = 2;
  fit_cmd->add_option("--in", fit_in, "spectrum CSV")->required();
  fit_cmd->add_option("--components", fit_components, "number of Lorentzians (1-3)")
      ->check(CLI::Range(1, 3));

  CLI::App* vapor_cmd = app.add_subcommand("vapor", "alkali vapor rates for a cell temperature");
  vapor_cmd->fallthrough();
  double temperature_k = 0.0, beam_diameter = 0.3e-3, sigma_se = 2e-18, slowdown = 0.4;
  vapor_cmd->add_option("--temperature-k", temperature_k, "cell temperature (K)")->required();
  vapor_cmd->add_option("--beam-diameter-m", beam_diameter, "probe beam diameter (m)");
  vapor_cmd->add_option("--sigma-se", sigma_se, "spin-exchange cross section (m^2)");
  vapor_cmd->add_option("--slowdown", slowdown, "nuclear slow-down factor");

  CLI::App* greens_cmd = app.add_subcommand("greens", "dipole coupling tensors for one geometry");
  greens_cmd->fallthrough();
  double g_r = 0.0, g_cos_theta = 1.0, g_phi = 0.0;
  double g_k0 = 2 * pi / 780e-9, g_gamma0 = 2 * pi * 6.07e6;
  greens_cmd->add_option("--r", g_r, "pair separation (m)")->required();
  greens_cmd->add_option("--cos-theta", g_cos_theta, "pair axis polar cosine");
  greens_cmd->add_option("--phi", g_phi, "pair axis azimuth (rad)");
  greens_cmd->add_option("--k0", g_k0, "probe wavenumber (rad/m)");
  greens_cmd->add_option("--gamma0", g_gamma0, "excited-state decay (rad/s)");

  CLI::App* plot_cmd = app.add_subcommand("plot", "render spectra or a sweep summary to SVG");
  plot_cmd->fallthrough();
  std::vector<std::string> plot_in, plot_labels;
  bool plot_log_y = false, plot_summary = false, plot_log_x = false;
  double plot_gamma_t_hz = 0.0;
  std::string plot_x_label;
  plot_cmd->add_option("--in", plot_in, "input CSV file(s)")->required();
  plot_cmd->add_option("--labels", plot_labels, "legend labels, one per input");
  plot_cmd->add_flag("--log-y", plot_log_y, "logarithmic PSD axis");
  plot_cmd->add_flag("--summary", plot_summary, "treat the input as a sweep summary");
  plot_cmd->add_flag("--log-x", plot_log_x, "logarithmic sweep axis");
  plot_cmd->add_option("--gamma-t-hz", plot_gamma_t_hz, "transit-rate reference line (Hz)");
  plot_cmd->add_option("--x-label", plot_x_label, "sweep axis label");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(sim)) {
      SimConfig cfg = config_path.empty() ? SimConfig{} : load_config(config_path);
      apply_env_overrides(cfg);
      if (seed_opt->count() > 0) cfg.seed = seed;
      if (quality == "paper") {
        cfg.trajectories *= 4;
        cfg.duration *= 2;
      }
      const std::string prefix = out_path.empty() ? "spectrum" : out_path;

      RunStats stats;
      std::vector<TrajectoryRecord> recs;
      const SpectrumRecord spec =
          run_simulate(cfg, threads, &stats, want_traces ? &recs : nullptr);
      write_spectrum_csv(prefix + ".csv", spec);
      write_metadata_json(prefix + ".meta.json", cfg, spec, stats);
      if (want_traces) dump_traces(prefix + "_traces.csv", recs);
      std::printf("wrote %s.csv: %zu bins, rbw %.6g Hz, %d trajectories, %.1f s\n",
                  prefix.c_str(), spec.freq_hz.size(), spec.rbw_hz, cfg.trajectories,
                  stats.elapsed_s);
    } else if (app.got_subcommand(sweep_cmd)) {
      SweepSpec sp = load_sweep_spec(sweep_path);
      apply_env_overrides(sp.base);
      if (seed_opt->count() > 0) sp.base.seed = seed;
      if (quality == "paper") {
        sp.base.trajectories *= 4;
        sp.base.duration *= 2;
      }
      const std::string dir = out_path.empty() ? "sweep_out" : out_path;
      const std::vector<SweepRow> rows = run_sweep(sp, dir, threads);
      write_summary_svg(dir + "/summary.svg", rows, sp.base.gamma_t / (2 * pi),
                        axis_label(sp.axis), sp.axis == SweepAxis::density);
      for (const SweepRow& r : rows)
        std::printf("%-12.5g hwhm %.6g +- %.2g Hz  low-freq %.3f  ddi excess %.6g Hz%s\n",
                    r.axis_value, r.hwhm_hz, r.hwhm_err_hz, r.low_freq_fraction,
                    r.delta_ddi_hz, r.fit_converged ? "" : "  [fit did not converge]");
      std::printf("wrote %s/summary.csv (%zu points)\n", dir.c_str(), rows.size());
    } else if (app.got_subcommand(fit_cmd)) {
      const SpectrumRecord spec = read_spectrum_csv(fit_in);
      const FitModel init = default_init(spec, fit_components);
      const FitResult fr = fit_spectrum(spec, init);
      emit(out_path, fit_to_json(fr));
    } else if (app.got_subcommand(vapor_cmd)) {
      const double density = density_from_temperature(temperature_k);
      const double vbar = thermal_velocity(temperature_k, consts::rb85_mass);
      nlohmann::json j;
      j["temperature_k"] = temperature_k;
      j["density_m3"] = density;
      j["vbar_m_s"] = vbar;
      j["transit_rate_hz"] = transit_rate_hz(vbar, beam_diameter);
      j["spin_exchange_rate_hz"] = spin_exchange_rate_hz(density, vbar, sigma_se, slowdown);
      emit(out_path, j.dump(2) + "\n");
    } else if (app.got_subcommand(greens_cmd)) {
      PairGeometry g;
      g.r = g_r;
      g.cos_theta = g_cos_theta;
      g.phi = g_phi;
      const CouplingTensors ct = coupling_coeffs(g, g_k0, g_gamma0);
      nlohmann::json j;
      j["x"] = g_k0 * g_r;
      j["gamma_self_rad_s"] = ct.gamma_self;
      j["zeta_re"] = tensor_json(ct.zeta, false);
      j["zeta_im"] = tensor_json(ct.zeta, true);
      j["gamma_cross_re"] = tensor_json(ct.gamma_cross, false);
      j["gamma_cross_im"] = tensor_json(ct.gamma_cross, true);
      emit(out_path, j.dump(2) + "\n");
    } else if (app.got_subcommand(plot_cmd)) {
      if (plot_summary) {
        if (plot_in.size() != 1)
          throw ConfigError("summary plots take exactly one input CSV", "--in");
        const std::vector<SweepRow> rows = read_summary_csv(plot_in[0]);
        const std::string label = plot_x_label.empty() ? "Sweep axis" : plot_x_label;
        write_summary_svg(out_path.empty() ? "summary.svg" : out_path, rows,
                          plot_gamma_t_hz, label, plot_log_x);
        std::printf("wrote %s\n", out_path.empty() ? "summary.svg" : out_path.c_str());
      } else {
        std::vector<SpectrumRecord> specs;
        specs.reserve(plot_in.size());
        for (const std::string& p : plot_in) specs.push_back(read_spectrum_csv(p));
        std::vector<std::string> labels = plot_labels;
        if (labels.empty()) labels = plot_in;
        write_spectrum_svg(out_path.empty() ? "plot.svg" : out_path, specs, labels,
                           plot_log_y);
        std::printf("wrote %s\n", out_path.empty() ? "plot.svg" : out_path.c_str());
      }
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
