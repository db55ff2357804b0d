#pragma once

#include <string>
#include <vector>

#include "snsim/config.hpp"
#include "snsim/fitting.hpp"
#include "snsim/pipeline.hpp"

namespace snsim {

enum class SweepAxis { density, power, detuning };

struct SweepSpec {
  SweepAxis axis = SweepAxis::density;
  std::vector<double> values;
  SimConfig base;
  int fit_components = 2;
  double vbar_m_s = 363.0;  // thermal speed feeding the spin-exchange estimate
};

struct SweepRow {
  double axis_value = 0.0;
  double hwhm_hz = 0.0, hwhm_err_hz = 0.0;        // precessing peak, from the fit
  double low_freq_fraction = 0.0, low_freq_fraction_err = 0.0;
  double delta_ddi_hz = 0.0;  // hwhm minus the transit + spin-exchange floor
  bool fit_converged = false;
};

// JSON: {"axis": "density", "values": [...], "fit_components": 2,
//        "vbar_m_s": 363.0, "config": { ...simulate keys... }}
SweepSpec load_sweep_spec(const std::string& path);

// Runs every point, writes point_XXX_spectrum.csv (+ .meta.json), a
// summary.csv and a manifest.json into out_dir.  Fit failures are recorded
// in the row; the sweep keeps going.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const std::string& out_dir, int threads);

void write_summary_csv(const std::string& path, const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_summary_csv(const std::string& path);

}  // namespace snsim
