#pragma once

#include "snsim/dynamics.hpp"
#include "snsim/spectra.hpp"

namespace snsim {

struct RunStats {
  double base_dt = 0.0, effective_dt = 0.0;
  int startup_halvings = 0;
  long refined_segments = 0;
  int max_refine_depth = 0;
  double max_trace_dev = 0.0;
  long burn_in_samples = 0;
  long spectrum_samples = 0;  // per-trajectory samples entering the periodogram
  double elapsed_s = 0.0;
};

// Simulate the ensemble, drop the burn-in, average the per-trajectory
// periodograms.  The reduction is ordered by trajectory index, so the result
// is byte-identical for any thread count.
SpectrumRecord run_simulate(const SimConfig& cfg, int threads, RunStats* stats = nullptr,
                            std::vector<TrajectoryRecord>* keep_records = nullptr,
                            Window window = Window::hann);

}  // namespace snsim
