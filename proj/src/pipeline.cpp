#include "snsim/pipeline.hpp"

#include <chrono>
#include <cmath>

#include "snsim/errors.hpp"

namespace snsim {

SpectrumRecord run_simulate(const SimConfig& cfg, int threads, RunStats* stats,
                            std::vector<TrajectoryRecord>* keep_records,
                            Window window) {
  validate(cfg);
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<TrajectoryRecord> records = simulate_ensemble(cfg, threads);

  const double burn = cfg.burn_in_or_default();
  const long n_total = static_cast<long>(records.front().sz.size());
  // first retained index: smallest k with k * dt_samp >= burn
  const long n_burn = static_cast<long>(std::ceil(burn / cfg.dt_samp - 1e-9));
  const long n_keep = n_total - n_burn;
  if (n_keep < 8)
    throw ConfigError("burn-in leaves fewer than 8 samples for the spectrum",
                      "burn_in_s");

  std::vector<SpectrumRecord> periodograms;
  periodograms.reserve(records.size());
  double max_dev = 0.0;
  long refined = 0;
  int max_depth = 0;
  for (const TrajectoryRecord& rec : records) {
    std::vector<double> seg(rec.sz.begin() + n_burn, rec.sz.end());
    periodograms.push_back(periodogram(seg, cfg.dt_samp, window));
    max_dev = std::max(max_dev, rec.max_trace_dev);
    refined += rec.refined_segments;
    max_depth = std::max(max_depth, rec.max_refine_depth);
  }
  SpectrumRecord avg = average_psd(periodograms);

  if (stats) {
    const PreparedTimestep prep = prepare_timestep(cfg);
    stats->base_dt = cfg.dt;
    stats->effective_dt = prep.dt;
    stats->startup_halvings = prep.halvings;
    stats->refined_segments = refined;
    stats->max_refine_depth = max_depth;
    stats->max_trace_dev = max_dev;
    stats->burn_in_samples = n_burn;
    stats->spectrum_samples = n_keep;
    stats->elapsed_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  if (keep_records) *keep_records = std::move(records);
  return avg;
}

}  // namespace snsim
