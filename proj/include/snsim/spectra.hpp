#pragma once

#include <vector>

namespace snsim {

enum class Window { hann, rectangular };

struct SpectrumRecord {
  std::vector<double> freq_hz;
  std::vector<double> psd;         // one-sided power spectral density
  std::vector<double> stderr_psd;  // standard error of the mean, per bin
  double rbw_hz = 0.0;             // resolution bandwidth = 1 / (N dt)
  int n_avg = 0;
};

// Mean-removed, windowed one-sided periodogram.  Normalization: the sum of
// psd * rbw equals the variance of the windowed signal divided by the
// window power mean(w^2), so a rectangular window reproduces Var(x) exactly.
SpectrumRecord periodogram(const std::vector<double>& values, double dt_samp,
                           Window w = Window::hann);

// Pointwise mean across records sharing one grid; n_avg accumulates and the
// per-bin standard error comes from the scatter across records.
SpectrumRecord average_psd(const std::vector<SpectrumRecord>& records);

struct HwhmResult {
  double hz = 0.0;
  double err_hz = 0.0;  // grid-resolution uncertainty, rbw/2
  bool ok = false;      // false when a half-maximum crossing is missing
};

// Half width at half maximum of the peak nearest center_hz, found by linear
// interpolation of the half-max crossings on each side; returns the mean of
// the two half widths.
HwhmResult hwhm(const SpectrumRecord& spec, double center_hz, double search_window_hz);

}  // namespace snsim
