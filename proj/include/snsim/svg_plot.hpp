#pragma once

#include <string>
#include <vector>

#include "snsim/spectra.hpp"
#include "snsim/sweep.hpp"

namespace snsim {

// Deterministic standalone SVG output: fixed precision, no timestamps.

void write_spectrum_svg(const std::string& path, const std::vector<SpectrumRecord>& specs,
                        const std::vector<std::string>& labels, bool log_y);

// HWHM against the sweep axis with error bars and a dashed reference line
// at the transit rate.
void write_summary_svg(const std::string& path, const std::vector<SweepRow>& rows,
                       double gamma_t_hz, const std::string& x_label, bool log_x);

}  // namespace snsim
