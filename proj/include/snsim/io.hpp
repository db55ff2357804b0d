#pragma once

#include <string>

#include "snsim/config.hpp"
#include "snsim/fitting.hpp"
#include "snsim/pipeline.hpp"

namespace snsim {

// CSV with header "freq_hz,psd,stderr", fixed %.9e formatting.
void write_spectrum_csv(const std::string& path, const SpectrumRecord& spec);

// Strict parser; malformed content raises ConfigError with the byte offset.
SpectrumRecord read_spectrum_csv(const std::string& path);

void write_metadata_json(const std::string& path, const SimConfig& cfg,
                         const SpectrumRecord& spec, const RunStats& stats);

std::string fit_to_json(const FitResult& fr);
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);  // ConfigError if unreadable

}  // namespace snsim
