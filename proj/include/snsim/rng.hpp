#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace snsim {

// One deterministic stream per trajectory.  Draw helpers are hand-rolled so
// a given (master seed, stream index) produces identical doubles on every
// platform and under any thread layout.
struct RngStream {
  std::mt19937_64 gen;

  explicit RngStream(uint64_t master_seed, uint64_t stream_index = 0, uint64_t salt = 0) {
    std::seed_seq seq{static_cast<uint32_t>(master_seed),
                      static_cast<uint32_t>(master_seed >> 32),
                      static_cast<uint32_t>(stream_index),
                      static_cast<uint32_t>(stream_index >> 32),
                      static_cast<uint32_t>(salt),
                      static_cast<uint32_t>(salt >> 32)};
    gen.seed(seq);
  }

  double uniform() { return (gen() >> 11) * 0x1.0p-53; }  // [0, 1)

  double exponential(double mean) { return -mean * std::log1p(-uniform()); }
};

}  // namespace snsim
