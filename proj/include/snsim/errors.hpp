#pragma once

#include <stdexcept>
#include <string>

namespace snsim {

// Invalid user-facing input: config files, CSV inputs, bad operator
// dimensions.  The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  std::string field;
  explicit ConfigError(const std::string& msg, const std::string& where = "")
      : std::runtime_error(where.empty() ? msg : where + ": " + msg), field(where) {}
};

// Numerical breakdown during integration: NaN state, step refinement cap,
// stalled rejection sampling.  The CLI maps this to exit code 3.
struct NumericalError : std::runtime_error {
  long trajectory = -1;
  explicit NumericalError(const std::string& msg, long traj = -1)
      : std::runtime_error(traj >= 0 ? msg + " (trajectory " + std::to_string(traj) + ")" : msg),
        trajectory(traj) {}
};

}  // namespace snsim
