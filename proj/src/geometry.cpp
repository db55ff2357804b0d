#include "snsim/geometry.hpp"

#include <cmath>

#include "snsim/errors.hpp"
#include "snsim/operators.hpp"

namespace snsim {

double nn_distance_from_uniform(double density, double u) {
  if (!(density > 0.0)) throw ConfigError("density must be positive", "density_m3");
  // F(r) = 1 - exp(-(4/3) pi N r^3)  =>  r = [3 ln(1/(1-u)) / (4 pi N)]^{1/3}
  return std::cbrt(-3.0 * std::log1p(-u) / (4.0 * pi * density));
}

double sample_nn_distance(double density, double r_min, RngStream& rng) {
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const double r = nn_distance_from_uniform(density, rng.uniform());
    if (r >= r_min) return r;
  }
  throw NumericalError("nearest-neighbour rejection sampling stalled below r_min");
}

void sample_orientation(RngStream& rng, AngleMode mode, double& cos_theta, double& phi) {
  if (mode == AngleMode::sphere)
    cos_theta = 2.0 * rng.uniform() - 1.0;
  else
    cos_theta = std::cos(pi * rng.uniform());  // uniform in theta, pole-heavy
  phi = 2.0 * pi * rng.uniform();
}

double mean_nn_distance(double density) {
  if (!(density > 0.0)) throw ConfigError("density must be positive", "density_m3");
  // <r> = Gamma(4/3) (3 / (4 pi N))^{1/3}
  return std::tgamma(4.0 / 3.0) * std::cbrt(3.0 / (4.0 * pi * density));
}

double truncated_mass(double density, double r_min) {
  if (!(density > 0.0)) throw ConfigError("density must be positive", "density_m3");
  return -std::expm1(-(4.0 / 3.0) * pi * density * r_min * r_min * r_min);
}

}  // namespace snsim
