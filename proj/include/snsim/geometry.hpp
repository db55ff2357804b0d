#pragma once

#include "snsim/rng.hpp"

namespace snsim {

enum class ResampleMode { fixed_period, exponential };
enum class AngleMode { sphere, uniform_theta };

struct GeometrySchedule {
  double tau_c = 1.1e-8;                         // geometry correlation time (s)
  ResampleMode mode = ResampleMode::fixed_period;
  double r_min = 20e-9;                          // hard short-distance cutoff (m)
  double density = 1e18;                         // number density (m^-3)
};

// Inverse CDF of the nearest-neighbour distance in an ideal gas,
// P(r) = 4 pi N r^2 exp(-(4/3) pi N r^3).
double nn_distance_from_uniform(double density, double u);

// Rejection-sample the distribution above r_min.  Throws NumericalError if
// the rejection loop stalls (essentially all mass below the cutoff).
double sample_nn_distance(double density, double r_min, RngStream& rng);

// Isotropic by default; `uniform_theta` biases the polar angle for checks.
// Draw order: cos(theta) first, then phi.
void sample_orientation(RngStream& rng, AngleMode mode, double& cos_theta, double& phi);

double mean_nn_distance(double density);
double truncated_mass(double density, double r_min);  // P(r < r_min)

}  // namespace snsim
