#include "snsim/vapor.hpp"

#include <cmath>

#include "snsim/errors.hpp"
#include "snsim/operators.hpp"

namespace snsim {

double density_from_temperature(double temperature_k) {
  if (!(temperature_k >= 300.0 && temperature_k <= 500.0))
    throw ConfigError("temperature outside the 300-500 K validity range", "temperature_k");
  // Saturated vapor pressure over liquid rubidium (Nesmeyanov correlation):
  //   log10 P[torr] = 15.88253 - 4529.635/T + 0.00058663 T - 2.99138 log10 T
  const double log10p = 15.88253 - 4529.635 / temperature_k + 0.00058663 * temperature_k -
                        2.99138 * std::log10(temperature_k);
  const double p_pa = consts::torr_to_pa * std::pow(10.0, log10p);
  return p_pa / (consts::k_boltzmann * temperature_k);
}

double thermal_velocity(double temperature_k, double mass) {
  if (!(temperature_k > 0.0) || !(mass > 0.0))
    throw ConfigError("temperature and mass must be positive", "thermal_velocity");
  return std::sqrt(3.0 * consts::k_boltzmann * temperature_k / mass);
}

double transit_rate_hz(double vbar, double beam_diameter) {
  if (!(beam_diameter > 0.0)) throw ConfigError("beam diameter must be positive", "beam_diameter");
  return vbar / (2.0 * pi * beam_diameter);
}

double spin_exchange_rate_hz(double density, double vbar, double sigma_se, double slowdown) {
  if (!(density >= 0.0) || !(sigma_se >= 0.0))
    throw ConfigError("density and cross section must be >= 0", "spin_exchange_rate");
  return slowdown * density * sigma_se * vbar / (2.0 * pi);
}

double excitation_rate_hz(double gamma_optical, double omega, double delta) {
  // Order-of-magnitude scattering estimate Gamma * Omega^2 / (Omega^2 + Delta^2),
  // with a unit prefactor by convention.
  const double d2 = omega * omega + delta * delta;
  if (d2 == 0.0) return 0.0;
  return gamma_optical * (omega * omega / d2) / (2.0 * pi);
}

}  // namespace snsim
