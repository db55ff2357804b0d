#pragma once

namespace snsim {

namespace consts {
inline constexpr double k_boltzmann = 1.380649e-23;        // J/K
inline constexpr double amu = 1.66053906660e-27;           // kg
inline constexpr double rb85_mass = 84.911789738 * amu;    // kg
inline constexpr double torr_to_pa = 133.322387415;
}  // namespace consts

struct VaporParams {
  double temperature = 448.0;           // K
  double mass = consts::rb85_mass;      // kg
  double beam_diameter = 0.3e-3;        // m
  double sigma_se = 2e-18;              // spin-exchange cross section (m^2)
  double slowdown = 0.4;                // nuclear slow-down factor
  double gamma_optical = 2 * 3.14159265358979323846 * 6.07e6;  // rad/s
  double wavelength = 780e-9;           // m
};

// Saturated rubidium number density (m^-3); valid for 300 K <= T <= 500 K.
double density_from_temperature(double temperature_k);

double thermal_velocity(double temperature_k, double mass);   // sqrt(3 kB T / m), m/s

// All rates below are plain frequencies in Hz.
double transit_rate_hz(double vbar, double beam_diameter);
double spin_exchange_rate_hz(double density, double vbar, double sigma_se = 2e-18,
                             double slowdown = 0.4);
double excitation_rate_hz(double gamma_optical, double omega, double delta);

}  // namespace snsim
