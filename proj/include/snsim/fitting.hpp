#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "snsim/spectra.hpp"

namespace snsim {

struct FitComponent {
  double center_hz = 0.0;
  bool center_fixed = false;
  double hwhm_hz = 1.0;
  double area = 1.0;
};

struct FitModel {
  std::vector<FitComponent> components;
  double baseline = 0.0;
};

struct FitComponentResult {
  double center_hz = 0.0, center_err_hz = 0.0;
  double hwhm_hz = 0.0, hwhm_err_hz = 0.0;
  double area = 0.0, area_err = 0.0;
};

struct FitResult {
  std::vector<FitComponentResult> components;  // sorted by center
  double baseline = 0.0;
  double residual_norm = 0.0;
  bool converged = false;
  int iterations = 0;
};

// A Lorentzian of area A and half width gamma folded onto the one-sided
// frequency axis: L(f) + L(-f).
double lorentzian_folded(double f, double center_hz, double hwhm_hz, double area);

// Gradient of lorentzian_folded wrt (center, log hwhm, log area).
Eigen::Vector3d lorentzian_gradient(double f, double center_hz, double hwhm_hz, double area);

// Initial guess for 1, 2 or 3 components: the largest spectral maximum seeds
// the precessing peak, residual low-frequency mass seeds a zero-centered one.
FitModel default_init(const SpectrumRecord& spec, int n_components);

// Levenberg-Marquardt least squares, weighted by 1/stderr when available.
FitResult fit_spectrum(const SpectrumRecord& spec, const FitModel& init);

double power_fraction(const FitResult& fr, std::size_t component_index);
double power_fraction_err(const FitResult& fr, std::size_t component_index);

double correlation_time_from_hwhm(double gamma_hz);   // 1 / (2 pi gamma), s
double interaction_range(double tau_c, double vbar);  // v tau_c, m

}  // namespace snsim
