#pragma once

// Independent reference implementations used only by the tests.  Everything
// here is written against textbook formulas, not against the library code.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "snsim/rng.hpp"

namespace oracle {

using cd = std::complex<double>;

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M> by the Racah sum formula.
// Half-integer arguments are doubles; every factorial argument of a valid
// coupling is an integer.
inline double clebsch_gordan(double j1, double m1, double j2, double m2,
                             double J, double M) {
  if (std::abs(m1 + m2 - M) > 1e-9) return 0.0;
  auto fi = [](double x) {
    const long n = std::lround(x);
    if (n < 0) return -1.0;  // signals an invalid term
    return factorial(static_cast<int>(n));
  };
  const double f1 = fi(j1 + j2 - J), f2 = fi(j1 - j2 + J), f3 = fi(-j1 + j2 + J);
  const double f4 = fi(j1 + j2 + J + 1);
  double pref = (2 * J + 1) * f1 * f2 * f3 / f4;
  pref *= fi(J + M) * fi(J - M) * fi(j1 - m1) * fi(j1 + m1) * fi(j2 - m2) *
          fi(j2 + m2);
  pref = std::sqrt(pref);

  double sum = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double a1 = j1 + j2 - J - k;
    const double a2 = j1 - m1 - k;
    const double a3 = j2 + m2 - k;
    const double a4 = J - j2 + m1 + k;
    const double a5 = J - j1 - m2 + k;
    if (a1 < -1e-9 || a2 < -1e-9 || a3 < -1e-9 || a4 < -1e-9 || a5 < -1e-9) {
      if (a1 < -1e-9 || a2 < -1e-9 || a3 < -1e-9) break;
      continue;
    }
    const double denom =
        factorial(k) * fi(a1) * fi(a2) * fi(a3) * fi(a4) * fi(a5);
    sum += ((k % 2) ? -1.0 : 1.0) / denom;
  }
  return pref * sum;
}

// Kronecker product by the index formula, independent of the library loop.
inline Eigen::MatrixXcd kron_by_index(const Eigen::MatrixXcd& a,
                                      const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < out.rows(); ++i)
    for (long j = 0; j < out.cols(); ++j)
      out(i, j) = a(i / b.rows(), j / b.cols()) * b(i % b.rows(), j % b.cols());
  return out;
}

// Partial trace by explicit index sums over a (da x db) bipartite state.
inline Eigen::MatrixXcd ptrace_by_index(const Eigen::MatrixXcd& rho, int which,
                                        int da, int db) {
  if (which == 1) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(db, db);
    for (int i = 0; i < db; ++i)
      for (int j = 0; j < db; ++j)
        for (int k = 0; k < da; ++k) out(i, j) += rho(k * db + i, k * db + j);
    return out;
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(da, da);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      for (int k = 0; k < db; ++k) out(i, j) += rho(i * db + k, j * db + k);
  return out;
}

// Expectation value through a spectral decomposition.
inline double expect_by_eigen(const Eigen::MatrixXcd& rho,
                              const Eigen::MatrixXcd& obs) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  double out = 0.0;
  for (long k = 0; k < rho.rows(); ++k) {
    const Eigen::VectorXcd v = es.eigenvectors().col(k);
    out += es.eigenvalues()(k) * (v.adjoint() * obs * v)(0, 0).real();
  }
  return out;
}

// Free-space dyadic by finite differences of the scalar spherical wave:
// k0 G_ij(r) = (delta_ij + d_i d_j / k0^2) e^{i k0 |r|} / |r|.
inline Eigen::Matrix3cd green_by_fd(double k0, const Eigen::Vector3d& rv,
                                    double rel_step) {
  auto f = [k0](const Eigen::Vector3d& p) {
    const double rn = p.norm();
    return std::exp(cd(0.0, k0 * rn)) / rn;
  };
  const double h = rel_step * rv.norm();
  Eigen::Matrix3cd g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      cd d2;
      if (i == j) {
        Eigen::Vector3d e = Eigen::Vector3d::Zero();
        e(i) = h;
        d2 = (f(rv + e) - 2.0 * f(rv) + f(rv - e)) / (h * h);
      } else {
        Eigen::Vector3d ei = Eigen::Vector3d::Zero(), ej = Eigen::Vector3d::Zero();
        ei(i) = h;
        ej(j) = h;
        d2 = (f(rv + ei + ej) - f(rv + ei - ej) - f(rv - ei + ej) +
              f(rv - ei - ej)) /
             (4.0 * h * h);
      }
      g(i, j) = ((i == j ? f(rv) : cd(0.0)) + d2 / (k0 * k0)) / k0;
    }
  return g;
}

inline double gaussian(snsim::RngStream& rng) {
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * M_PI * u2);
}

// Ornstein-Uhlenbeck series with correlation time tau and unit stationary
// variance; its one-sided PSD is Lorentzian with HWHM 1/(2 pi tau).
inline std::vector<double> ou_series(snsim::RngStream& rng, size_t n, double dt,
                                     double tau) {
  const double a = std::exp(-dt / tau);
  const double b = std::sqrt(1.0 - a * a);
  std::vector<double> x(n);
  double v = gaussian(rng);
  for (size_t k = 0; k < n; ++k) {
    x[k] = v;
    v = a * v + b * gaussian(rng);
  }
  return x;
}

}  // namespace oracle
