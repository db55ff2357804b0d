#include "snsim/dipole_coupling.hpp"

#include <cmath>

namespace snsim {

Eigen::Matrix3cd green_tensor(double k0, const Eigen::Vector3d& r_vec) {
  const double r = r_vec.norm();
  if (!(r > 0.0)) throw ConfigError("separation must be positive", "green_tensor");
  if (!(k0 > 0.0)) throw ConfigError("wavenumber must be positive", "k0_rad_m");
  const double x = k0 * r;
  const Eigen::Vector3d n = r_vec / r;
  const cd i(0.0, 1.0);
  const cd pref = std::exp(i * x) / x;
  const cd ca = 1.0 + i / x - 1.0 / (x * x);
  const cd cb = -1.0 - 3.0 * i / x + 3.0 / (x * x);
  Eigen::Matrix3cd g = pref * ca * Eigen::Matrix3cd::Identity();
  g += pref * cb * (n * n.transpose()).cast<cd>();
  return g;
}

Eigen::Vector3d pair_axis(const PairGeometry& g) {
  const double st = std::sqrt(std::max(0.0, 1.0 - g.cos_theta * g.cos_theta));
  return {st * std::cos(g.phi), st * std::sin(g.phi), g.cos_theta};
}

namespace {
// Columns: spherical unit vectors e_{sigma+}, e_{sigma-}, e_pi in Cartesian.
Eigen::Matrix3cd spherical_basis() {
  const double s = 1.0 / std::sqrt(2.0);
  const cd i(0.0, 1.0);
  Eigen::Matrix3cd e = Eigen::Matrix3cd::Zero();
  e(0, pol_sigma_plus) = -s;
  e(1, pol_sigma_plus) = -i * s;
  e(0, pol_sigma_minus) = s;
  e(1, pol_sigma_minus) = -i * s;
  e(2, pol_pi) = 1.0;
  return e;
}
}  // namespace

CouplingTensors coupling_coeffs(const PairGeometry& g, double k0, double gamma0) {
  static const Eigen::Matrix3cd e = spherical_basis();
  const Eigen::Matrix3cd gt = green_tensor(k0, g.r * pair_axis(g));
  CouplingTensors ct;
  ct.zeta = -0.75 * gamma0 * (e.adjoint() * gt.real().cast<cd>() * e);
  ct.gamma_cross = 1.5 * gamma0 * (e.adjoint() * gt.imag().cast<cd>() * e);
  ct.gamma_self = gamma0;
  return ct;
}

Mat build_vdd(const CouplingTensors& ct, const SingleAtomOps& ops) {
  Mat v = Mat::Zero(16, 16);
  for (int l = 0; l < 3; ++l) {
    for (int lp = 0; lp < 3; ++lp) {
      const cd z = ct.zeta(l, lp);
      if (z == cd(0.0, 0.0)) continue;
      v += z * (lift_to_pair(ops.dplus[l], 1) * lift_to_pair(ops.dminus[lp], 2) +
                lift_to_pair(ops.dplus[l], 2) * lift_to_pair(ops.dminus[lp], 1));
    }
  }
  return v;
}

DecayTable dissipator_coeffs(const CouplingTensors& ct, bool collective) {
  DecayTable t;
  t.gamma_self = ct.gamma_self;
  t.gamma_cross = collective ? ct.gamma_cross : Eigen::Matrix3cd::Zero().eval();
  t.collective = collective;
  return t;
}

Eigen::MatrixXcd decay_matrix(const CouplingTensors& ct) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(6, 6);
  m.topLeftCorner(3, 3) = ct.gamma_self * Eigen::Matrix3cd::Identity();
  m.bottomRightCorner(3, 3) = ct.gamma_self * Eigen::Matrix3cd::Identity();
  m.topRightCorner(3, 3) = ct.gamma_cross;
  m.bottomLeftCorner(3, 3) = ct.gamma_cross.adjoint();
  return m;
}

}  // namespace snsim
