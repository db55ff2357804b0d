#include "snsim/atom_model.hpp"

#include <cmath>

namespace snsim {

SingleAtomOps build_single_atom_ops() {
  SingleAtomOps o;
  const double w_sigma = std::sqrt(2.0 / 3.0);
  const double w_pi = std::sqrt(1.0 / 3.0);

  for (auto& m : o.dplus) m = Mat::Zero(4, 4);
  o.dplus[pol_sigma_plus](e_plus, g_minus) = w_sigma;
  o.dplus[pol_sigma_minus](e_minus, g_plus) = w_sigma;
  o.dplus[pol_pi](e_minus, g_minus) = w_pi;
  o.dplus[pol_pi](e_plus, g_plus) = -w_pi;
  for (int l = 0; l < 3; ++l) o.dminus[l] = dagger(o.dplus[l]);

  o.sz = Mat::Zero(4, 4);
  o.sz(g_minus, g_minus) = -0.5;
  o.sz(g_plus, g_plus) = 0.5;

  o.ground_proj = Mat::Zero(4, 4);
  o.ground_proj(g_minus, g_minus) = o.ground_proj(g_plus, g_plus) = 1.0;
  o.excited_proj = Mat::Identity(4, 4) - o.ground_proj;
  return o;
}

const SingleAtomOps& single_atom_ops() {
  static const SingleAtomOps ops = build_single_atom_ops();
  return ops;
}

Mat build_h0(const DriveParams& p, bool excited_zeeman) {
  if (p.omega < 0) throw ConfigError("Rabi frequency must be >= 0", "omega_rad_s");
  Mat h = Mat::Zero(4, 4);
  h(e_minus, e_minus) = h(e_plus, e_plus) = -p.delta;
  // sigma+ leg couples g-1/2 to e+1/2, sigma- leg couples g+1/2 to e-1/2
  h(e_plus, g_minus) = h(g_minus, e_plus) = 0.5 * p.omega;
  h(e_minus, g_plus) = h(g_plus, e_minus) = 0.5 * p.omega;
  // transverse field: (omega_L/2) sigma_x on the ground doublet
  h(g_plus, g_minus) = h(g_minus, g_plus) = 0.5 * p.larmor;
  if (excited_zeeman) h(e_plus, e_minus) = h(e_minus, e_plus) = 0.5 * p.larmor;
  return h;
}

Mat lift_to_pair(const Mat& op, int which) {
  if (op.rows() != 4 || op.cols() != 4)
    throw ConfigError("single-atom operator must be 4x4", "lift_to_pair");
  static const Mat id4 = Mat::Identity(4, 4);
  if (which == 1) return kron(op, id4);
  if (which == 2) return kron(id4, op);
  throw ConfigError("atom index must be 1 or 2", "lift_to_pair");
}

Mat build_sz_total() {
  const auto& ops = single_atom_ops();
  return lift_to_pair(ops.sz, 1) + lift_to_pair(ops.sz, 2);
}

}  // namespace snsim
