#pragma once

#include "snsim/atom_model.hpp"

namespace snsim {

struct PairGeometry {
  double r = 0.0;          // separation (m)
  double cos_theta = 1.0;  // polar angle of the pair axis against z
  double phi = 0.0;
};

// Tensors in the spherical basis (sigma+, sigma-, pi); both are Hermitian.
struct CouplingTensors {
  Eigen::Matrix3cd zeta;         // coherent dipole-dipole coupling (rad/s)
  Eigen::Matrix3cd gamma_cross;  // cross-atom decay coefficients (rad/s)
  double gamma_self = 0.0;       // single-atom decay Gamma0 (rad/s)
};

struct DecayTable {
  double gamma_self = 0.0;
  Eigen::Matrix3cd gamma_cross;  // zero when collective decay is disabled
  bool collective = false;
};

// Dimensionless free-space dyadic G(r) = e^{ix}/x [(1 + i/x - 1/x^2) I
// + (-1 - 3i/x + 3/x^2) rr^T], x = k0 r.  Throws on r = 0.
Eigen::Matrix3cd green_tensor(double k0, const Eigen::Vector3d& r_vec);

Eigen::Vector3d pair_axis(const PairGeometry& g);

// zeta = -(3 Gamma0/4) E^dag Re(G) E,  gamma_cross = (3 Gamma0/2) E^dag Im(G) E,
// with E the Cartesian-to-spherical polarization matrix.
CouplingTensors coupling_coeffs(const PairGeometry& g, double k0, double gamma0);

// V_dd = sum_{ll'} zeta_{ll'} [ D+^l(1) D-^l'(2) + D+^l(2) D-^l'(1) ]
Mat build_vdd(const CouplingTensors& ct, const SingleAtomOps& ops);

DecayTable dissipator_coeffs(const CouplingTensors& ct, bool collective);

// 6x6 block matrix [[Gamma0 I, gc], [gc^dag, Gamma0 I]]; must be PSD.
Eigen::MatrixXcd decay_matrix(const CouplingTensors& ct);

}  // namespace snsim
