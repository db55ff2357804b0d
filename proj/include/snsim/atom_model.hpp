#pragma once

#include <array>

#include "snsim/operators.hpp"

namespace snsim {

// Basis order for the four-level atom: [g-1/2, g+1/2, e-1/2, e+1/2].
enum BasisIndex { g_minus = 0, g_plus = 1, e_minus = 2, e_plus = 3 };

// Spherical dipole components.
enum Pol { pol_sigma_plus = 0, pol_sigma_minus = 1, pol_pi = 2 };

struct SingleAtomOps {
  std::array<Mat, 3> dplus;   // raising dipole operators D+^lambda (dimensionless)
  std::array<Mat, 3> dminus;  // dminus[l] = dagger(dplus[l])
  Mat sz;                     // ground pseudo-spin s_z, zero on the excited manifold
  Mat ground_proj;
  Mat excited_proj;
};

struct DriveParams {
  double omega = 0.0;   // Rabi angular frequency of each sigma leg (rad/s)
  double delta = 0.0;   // drive detuning (rad/s)
  double larmor = 0.0;  // ground-state Larmor angular frequency (rad/s)
};

SingleAtomOps build_single_atom_ops();
const SingleAtomOps& single_atom_ops();  // cached shared instance

// Single-atom Hamiltonian in the rotating frame (rad/s).
Mat build_h0(const DriveParams& p, bool excited_zeeman = false);

// Embed a 4x4 operator on atom `which` (1 or 2) into the 16-dim pair space.
Mat lift_to_pair(const Mat& op, int which);

// S_z = s_z(1) + s_z(2) on the pair space.
Mat build_sz_total();

}  // namespace snsim
