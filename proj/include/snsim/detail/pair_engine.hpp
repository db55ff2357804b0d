#pragma once

#include <vector>

#include "snsim/dipole_coupling.hpp"
#include "snsim/dynamics.hpp"

namespace snsim::detail {

using Mat16 = Eigen::Matrix<cd, 16, 16, Eigen::RowMajor>;

// Fixed-size integrator core for one atom pair.  The right-hand side is
// evaluated as
//     rhs(rho) = A + A^dag + sum_j c_j L_j rho M_j^dag
// with A = -i H_eff rho and H_eff = H - (i/2) sum gamma L^dag L, valid for
// Hermitian rho (every rhs output is Hermitian, so RK4 stages stay in the
// Hermitian subspace).  Both pieces run through precomputed sparse entry
// lists; the operator patterns are geometry independent and built once from
// the lifted single-atom operators.
class PairEngine {
 public:
  struct HeffEntry {
    int r, k;
    cd v;  // premultiplied by -i
  };
  struct SandEntry {
    int rc, kl;  // flattened row-major indices into 16x16
    cd v;
  };

  // Run-level setup: drive Hamiltonian for both atoms plus toggles.
  void set_run(const Mat& h0_pair, double gamma0, bool ddi, bool collective,
               double base_dt, double drive_scale);

  // Per-segment setup; rebuilds the entry lists and the local step.
  // Verifies Hermiticity of the coherent coupling on every call.
  void set_geometry(const CouplingTensors& ct);

  void rhs(const Mat16& rho, Mat16& out) const;
  void step(Mat16& rho, double dt);

  double dt_local() const { return dt_local_; }
  int refine_depth() const { return refine_depth_; }
  static constexpr int kMaxRefineDepth = 40;

 private:
  Mat16 h0_pair_ = Mat16::Zero();
  double gamma0_ = 0.0;
  bool ddi_ = true, collective_ = true;
  double base_dt_ = 0.0, drive_scale_ = 0.0;
  double dt_local_ = 0.0;
  int refine_depth_ = 0;

  std::vector<HeffEntry> heff_;
  std::vector<SandEntry> sand_;
  Mat16 k1_, k2_, k3_, k4_, tmp_;
  mutable Mat16 a_;
};

}  // namespace snsim::detail
