#include <cmath>

#include <doctest.h>

#include "oracles.hpp"
#include "snsim/dipole_coupling.hpp"
#include "snsim/errors.hpp"
#include "snsim/rng.hpp"

using namespace snsim;

namespace {

constexpr double k0_780 = 2 * pi / 780e-9;
constexpr double gamma0_rb = 2 * pi * 6.07e6;

PairGeometry random_geometry(RngStream& rng, double r_lo, double r_hi) {
  PairGeometry g;
  g.r = r_lo + (r_hi - r_lo) * rng.uniform();
  g.cos_theta = 2 * rng.uniform() - 1;
  g.phi = 2 * pi * rng.uniform();
  return g;
}

}  // namespace

TEST_SUITE("dipole_coupling") {
  TEST_CASE("dyadic matches the finite-difference scalar-wave oracle") {
    for (const double x : {0.5, 2.0, 10.0}) {
      const double r = x / k0_780;
      const Eigen::Vector3d rv =
          r * Eigen::Vector3d(0.36, -0.48, 0.8).normalized();
      const Eigen::Matrix3cd g = green_tensor(k0_780, rv);
      const Eigen::Matrix3cd g_fd = oracle::green_by_fd(k0_780, rv, 1e-3);
      const double scale = g.cwiseAbs().maxCoeff();
      CHECK((g - g_fd).cwiseAbs().maxCoeff() < 1e-4 * scale);
    }
  }

  TEST_CASE("dyadic structure: symmetric, scale invariant, rotation covariant") {
    RngStream rng(201);
    const Eigen::Vector3d rv(21e-9, -35e-9, 17e-9);
    const Eigen::Matrix3cd g = green_tensor(k0_780, rv);
    CHECK((g - g.transpose()).cwiseAbs().maxCoeff() < 1e-12 * g.cwiseAbs().maxCoeff());

    // G depends on the geometry only through x = k0 r and the direction
    const Eigen::Matrix3cd g2 = green_tensor(2 * k0_780, 0.5 * rv);
    CHECK((g - g2).cwiseAbs().maxCoeff() < 1e-12 * g.cwiseAbs().maxCoeff());

    const Eigen::Matrix3d rot =
        Eigen::AngleAxisd(1.1, Eigen::Vector3d(1, 2, -1).normalized()).toRotationMatrix();
    const Eigen::Matrix3cd gr = green_tensor(k0_780, rot * rv);
    const Eigen::Matrix3cd rgr = rot.cast<cd>() * g * rot.transpose().cast<cd>();
    CHECK((gr - rgr).cwiseAbs().maxCoeff() < 1e-10 * g.cwiseAbs().maxCoeff());
  }

  TEST_CASE("near field: Im G is isotropic 2/3 and Re G_xx goes as -1/x^3") {
    const double x = 1e-3;
    const Eigen::Vector3d rv(0, 0, x / k0_780);
    const Eigen::Matrix3cd g = green_tensor(k0_780, rv);
    CHECK(g(0, 0).imag() == doctest::Approx(0.6666665333323181).epsilon(1e-10));
    CHECK(g(1, 1).imag() == doctest::Approx(2.0 / 3.0).epsilon(1e-5));
    CHECK(g(2, 2).imag() == doctest::Approx(2.0 / 3.0).epsilon(1e-5));
    CHECK(g(0, 0).real() * x * x * x == doctest::Approx(-1.0).epsilon(1e-5));
    CHECK(g(0, 1).imag() == doctest::Approx(0.0).epsilon(1e-9));
  }

  TEST_CASE("far field: transverse 1/x, longitudinal 1/x^2") {
    const double x = 1e3;
    const Eigen::Vector3d rv(0, 0, x / k0_780);
    const Eigen::Matrix3cd g = green_tensor(k0_780, rv);
    CHECK(std::abs(g(0, 0)) * x == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(std::abs(g(2, 2)) < 3.0 / (x * x));
  }

  TEST_CASE("dyadic rejects degenerate input") {
    CHECK_THROWS_AS((void)green_tensor(k0_780, Eigen::Vector3d::Zero()), ConfigError);
    CHECK_THROWS_AS((void)green_tensor(0.0, Eigen::Vector3d(1e-9, 0, 0)), ConfigError);
  }

  TEST_CASE("pair axis from angles") {
    PairGeometry g;
    g.r = 1e-8;
    g.cos_theta = 0.3;
    g.phi = 1.2;
    const Eigen::Vector3d n = pair_axis(g);
    CHECK(n.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(n(2) == doctest::Approx(0.3).epsilon(1e-14));
  }

  TEST_CASE("coupling strength at x = 0.2417 matches the frozen value") {
    PairGeometry g;
    g.r = 0.2417 / k0_780;
    g.cos_theta = 1.0;
    g.phi = 0.0;
    const CouplingTensors ct = coupling_coeffs(g, k0_780, gamma0_rb);
    CHECK(ct.zeta(0, 0).real() / gamma0_rb ==
          doctest::Approx(51.632828742015285).epsilon(1e-9));
    CHECK(ct.zeta(1, 1).real() ==
          doctest::Approx(ct.zeta(0, 0).real()).epsilon(1e-12));
    CHECK(ct.gamma_self == gamma0_rb);
    // axis along z keeps the spherical basis diagonal
    CHECK(std::abs(ct.zeta(0, 1)) < 1e-9 * std::abs(ct.zeta(0, 0)));
    CHECK(std::abs(ct.zeta(0, 2)) < 1e-9 * std::abs(ct.zeta(0, 0)));
  }

  TEST_CASE("cross decay approaches Gamma0 in every channel as r -> 0") {
    PairGeometry g;
    g.r = 1e-3 / k0_780;
    g.cos_theta = 0.41;
    g.phi = 2.2;
    const CouplingTensors ct = coupling_coeffs(g, k0_780, gamma0_rb);
    for (int l = 0; l < 3; ++l)
      CHECK(ct.gamma_cross(l, l).real() / gamma0_rb ==
            doctest::Approx(1.0).epsilon(1e-5));
  }

  TEST_CASE("coupling tensors are Hermitian for random geometries") {
    RngStream rng(202);
    for (int it = 0; it < 50; ++it) {
      const PairGeometry g = random_geometry(rng, 15e-9, 400e-9);
      const CouplingTensors ct = coupling_coeffs(g, k0_780, gamma0_rb);
      const double zs = std::max(1.0, ct.zeta.cwiseAbs().maxCoeff());
      const double gs = std::max(1.0, ct.gamma_cross.cwiseAbs().maxCoeff());
      CHECK((ct.zeta - ct.zeta.adjoint()).cwiseAbs().maxCoeff() < 1e-10 * zs);
      CHECK((ct.gamma_cross - ct.gamma_cross.adjoint()).cwiseAbs().maxCoeff() <
            1e-10 * gs);
    }
  }

  TEST_CASE("pair coupling operator is Hermitian and one-excitation only") {
    RngStream rng(203);
    const SingleAtomOps& ops = single_atom_ops();
    for (int it = 0; it < 20; ++it) {
      const PairGeometry g = random_geometry(rng, 18e-9, 200e-9);
      const CouplingTensors ct = coupling_coeffs(g, k0_780, gamma0_rb);
      const Mat v = build_vdd(ct, ops);
      CHECK(is_hermitian(v, 1e-10));

      // excitation count per pair index: 4*a1 + a2, excited means a >= 2
      auto nexc = [](int b) { return (b / 4 >= 2 ? 1 : 0) + (b % 4 >= 2 ? 1 : 0); };
      for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 16; ++c)
          if (!(nexc(r) == 1 && nexc(c) == 1)) CHECK(v(r, c) == cd(0.0));
    }
  }

  TEST_CASE("decay matrix is positive semidefinite across geometries") {
    RngStream rng(204);
    double min_eig = 1e300;
    for (int it = 0; it < 2000; ++it) {
      const PairGeometry g = random_geometry(rng, 10e-9, 2e-6);
      const CouplingTensors ct = coupling_coeffs(g, k0_780, gamma0_rb);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(decay_matrix(ct));
      min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
    }
    CHECK(min_eig > -1e-8 * gamma0_rb);
  }

  TEST_CASE("decay matrix at contact splits into 2 Gamma0 and 0") {
    PairGeometry g;
    g.r = 1e-4 / k0_780;
    g.cos_theta = -0.2;
    g.phi = 0.7;
    const CouplingTensors ct = coupling_coeffs(g, k0_780, gamma0_rb);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(decay_matrix(ct));
    for (int k = 0; k < 3; ++k)
      CHECK(es.eigenvalues()(k) / gamma0_rb == doctest::Approx(0.0).epsilon(1e-3));
    for (int k = 3; k < 6; ++k)
      CHECK(es.eigenvalues()(k) / gamma0_rb == doctest::Approx(2.0).epsilon(1e-3));
  }

  TEST_CASE("collective toggle empties the cross block") {
    PairGeometry g;
    g.r = 40e-9;
    g.cos_theta = 0.5;
    g.phi = 0.0;
    const CouplingTensors ct = coupling_coeffs(g, k0_780, gamma0_rb);
    const DecayTable on = dissipator_coeffs(ct, true);
    const DecayTable off = dissipator_coeffs(ct, false);
    CHECK(on.collective);
    CHECK(on.gamma_cross.cwiseAbs().maxCoeff() > 0.0);
    CHECK_FALSE(off.collective);
    CHECK(off.gamma_cross.cwiseAbs().maxCoeff() == 0.0);
    CHECK(on.gamma_self == gamma0_rb);
    CHECK(off.gamma_self == gamma0_rb);
  }
}
