#include <doctest.h>

#include "oracles.hpp"
#include "snsim/errors.hpp"
#include "snsim/operators.hpp"
#include "snsim/rng.hpp"

using namespace snsim;

namespace {

Mat random_complex(int rows, int cols, RngStream& rng) {
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      m(i, j) = cd(2 * rng.uniform() - 1, 2 * rng.uniform() - 1);
  return m;
}

Mat random_density(int n, RngStream& rng) {
  const Mat a = random_complex(n, n, rng);
  Mat rho = a * a.adjoint();
  rho /= rho.trace();
  return rho;
}

}  // namespace

TEST_SUITE("operators") {
  TEST_CASE("kron matches the index-formula oracle") {
    RngStream rng(101);
    const Mat a = random_complex(4, 4, rng);
    const Mat b = random_complex(4, 4, rng);
    CHECK((kron(a, b) - oracle::kron_by_index(a, b)).cwiseAbs().maxCoeff() == 0.0);

    const Mat c = random_complex(2, 3, rng);
    const Mat d = random_complex(3, 2, rng);
    CHECK((kron(c, d) - oracle::kron_by_index(c, d)).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("kron of identities is the identity") {
    const Mat i2 = Mat::Identity(2, 2), i3 = Mat::Identity(3, 3);
    CHECK((kron(i2, i3) - Mat::Identity(6, 6)).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("kron mixed-product rule") {
    RngStream rng(102);
    const Mat a = random_complex(3, 3, rng), b = random_complex(2, 2, rng);
    const Mat c = random_complex(3, 3, rng), d = random_complex(2, 2, rng);
    const Mat lhs = kron(a, b) * kron(c, d);
    const Mat rhs = kron(a * c, b * d);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);
  }

  TEST_CASE("dagger, commutator, anticommutator") {
    RngStream rng(103);
    const Mat a = random_complex(4, 4, rng), b = random_complex(4, 4, rng);
    CHECK((dagger(a) - Mat(a.adjoint())).cwiseAbs().maxCoeff() == 0.0);
    CHECK((commutator(a, b) - (a * b - b * a)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((anticommutator(a, b) - (a * b + b * a)).cwiseAbs().maxCoeff() == 0.0);
    // [A,B]^dag = [B^dag, A^dag]
    CHECK((dagger(commutator(a, b)) - commutator(dagger(b), dagger(a)))
              .cwiseAbs()
              .maxCoeff() < 1e-14);
  }

  TEST_CASE("expect agrees with a spectral-decomposition oracle") {
    RngStream rng(104);
    const Mat rho = random_density(6, rng);
    Mat obs = random_complex(6, 6, rng);
    obs = Mat(0.5 * (obs + obs.adjoint()));
    CHECK(expect(rho, obs) == doctest::Approx(oracle::expect_by_eigen(rho, obs)).epsilon(1e-12));
  }

  TEST_CASE("expect rejects mismatched dimensions") {
    const Mat a = Mat::Identity(4, 4), b = Mat::Identity(3, 3);
    CHECK_THROWS_AS((void)expect(a, b), ConfigError);
  }

  TEST_CASE("hermiticity test and projection") {
    RngStream rng(105);
    Mat a = random_complex(5, 5, rng);
    CHECK_FALSE(is_hermitian(a));
    const Mat sym = 0.5 * (a + Mat(a.adjoint()));
    CHECK(is_hermitian(sym));

    Mat h = a;
    hermitize(h);
    CHECK(is_hermitian(h));
    CHECK((h - sym).cwiseAbs().maxCoeff() < 1e-15);
    const Mat h2 = h;
    hermitize(h);
    CHECK((h - h2).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("partial trace reduces product states to their factors") {
    RngStream rng(106);
    const Mat ra = random_density(4, rng);
    const Mat rb = random_density(4, rng);
    const Mat rho = kron(ra, rb);
    CHECK((partial_trace(rho, 1, 4, 4) - rb).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((partial_trace(rho, 2, 4, 4) - ra).cwiseAbs().maxCoeff() < 1e-14);
  }

  TEST_CASE("partial trace matches the index oracle on entangled states") {
    RngStream rng(107);
    const Mat rho = random_density(12, rng);  // 3 x 4 bipartition
    const Mat t1 = partial_trace(rho, 1, 3, 4);
    const Mat t2 = partial_trace(rho, 2, 3, 4);
    CHECK((t1 - oracle::ptrace_by_index(rho, 1, 3, 4)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((t2 - oracle::ptrace_by_index(rho, 2, 3, 4)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(t1.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t2.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("partial trace rejects a bad subsystem tag") {
    const Mat rho = Mat::Identity(16, 16) / 16.0;
    CHECK_THROWS_AS((void)partial_trace(rho, 3, 4, 4), ConfigError);
  }
}
