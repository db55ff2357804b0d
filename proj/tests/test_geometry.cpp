#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "snsim/errors.hpp"
#include "snsim/geometry.hpp"
#include "snsim/operators.hpp"

using namespace snsim;

TEST_SUITE("geometry") {
  TEST_CASE("inverse transform inverts the nearest-neighbour CDF") {
    const double density = 1e20;
    for (const double u : {1e-6, 0.01, 0.25, 0.5, 0.9, 0.999}) {
      const double r = nn_distance_from_uniform(u, density);
      const double cdf = -std::expm1(-(4.0 / 3.0) * pi * density * r * r * r);
      CHECK(cdf == doctest::Approx(u).epsilon(1e-12));
    }
    // u = 1 - exp(-1) lands exactly on the 3/(4 pi N) shell
    const double r1 = nn_distance_from_uniform(-std::expm1(-1.0), density);
    CHECK(r1 == doctest::Approx(std::cbrt(3.0 / (4.0 * pi * density))).epsilon(1e-12));
  }

  TEST_CASE("closed-form mean and truncated mass match frozen values") {
    CHECK(mean_nn_distance(1e20) ==
          doctest::Approx(1.1934712406094705e-07).epsilon(1e-12));
    CHECK(truncated_mass(1e20, 20e-9) ==
          doctest::Approx(0.003345423721986313).epsilon(1e-10));
    CHECK(truncated_mass(4e20, 20e-9) ==
          doctest::Approx(0.013314693369463889).epsilon(1e-10));
  }

  TEST_CASE("sampled distances reproduce mean and median") {
    RngStream rng(301);
    const double density = 1e20;
    const int n = 20000;
    std::vector<double> rs(n);
    double mean = 0.0;
    for (int i = 0; i < n; ++i) {
      rs[i] = sample_nn_distance(density, 1e-12, rng);
      mean += rs[i];
    }
    mean /= n;
    std::nth_element(rs.begin(), rs.begin() + n / 2, rs.end());
    const double median = rs[n / 2];
    CHECK(mean == doctest::Approx(1.1934712406094705e-07).epsilon(0.02));
    CHECK(median == doctest::Approx(1.1828026365124943e-07).epsilon(0.02));
  }

  TEST_CASE("rejection respects the minimum separation") {
    RngStream rng(302);
    const double density = 1e20;
    const double r_min = mean_nn_distance(density);
    for (int i = 0; i < 3000; ++i)
      CHECK(sample_nn_distance(density, r_min, rng) >= r_min);
  }

  TEST_CASE("rejection stalls below an unreachable cutoff") {
    RngStream rng(303);
    CHECK_THROWS_AS((void)sample_nn_distance(3e24, 2e-8, rng), NumericalError);
  }

  TEST_CASE("sphere mode draws an isotropic axis") {
    RngStream rng(304);
    const int n = 20000;
    double mean_c = 0.0, mean_c2 = 0.0, mean_phi = 0.0;
    for (int i = 0; i < n; ++i) {
      double c, phi;
      sample_orientation(rng, AngleMode::sphere, c, phi);
      CHECK(c >= -1.0);
      CHECK(c <= 1.0);
      CHECK(phi >= 0.0);
      CHECK(phi < 2 * pi);
      mean_c += c;
      mean_c2 += c * c;
      mean_phi += phi;
    }
    mean_c /= n;
    mean_c2 /= n;
    mean_phi /= n;
    CHECK(mean_c == doctest::Approx(0.0).epsilon(0.02));
    CHECK(mean_c2 == doctest::Approx(1.0 / 3.0).epsilon(0.05));
    CHECK(mean_phi == doctest::Approx(pi).epsilon(0.03));
  }

  TEST_CASE("uniform-theta mode is pole heavy") {
    RngStream rng(305);
    const int n = 20000;
    double mean_c = 0.0, mean_c2 = 0.0;
    for (int i = 0; i < n; ++i) {
      double c, phi;
      sample_orientation(rng, AngleMode::uniform_theta, c, phi);
      mean_c += c;
      mean_c2 += c * c;
    }
    mean_c /= n;
    mean_c2 /= n;
    CHECK(mean_c == doctest::Approx(0.0).epsilon(0.02));
    // E[cos^2] = 1/2 for theta uniform on [0, pi], against 1/3 for the sphere
    CHECK(mean_c2 == doctest::Approx(0.5).epsilon(0.05));
  }

  TEST_CASE("streams are deterministic and independent") {
    RngStream a(42, 7), b(42, 7), c(42, 8);
    bool all_equal = true, any_equal_to_c = false;
    for (int i = 0; i < 100; ++i) {
      const double ua = a.uniform(), ub = b.uniform(), uc = c.uniform();
      all_equal = all_equal && (ua == ub);
      any_equal_to_c = any_equal_to_c || (ua == uc);
    }
    CHECK(all_equal);
    CHECK_FALSE(any_equal_to_c);
  }

  TEST_CASE("uniform and exponential draws have the right moments") {
    RngStream rng(306);
    const int n = 50000;
    double mu = 0.0;
    for (int i = 0; i < n; ++i) {
      const double u = rng.uniform();
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
      mu += u;
    }
    CHECK(mu / n == doctest::Approx(0.5).epsilon(0.01));

    double me = 0.0;
    for (int i = 0; i < n; ++i) me += rng.exponential(2.5e-6);
    CHECK(me / n == doctest::Approx(2.5e-6).epsilon(0.02));
  }
}
