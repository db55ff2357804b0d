#include <cmath>

#include <doctest.h>

#include "snsim/errors.hpp"
#include "snsim/geometry.hpp"
#include "snsim/operators.hpp"
#include "snsim/vapor.hpp"

using namespace snsim;

TEST_SUITE("vapor") {
  TEST_CASE("saturated density against independently evaluated points") {
    // reference values computed separately from the same published
    // correlation (Nesmeyanov), frozen here
    CHECK(density_from_temperature(363.0) ==
          doctest::Approx(2.4232769477671854e18).epsilon(1e-10));
    CHECK(density_from_temperature(453.0) ==
          doctest::Approx(3.4072318541135204e20).epsilon(1e-10));
    CHECK(density_from_temperature(348.15) ==
          doctest::Approx(8.2384392575986445e17).epsilon(1e-10));
    CHECK(density_from_temperature(427.0) ==
          doctest::Approx(1.0250831647377549e20).epsilon(1e-10));
  }

  TEST_CASE("density grows monotonically with temperature") {
    double prev = density_from_temperature(300.0);
    for (double t = 302.0; t <= 500.0; t += 2.0) {
      const double n = density_from_temperature(t);
      CHECK(n > prev);
      prev = n;
    }
  }

  TEST_CASE("validity range is enforced") {
    CHECK_THROWS_AS((void)density_from_temperature(299.9), ConfigError);
    CHECK_THROWS_AS((void)density_from_temperature(500.1), ConfigError);
    CHECK_NOTHROW((void)density_from_temperature(300.0));
    CHECK_NOTHROW((void)density_from_temperature(500.0));
  }

  TEST_CASE("thermal speed") {
    CHECK(thermal_velocity(448.0, consts::rb85_mass) ==
          doctest::Approx(362.771139797323).epsilon(1e-12));
    CHECK(thermal_velocity(363.0, consts::rb85_mass) ==
          doctest::Approx(326.548005155947).epsilon(1e-12));
    CHECK_THROWS_AS((void)thermal_velocity(-1.0, consts::rb85_mass), ConfigError);
    CHECK_THROWS_AS((void)thermal_velocity(300.0, 0.0), ConfigError);
  }

  TEST_CASE("transit rate through the probe beam") {
    const double vbar = thermal_velocity(363.0, consts::rb85_mass);
    CHECK(transit_rate_hz(vbar, 0.3e-3) ==
          doctest::Approx(173239.097257889).epsilon(1e-12));
  }

  TEST_CASE("spin-exchange rate") {
    CHECK(spin_exchange_rate_hz(1e20, 350.0) ==
          doctest::Approx(4456.33840657307).epsilon(1e-12));
    // linear in density
    CHECK(spin_exchange_rate_hz(2e20, 350.0) ==
          doctest::Approx(2 * 4456.33840657307).epsilon(1e-12));
  }

  TEST_CASE("off-resonant excitation rate") {
    const double g = 2 * pi * 6.07e6;
    CHECK(excitation_rate_hz(g, 2 * pi * 150e6, 2 * pi * 1.5e9) ==
          doctest::Approx(60099.0099009901).epsilon(1e-12));
    CHECK(excitation_rate_hz(g, 0.0, 2 * pi * 1.5e9) == 0.0);
    // on resonance the estimate saturates at gamma / 2 pi
    CHECK(excitation_rate_hz(g, 2 * pi * 150e6, 0.0) ==
          doctest::Approx(g / (2 * pi)).epsilon(1e-12));
  }

  TEST_CASE("mean interatomic distance crosses the reduced wavelength near 154 C") {
    const double lambda_bar = 780e-9 / (2 * pi);
    const double n_427 = density_from_temperature(427.15);
    CHECK(mean_nn_distance(n_427) ==
          doctest::Approx(1.1807487070658378e-07).epsilon(1e-10));
    CHECK(mean_nn_distance(n_427) < lambda_bar);
    CHECK(mean_nn_distance(density_from_temperature(415.0)) > lambda_bar);
  }
}
