#include <doctest.h>

#include "tdie/constants.hpp"
#include "tdie/quadrature.hpp"
#include "tdie/special_functions.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <random>

using namespace tdie;
using BigFloat = boost::multiprecision::cpp_bin_float_50;

TEST_CASE("legendre: closed forms") {
  CHECK(legendre(0, 0.73) == 1.0);
  CHECK(legendre(1, -0.4) == -0.4);
  const double x = 0.5;
  CHECK(legendre(2, x) == doctest::Approx((3 * x * x - 1) / 2).epsilon(1e-15));
  CHECK(legendre(2, 0.5) == doctest::Approx(-0.125));
  CHECK(legendre(3, 0.3) == doctest::Approx((5 * 0.027 - 3 * 0.3) / 2).epsilon(1e-14));
  CHECK_THROWS_AS(legendre(-1, 0.2), std::invalid_argument);
}

TEST_CASE("legendre: parity and endpoint") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int l = 0; l <= 30; ++l) {
    CHECK(std::abs(legendre(l, 1.0) - 1.0) <= 1e-13);
    for (int trial = 0; trial < 20; ++trial) {
      const double x = u(rng);
      const double p = legendre(l, x);
      const double pm = legendre(l, -x);
      const double sign = (l % 2 == 0) ? 1.0 : -1.0;
      CHECK(std::abs(pm - sign * p) <= 1e-12 * std::max(1.0, std::abs(p)));
    }
  }
}

TEST_CASE("legendre: orthogonality under Gauss-Legendre quadrature") {
  const GaussRule& rule = gauss_legendre(40);
  for (int l = 0; l <= 20; ++l) {
    for (int m = 0; m <= 20; ++m) {
      double s = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        s += rule.weights[i] * legendre(l, rule.nodes[i]) * legendre(m, rule.nodes[i]);
      }
      const double expected = l == m ? 2.0 / (2 * l + 1) : 0.0;
      CHECK(std::abs(s - expected) <= 1e-10);
    }
  }
}

TEST_CASE("legendre: batch values, derivatives and integrals agree with scalar forms") {
  const int N = 12;
  std::vector<double> p(N + 1), dp(N + 1), q(N + 1);
  for (double x : {-1.0, -0.3, 0.0, 0.45, 1.0}) {
    legendre_all_with_derivative(x, std::span<double>(p), std::span<double>(dp));
    legendre_integral_all(x, std::span<double>(q));
    for (int l = 0; l <= N; ++l) {
      CHECK(p[l] == doctest::Approx(legendre(l, x)).epsilon(1e-14));
      // central difference derivative, one-sided at the endpoints
      const double h = 1e-6;
      const double a = std::max(-1.0, x - h), b = std::min(1.0, x + h);
      const double fd = (legendre(l, b) - legendre(l, a)) / (b - a);
      CHECK(dp[l] == doctest::Approx(fd).epsilon(1e-4).scale(1.0));
      // integral from -1 by high-order quadrature
      const double integral = integrate_gauss([&](double s) { return legendre(l, s); }, -1.0, x, 20);
      CHECK(q[l] == doctest::Approx(integral).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("spherical_bessel: trivial values") {
  CHECK(std::abs(spherical_bessel(0, kPi)) <= 1e-14);
  CHECK(spherical_bessel(1, 0.0) == 0.0);
  CHECK(spherical_bessel(0, 0.0) == 1.0);
  CHECK_THROWS_AS(spherical_bessel(2, -1.0), std::domain_error);
}

TEST_CASE("spherical_bessel: j_2(1) matches the extended-precision series") {
  const double oracle = static_cast<double>(spherical_bessel_series<BigFloat>(2, BigFloat(1)));
  CHECK(oracle == doctest::Approx(0.0620350520113738611).epsilon(1e-15));
  CHECK(spherical_bessel(2, 1.0) == doctest::Approx(oracle).epsilon(1e-14));
}

TEST_CASE("spherical_bessel: recurrence agrees with 50-digit ascending series") {
  // Relative 1e-10 away from zeros; near a zero the comparison falls back to an
  // absolute floor proportional to the local scale of j_l.
  for (int l = 0; l <= 25; ++l) {
    for (double z = 0.25; z <= 30.0; z += 0.75) {
      const double oracle = static_cast<double>(spherical_bessel_series<BigFloat>(l, BigFloat(z)));
      const double value = spherical_bessel(l, z);
      const double floor = 1e-13 / std::max(1.0, z);
      CHECK(std::abs(value - oracle) <= 1e-10 * std::abs(oracle) + floor);
    }
  }
}

TEST_CASE("spherical_neumann: closed forms") {
  const double z = 2.3;
  CHECK(spherical_neumann(0, z) == doctest::Approx(-std::cos(z) / z).epsilon(1e-15));
  CHECK(spherical_neumann(1, z) == doctest::Approx(-std::cos(z) / (z * z) - std::sin(z) / z).epsilon(1e-15));
  // Wronskian j_l y_{l-1} - j_{l-1} y_l = 1/z^2
  for (int l = 1; l <= 15; ++l) {
    const double w = spherical_bessel(l, z) * spherical_neumann(l - 1, z) -
                     spherical_bessel(l - 1, z) * spherical_neumann(l, z);
    CHECK(w == doctest::Approx(1.0 / (z * z)).epsilon(1e-9));
  }
}

TEST_CASE("bessel_envelope: edge cases") {
  CHECK(bessel_envelope(10, 10.0) == doctest::Approx(std::sqrt(kPi / 2)).epsilon(1e-15));
  CHECK_THROWS_AS(bessel_envelope(9, 10.0), std::domain_error);
  const double v = bessel_envelope(12, 10.0);
  CHECK(spherical_bessel(12, 10.0) <= v);
  CHECK(v == doctest::Approx(0.543726393800531625).epsilon(1e-13));
}

TEST_CASE("bessel_envelope: dominates j_l for l in [z, z+30]") {
  for (double z : {5.0, 10.0, 20.0}) {
    for (int l = static_cast<int>(z); l <= static_cast<int>(z) + 30; ++l) {
      CHECK(std::abs(spherical_bessel(l, z)) <= bessel_envelope(l, z));
    }
  }
}
