#include <doctest.h>

#include "tdie/constants.hpp"
#include "tdie/mie.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <complex>
#include <stdexcept>

using namespace tdie;
using cplx = std::complex<double>;

namespace {

double wavenumber(double f) { return 2.0 * kPi * f / kSpeedOfLight; }

double freq_for(double ka, double a) { return ka * kSpeedOfLight / (2.0 * kPi * a); }

// Backscatter and forward amplitudes from boost's spherical Bessel functions, with
// derivatives from the d/dx [x f_n] = x f_{n-1} - n f_n identity.
cplx boost_backscatter_sum(double x, int n_max) {
  cplx sum = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const double j = boost::math::sph_bessel(n, x), jm = boost::math::sph_bessel(n - 1, x);
    const double y = boost::math::sph_neumann(n, x), ym = boost::math::sph_neumann(n - 1, x);
    const cplx h(j, y), hm(jm, ym);
    const cplx a = (x * jm - n * j) / (x * hm - static_cast<double>(n) * h);
    const cplx b = j / h;
    sum += (2.0 * n + 1.0) * (n % 2 ? -1.0 : 1.0) * (a - b);
  }
  return sum;
}

}  // namespace

TEST_CASE("mie: term count") {
  CHECK(mie_terms(1.0) == 7);
  CHECK(mie_terms(20.0) == static_cast<int>(std::ceil(22.0 + 4.0 * std::cbrt(20.0))));
}

TEST_CASE("mie: backscatter agrees with an independent Bessel implementation") {
  for (double x : {0.3, 1.0, 2.7, 8.0}) {
    const int n = mie_terms(x) + 10;
    const double ref = std::norm(boost_backscatter_sum(x, n)) / (x * x);
    CHECK(mie_efficiencies(x, 10).backscatter == doctest::Approx(ref).epsilon(1e-10));
    // |r E| at theta = pi is |S(pi)|/k and sigma = 4 pi |r E|^2
    const double a = 0.8;
    const double f = freq_for(x, a);
    const auto r = mie_far_field(a, f, kPi, 0.0, 10);
    const double sigma = 4.0 * kPi * std::pow(r.magnitude(), 2);
    CHECK(sigma / (kPi * a * a) == doctest::Approx(ref).epsilon(1e-10));
  }
}

TEST_CASE("mie: Rayleigh limit") {
  for (double x : {0.01, 0.02, 0.05}) {
    const double q = mie_efficiencies(x).backscatter;
    CHECK(q == doctest::Approx(9.0 * std::pow(x, 4)).epsilon(5 * x * x));
  }
}

TEST_CASE("mie: optical limit of backscatter") {
  CHECK(mie_efficiencies(20.0).backscatter == doctest::Approx(1.0).epsilon(0.1));
  CHECK(mie_efficiencies(60.0).backscatter == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("mie: extinction equals scattering and matches the optical theorem") {
  for (double x : {0.2, 1.0, 3.3, 12.0}) {
    const auto e = mie_efficiencies(x);
    CHECK(e.extinction == doctest::Approx(e.scattering).epsilon(1e-10));
    // Q_ext = 4/x^2 Re S(0); on the E-plane S(0) = i k r E_theta
    const double a = 1.0, f = freq_for(x, a);
    const auto r = mie_far_field(a, f, 0.0, 0.0);
    const cplx S0 = -cplx(0.0, 1.0) * wavenumber(f) * r.E_theta;
    CHECK(4.0 / (x * x) * S0.real() == doctest::Approx(e.extinction).epsilon(1e-10));
  }
}

TEST_CASE("mie: scale invariance in ka") {
  for (double theta : {0.0, 0.7, 1.9, kPi}) {
    const auto r1 = mie_far_field(1.0, 50e6, theta, 0.3);
    const auto r2 = mie_far_field(2.0, 25e6, theta, 0.3);
    // r E / a depends only on ka
    CHECK(std::abs(r2.E_theta / 2.0 - r1.E_theta) <= 1e-12 * std::abs(r1.E_theta) + 1e-15);
    CHECK(std::abs(r2.E_phi / 2.0 - r1.E_phi) <= 1e-12 * std::abs(r1.E_phi) + 1e-15);
  }
}

TEST_CASE("mie: doubling the term count changes nothing") {
  for (double x : {0.5, 3.0, 15.0}) {
    const double f = freq_for(x, 1.0);
    for (double theta = 0.0; theta <= kPi; theta += kPi / 18) {
      const auto r = mie_far_field(1.0, f, theta, 0.4);
      const auto r2 = mie_far_field(1.0, f, theta, 0.4, r.terms);
      CHECK(std::abs(r2.E_theta - r.E_theta) <= 1e-10 * r.magnitude());
      CHECK(std::abs(r2.E_phi - r.E_phi) <= 1e-10 * r.magnitude());
    }
  }
}

TEST_CASE("mie: symmetry and invalid input") {
  // E-plane and H-plane coincide at forward and back directions
  const auto e = mie_far_field(1.0, 75e6, kPi, 0.0);
  const auto h = mie_far_field(1.0, 75e6, kPi, kPi / 2);
  CHECK(e.magnitude() == doctest::Approx(h.magnitude()).epsilon(1e-12));
  CHECK_THROWS_AS(mie_far_field(0.0, 75e6, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(mie_far_field(1.0, -1.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(mie_far_field(1.0, 1e12, 0.0, 0.0), std::runtime_error);
}
