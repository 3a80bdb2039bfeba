#include "tdie/mie.hpp"

#include "tdie/constants.hpp"
#include "tdie/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace tdie {

namespace {

using cplx = std::complex<double>;

struct Coefficients {
  std::vector<cplx> a, b;  // index n = 1..n_max
};

// Coefficients for n = 1.. up to at least mie_terms(x) + extra, continued until the
// last term (2n+1)(|a_n| + |b_n|) is below 1e-12 of the largest.
Coefficients pec_coefficients(double x, int extra, int max_terms) {
  Coefficients c;
  c.a.push_back(0.0);
  c.b.push_back(0.0);
  const int n_min = mie_terms(x) + extra;
  double jm = spherical_bessel(0, x), ym = spherical_neumann(0, x);
  double peak = 0.0;
  for (int n = 1;; ++n) {
    if (n > max_terms) throw std::runtime_error("mie: series needs more than " + std::to_string(max_terms) + " terms");
    // psi_n = x j_n, xi_n = x (j_n + i y_n), f_n' = f_{n-1} - n f_n / x
    const double j = spherical_bessel(n, x), y = spherical_neumann(n, x);
    const double psi = x * j;
    const cplx xi = x * cplx(j, y);
    const double dpsi = x * jm - n * psi / x;
    const cplx dxi = x * cplx(jm, ym) - static_cast<double>(n) * xi / x;
    c.a.push_back(dpsi / dxi);
    c.b.push_back(psi / xi);
    jm = j;
    ym = y;
    const double term = (2.0 * n + 1.0) * (std::abs(c.a[n]) + std::abs(c.b[n]));
    peak = std::max(peak, term);
    if (n >= n_min && term < 1e-12 * peak) break;
  }
  return c;
}

}  // namespace

int mie_terms(double x) { return static_cast<int>(std::ceil(x + 4.0 * std::cbrt(x) + 2.0)); }

MieResult mie_far_field(double a, double f, double theta, double phi, int extra_terms, int max_terms) {
  if (!(a > 0.0) || !(f > 0.0)) throw std::invalid_argument("mie: radius and frequency must be positive");
  const double k = 2.0 * kPi * f / kSpeedOfLight;
  const double x = k * a;
  const Coefficients c = pec_coefficients(x, extra_terms, max_terms);
  const int n_max = static_cast<int>(c.a.size()) - 1;
  const double mu = std::cos(theta);
  double pi_prev = 0.0, pi_cur = 1.0;  // pi_0, pi_1
  cplx S1 = 0.0, S2 = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const double tau = n * mu * pi_cur - (n + 1) * pi_prev;
    const double e = (2.0 * n + 1.0) / (n * (n + 1.0));
    S1 += e * (c.a[n] * pi_cur + c.b[n] * tau);
    S2 += e * (c.a[n] * tau + c.b[n] * pi_cur);
    const double next = ((2.0 * n + 1.0) * mu * pi_cur - (n + 1.0) * pi_prev) / n;
    pi_prev = pi_cur;
    pi_cur = next;
  }
  MieResult r;
  r.frequency = f;
  r.theta = theta;
  r.phi = phi;
  const cplx i(0.0, 1.0);
  r.E_theta = (i / k) * std::cos(phi) * S2;
  r.E_phi = -(i / k) * std::sin(phi) * S1;
  r.terms = n_max;
  return r;
}

MieEfficiencies mie_efficiencies(double x, int extra_terms) {
  if (!(x > 0.0)) throw std::invalid_argument("mie: size parameter must be positive");
  const Coefficients c = pec_coefficients(x, extra_terms, 1 << 20);
  const int n_max = static_cast<int>(c.a.size()) - 1;
  MieEfficiencies e;
  cplx back = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    e.extinction += (2 * n + 1) * (c.a[n] + c.b[n]).real();
    e.scattering += (2 * n + 1) * (std::norm(c.a[n]) + std::norm(c.b[n]));
    back += (2.0 * n + 1.0) * (n % 2 == 0 ? 1.0 : -1.0) * (c.a[n] - c.b[n]);
  }
  e.extinction *= 2.0 / (x * x);
  e.scattering *= 2.0 / (x * x);
  e.backscatter = std::norm(back) / (x * x);
  return e;
}

}  // namespace tdie
