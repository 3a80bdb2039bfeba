#pragma once

// Legendre polynomials and real-argument spherical Bessel functions.
//
// Everything here is a pure function templated on the floating type so the
// same code can be instantiated in extended precision by test oracles.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace tdie {

/// P_l(x) by the Bonnet three-term recurrence.
template <typename Real>
Real legendre(int l, Real x) {
  if (l < 0) throw std::invalid_argument("legendre: negative degree");
  if (l == 0) return Real(1);
  Real p_prev = Real(1);
  Real p = x;
  for (int n = 1; n < l; ++n) {
    Real p_next = (Real(2 * n + 1) * x * p - Real(n) * p_prev) / Real(n + 1);
    p_prev = p;
    p = p_next;
  }
  return p;
}

/// Fills p[0..N] with P_0(x)..P_N(x); N = p.size() - 1.
template <typename Real>
void legendre_all(Real x, std::span<Real> p) {
  if (p.empty()) return;
  p[0] = Real(1);
  if (p.size() == 1) return;
  p[1] = x;
  for (std::size_t n = 1; n + 1 < p.size(); ++n) {
    p[n + 1] = (Real(2 * n + 1) * x * p[n] - Real(n) * p[n - 1]) / Real(n + 1);
  }
}

/// Values and first derivatives of P_0..P_N. Uses P'_{n+1} = P'_{n-1} + (2n+1) P_n,
/// which stays finite at x = +-1.
template <typename Real>
void legendre_all_with_derivative(Real x, std::span<Real> p, std::span<Real> dp) {
  legendre_all(x, p);
  if (dp.empty()) return;
  dp[0] = Real(0);
  if (dp.size() == 1) return;
  dp[1] = Real(1);
  for (std::size_t n = 1; n + 1 < dp.size(); ++n) {
    dp[n + 1] = dp[n - 1] + Real(2 * n + 1) * p[n];
  }
}

/// Fills q[l] = integral of P_l from -1 to x, for l = 0..q.size()-1.
/// Uses (2l+1) P_l = P'_{l+1} - P'_{l-1}.
template <typename Real>
void legendre_integral_all(Real x, std::span<Real> q) {
  if (q.empty()) return;
  std::vector<Real> p(q.size() + 1);
  legendre_all(x, std::span<Real>(p));
  q[0] = x + Real(1);
  for (std::size_t l = 1; l < q.size(); ++l) {
    q[l] = (p[l + 1] - p[l - 1]) / Real(2 * l + 1);
  }
}

/// Ascending power series of j_l(z). Accurate in double only while the
/// alternating terms stay small, i.e. z small compared with l; test oracles
/// instantiate it in extended precision.
template <typename Real>
Real spherical_bessel_series(int l, Real z) {
  if (l < 0) throw std::invalid_argument("spherical_bessel_series: negative order");
  using std::abs;
  Real prefactor = Real(1);
  for (int k = 1; k <= l; ++k) prefactor *= z / Real(2 * k + 1);
  const Real half_z2 = z * z / Real(2);
  Real term = Real(1);
  Real sum = Real(1);
  const Real eps = std::numeric_limits<Real>::epsilon();
  for (int k = 1; k < 100000; ++k) {
    term *= -half_z2 / (Real(k) * Real(2 * l + 2 * k + 1));
    sum += term;
    if (abs(term) <= eps * abs(sum) && Real(k) > z) break;
  }
  return prefactor * sum;
}

/// j_l(z) for z >= 0. Ascending series for z < max(1, l/2); otherwise Miller's
/// downward recurrence normalized by whichever of j_0, j_1 is larger in magnitude.
template <typename Real>
Real spherical_bessel(int l, Real z) {
  if (l < 0) throw std::invalid_argument("spherical_bessel: negative order");
  if (z < Real(0)) throw std::domain_error("spherical_bessel: negative argument");
  using std::abs;
  using std::cos;
  using std::sin;
  using std::sqrt;
  if (z == Real(0)) return l == 0 ? Real(1) : Real(0);
  if (z < std::max(Real(1), Real(l) / Real(2))) return spherical_bessel_series(l, z);

  const Real top = std::max(Real(l), z);
  const int start = static_cast<int>(top) + 20 + static_cast<int>(sqrt(Real(40) * (top + Real(1))));
  // Only f_l, f_1 and f_0 are needed; rescaling keeps them in a common scale.
  Real f_next = Real(0);
  Real f = Real(1e-300);
  Real f_l = Real(0);
  Real f1 = Real(0);
  for (int n = start; n >= 1; --n) {
    Real f_prev = Real(2 * n + 1) / z * f - f_next;
    f_next = f;
    f = f_prev;
    if (abs(f) > Real(1e250)) {
      f *= Real(1e-250);
      f_next *= Real(1e-250);
      f_l *= Real(1e-250);
      f1 *= Real(1e-250);
    }
    if (n - 1 == l) f_l = f;
    if (n - 1 == 1) f1 = f;
  }
  const Real f0 = f;
  const Real j0 = sin(z) / z;
  const Real j1 = sin(z) / (z * z) - cos(z) / z;
  if (abs(j0) >= abs(j1)) return f_l * (j0 / f0);
  return f_l * (j1 / f1);
}

/// y_l(z) for z > 0 by upward recurrence (stable direction for y).
template <typename Real>
Real spherical_neumann(int l, Real z) {
  if (l < 0) throw std::invalid_argument("spherical_neumann: negative order");
  if (!(z > Real(0))) throw std::domain_error("spherical_neumann: argument must be positive");
  using std::cos;
  using std::sin;
  Real y0 = -cos(z) / z;
  if (l == 0) return y0;
  Real y1 = -cos(z) / (z * z) - sin(z) / z;
  for (int n = 1; n < l; ++n) {
    Real y2 = Real(2 * n + 1) / z * y1 - y0;
    y0 = y1;
    y1 = y2;
  }
  return y1;
}

/// Dominating envelope of j_l(z) valid for l >= z:
///   sqrt(pi/2) * (z / (l + sqrt(l^2 - z^2)))^l * exp(sqrt(l^2 - z^2)).
template <typename Real>
Real bessel_envelope(int l, Real z) {
  using std::exp;
  using std::log;
  using std::sqrt;
  if (z < Real(0)) throw std::domain_error("bessel_envelope: negative argument");
  if (Real(l) < z) throw std::domain_error("bessel_envelope: requires l >= z");
  const Real s = sqrt(Real(l) * Real(l) - z * z);
  const Real root_half_pi = sqrt(Real(std::numbers::pi) / Real(2));
  if (l == 0) return root_half_pi;
  if (z == Real(0)) return Real(0);
  return root_half_pi * exp(Real(l) * log(z / (Real(l) + s)) + s);
}

}  // namespace tdie
