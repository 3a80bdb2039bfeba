#pragma once

// Separable Legendre expansion of the retarded-potential kernel
//
//   delta(tau - R/c) / R  ~  sum_l (2l+1)/2 * k1 * P_l(k1 R/c + k2) / R * P_l(k1 tau + k2)
//
// valid for R/c and tau inside an expansion window [alpha, beta]. The affine map
// (k1, k2) sends the window onto [-1, 1].

#include "tdie/temporal_basis.hpp"

#include <vector>

namespace tdie {

struct LegendreMap {
  double alpha = -1.0;  // window start (s)
  double beta = 1.0;    // window end (s)
  double k1 = 1.0;      // 1/s
  double k2 = 0.0;

  double to_unit(double tau) const { return k1 * tau + k2; }
  double width() const { return beta - alpha; }
  double center() const { return 0.5 * (alpha + beta); }
  bool contains(double tau) const;
};

/// k1 = 2/(beta-alpha), k2 = -(beta+alpha)/(beta-alpha). Throws std::invalid_argument
/// when beta <= alpha.
LegendreMap make_map(double alpha, double beta);

/// Spatial half of one expansion term: (2l+1)/2 * k1 * P_l(k1 R/c + k2) / R.
double spatial_factor(int l, double R, const LegendreMap& map);

/// All spatial factors l = 0..N.
std::vector<double> spatial_factors(int N, double R, const LegendreMap& map);

/// One term of the expansion. Throws std::domain_error if R/c or tau leaves the window.
double kernel_term(int l, double R, double tau, const LegendreMap& map);

/// Sum of kernel_term for l = 0..N.
double truncated_kernel(int N, double R, double tau, const LegendreMap& map);

/// c_l(t) = integral dt' f(t') H(t - t') P_l(k1 (t - t') + k2), l = 0..N, where H is the
/// indicator of the window. Gauss-Legendre per polynomial piece of f, with
/// ceil((N + degree)/2) + 2 points, which is exact for the polynomial integrand.
std::vector<double> temporal_coefficients(const PiecewisePolynomial& f, int N, double t,
                                          const LegendreMap& map);

/// Same as temporal_coefficients for the unit step f(t') = H(t' - t_on), evaluated
/// analytically from the Legendre antiderivative.
std::vector<double> step_coefficients(int N, double t, double t_on, const LegendreMap& map);

/// integral dt' T(t') truncated_kernel(N, R, t - t') over the window.
/// Throws std::domain_error when R/c lies outside the window.
double convolve_basis(const TemporalBasis& basis, int N, double R, double t, const LegendreMap& map);

/// Same convolution for an arbitrary piecewise polynomial in place of T.
double convolve_profile(const PiecewisePolynomial& f, int N, double R, double t, const LegendreMap& map);

/// T(t - R/c) / R, the sifting property of the delta kernel. Throws for R <= 0.
double exact_convolution(const TemporalBasis& basis, double R, double t);

}  // namespace tdie
