#pragma once

// Truncation error of the separable kernel expansion in the spectral domain and
// the rule that picks the expansion order from band limits.
//
// The exact spectrum of the windowed kernel is
//   sum_l (8 pi c / (lambda k1)) (2l+1) exp(-j omega k2/k1) j_l(omega/k1) j_l(lambda c/k1),
// so the truncation error after N terms is the tail l > N. All bounds below are
// reported relative to the scale C = 8 pi c / (lambda k1) and use the normalized
// Bessel arguments x_t = omega/k1 and x_s = lambda c/k1.

#include "tdie/kernel_expansion.hpp"

#include <complex>

namespace tdie {

struct BandLimits {
  double omega_m = 0.0;   // rad/s
  double lambda_m = 0.0;  // rad/m

  /// omega_m = 2 pi f_max, lambda_m = pi / h_min (Nyquist of the smallest feature).
  static BandLimits from_mesh(double f_max, double h_min);
};

struct BoundQuery {
  int N = 1;
  double omega = 0.0;
  double lambda = 0.0;
  LegendreMap map;

  double temporal_argument() const;  // omega / k1
  double spatial_argument() const;   // lambda c / k1
};

struct ErrorEstimate {
  double z_t = 0.0;
  double z_s = 0.0;
  double bound = 0.0;  // relative to C; +inf when not convergent
  bool convergent = false;
};

/// Which normalized argument sets the minimum order. kMax guarantees the Bessel
/// envelope applies to every tail term; kMin is the looser practical rule.
enum class OrderFloorRule { kMax, kMin };

/// Partial sum l = 0..N of the kernel spectrum (absolute, including C).
/// Throws std::invalid_argument for lambda <= 0.
std::complex<double> truncated_spectrum(int N, double omega, double lambda, const LegendreMap& map);

/// (pi/2) sum_{l>N} (2l+1) env(l, x_t) env(l, x_s), relative to C, summed until terms
/// drop below 1e-30 of the running total. Requires N + 1 >= max(x_t, x_s), otherwise
/// throws std::domain_error.
double tail_bound_tight(int N, const BoundQuery& q);

/// Closed form of the relaxed tail (pi/2) sum_{l>N} (2l+1) r^l with
/// r = e^2 x_t x_s / (4 N^2) = z_t z_s, where z_t = e x_t / (2N) and z_s = e x_s / (2N):
///   (pi/2) r^{N+1} [ (2N+3)/(1-r) + 2r/(1-r)^2 ].
/// convergent == (z_t z_s < 1); otherwise bound is +inf.
ErrorEstimate tail_bound_closed(int N, const BoundQuery& q);

/// Smallest order N >= floor that has tail_bound_closed <= tol at the band edges,
/// where floor = ceil(2 * max(x_t, x_s)) + 1 (or min with OrderFloorRule::kMin).
/// Throws std::invalid_argument for tol <= 0.
int select_order(const BandLimits& band, const LegendreMap& map, double tol,
                 OrderFloorRule rule = OrderFloorRule::kMax);

/// The floor used by select_order.
int order_floor(const BandLimits& band, const LegendreMap& map, OrderFloorRule rule = OrderFloorRule::kMax);

}  // namespace tdie
