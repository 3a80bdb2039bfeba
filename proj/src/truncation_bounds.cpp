#include "tdie/truncation_bounds.hpp"

#include "tdie/constants.hpp"
#include "tdie/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace tdie {

BandLimits BandLimits::from_mesh(double f_max, double h_min) {
  if (!(f_max > 0.0) || !(h_min > 0.0)) throw std::invalid_argument("BandLimits: f_max and h_min must be positive");
  return BandLimits{2.0 * kPi * f_max, kPi / h_min};
}

double BoundQuery::temporal_argument() const { return std::abs(omega) / map.k1; }
double BoundQuery::spatial_argument() const { return std::abs(lambda) * kSpeedOfLight / map.k1; }

std::complex<double> truncated_spectrum(int N, double omega, double lambda, const LegendreMap& map) {
  if (!(lambda > 0.0)) throw std::invalid_argument("truncated_spectrum: lambda must be positive");
  const double xt = std::abs(omega) / map.k1;
  const double xs = lambda * kSpeedOfLight / map.k1;
  double sum = 0.0;
  for (int l = 0; l <= N; ++l) {
    sum += (2 * l + 1) * spherical_bessel(l, xt) * spherical_bessel(l, xs);
  }
  const double scale = 8.0 * kPi * kSpeedOfLight / (lambda * map.k1);
  return scale * std::polar(1.0, -omega * map.k2 / map.k1) * sum;
}

double tail_bound_tight(int N, const BoundQuery& q) {
  const double xt = q.temporal_argument();
  const double xs = q.spatial_argument();
  if (static_cast<double>(N + 1) < std::max(xt, xs)) {
    throw std::domain_error("tail_bound_tight: envelope needs l >= max(x_t, x_s) for every tail term");
  }
  double sum = 0.0;
  for (int l = N + 1; l < N + 100000; ++l) {
    const double term = (2 * l + 1) * bessel_envelope(l, xt) * bessel_envelope(l, xs);
    sum += term;
    if (term <= 1e-30 * sum || term == 0.0) break;
  }
  return sum;
}

ErrorEstimate tail_bound_closed(int N, const BoundQuery& q) {
  if (N < 1) throw std::invalid_argument("tail_bound_closed: N must be >= 1");
  ErrorEstimate est;
  est.z_t = std::numbers::e * q.temporal_argument() / (2.0 * N);
  est.z_s = std::numbers::e * q.spatial_argument() / (2.0 * N);
  const double r = est.z_t * est.z_s;
  est.convergent = r < 1.0;
  if (!est.convergent) {
    est.bound = std::numeric_limits<double>::infinity();
    return est;
  }
  if (r == 0.0) {
    est.bound = 0.0;
    return est;
  }
  const double head = std::exp((N + 1) * std::log(r));
  est.bound = 0.5 * kPi * head * ((2.0 * N + 3.0) / (1.0 - r) + 2.0 * r / ((1.0 - r) * (1.0 - r)));
  return est;
}

int order_floor(const BandLimits& band, const LegendreMap& map, OrderFloorRule rule) {
  const double xt = band.omega_m / map.k1;
  const double xs = band.lambda_m * kSpeedOfLight / map.k1;
  const double x = rule == OrderFloorRule::kMax ? std::max(xt, xs) : std::min(xt, xs);
  return static_cast<int>(std::ceil(2.0 * x)) + 1;
}

int select_order(const BandLimits& band, const LegendreMap& map, double tol, OrderFloorRule rule) {
  if (!(tol > 0.0)) throw std::invalid_argument("select_order: tol must be positive");
  BoundQuery q;
  q.omega = band.omega_m;
  q.lambda = band.lambda_m;
  q.map = map;
  for (int N = std::max(1, order_floor(band, map, rule));; ++N) {
    q.N = N;
    const ErrorEstimate est = tail_bound_closed(N, q);
    if (est.convergent && est.bound <= tol) return N;
  }
}

}  // namespace tdie
