#include "tdie/kernel_expansion.hpp"

#include "tdie/constants.hpp"
#include "tdie/quadrature.hpp"
#include "tdie/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>

namespace tdie {

namespace {

constexpr double kWindowSlack = 1e-12;

void require_in_window(double tau, const LegendreMap& map, const char* what) {
  if (!map.contains(tau)) throw std::domain_error(what);
}

}  // namespace

bool LegendreMap::contains(double tau) const {
  const double slack = kWindowSlack * std::max({std::abs(alpha), std::abs(beta), width()});
  return tau >= alpha - slack && tau <= beta + slack;
}

LegendreMap make_map(double alpha, double beta) {
  if (!(beta > alpha)) throw std::invalid_argument("make_map: degenerate window (beta <= alpha)");
  LegendreMap m;
  m.alpha = alpha;
  m.beta = beta;
  m.k1 = 2.0 / (beta - alpha);
  m.k2 = -(beta + alpha) / (beta - alpha);
  return m;
}

double spatial_factor(int l, double R, const LegendreMap& map) {
  return 0.5 * (2 * l + 1) * map.k1 * legendre(l, map.to_unit(R / kSpeedOfLight)) / R;
}

std::vector<double> spatial_factors(int N, double R, const LegendreMap& map) {
  std::vector<double> a(N + 1);
  legendre_all(map.to_unit(R / kSpeedOfLight), std::span<double>(a));
  for (int l = 0; l <= N; ++l) a[l] *= 0.5 * (2 * l + 1) * map.k1 / R;
  return a;
}

double kernel_term(int l, double R, double tau, const LegendreMap& map) {
  require_in_window(R / kSpeedOfLight, map, "kernel_term: R/c outside expansion window");
  require_in_window(tau, map, "kernel_term: tau outside expansion window");
  return spatial_factor(l, R, map) * legendre(l, map.to_unit(tau));
}

double truncated_kernel(int N, double R, double tau, const LegendreMap& map) {
  require_in_window(R / kSpeedOfLight, map, "truncated_kernel: R/c outside expansion window");
  require_in_window(tau, map, "truncated_kernel: tau outside expansion window");
  const auto a = spatial_factors(N, R, map);
  std::vector<double> p(N + 1);
  legendre_all(map.to_unit(tau), std::span<double>(p));
  double sum = 0.0;
  for (int l = 0; l <= N; ++l) sum += a[l] * p[l];
  return sum;
}

std::vector<double> temporal_coefficients(const PiecewisePolynomial& f, int N, double t,
                                          const LegendreMap& map) {
  std::vector<double> c(N + 1, 0.0);
  std::vector<double> p(N + 1);
  // Source times t' with t - t' in [alpha, beta].
  const double lo = t - map.beta;
  const double hi = t - map.alpha;
  const auto& knots = f.knots();
  for (std::size_t j = 0; j < f.num_pieces(); ++j) {
    const double a = std::max(knots[j], lo);
    const double b = std::min(knots[j + 1], hi);
    if (!(b > a)) continue;
    const int npts = (N + f.degree(j) + 1) / 2 + 2;
    const GaussRule& rule = gauss_legendre(npts);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double tp = mid + half * rule.nodes[q];
      const double w = half * rule.weights[q] * f.eval_piece(j, tp - knots[j]);
      if (w == 0.0) continue;
      legendre_all(map.to_unit(t - tp), std::span<double>(p));
      for (int l = 0; l <= N; ++l) c[l] += w * p[l];
    }
  }
  return c;
}

std::vector<double> step_coefficients(int N, double t, double t_on, const LegendreMap& map) {
  std::vector<double> c(N + 1, 0.0);
  const double tau_hi = std::min(map.beta, t - t_on);
  if (!(tau_hi > map.alpha)) return c;
  std::vector<double> q(N + 1);
  legendre_integral_all(std::min(1.0, map.to_unit(tau_hi)), std::span<double>(q));
  for (int l = 0; l <= N; ++l) c[l] = q[l] / map.k1;
  return c;
}

double convolve_profile(const PiecewisePolynomial& f, int N, double R, double t, const LegendreMap& map) {
  require_in_window(R / kSpeedOfLight, map, "convolve: R/c outside expansion window");
  const auto a = spatial_factors(N, R, map);
  const auto c = temporal_coefficients(f, N, t, map);
  double sum = 0.0;
  for (int l = 0; l <= N; ++l) sum += a[l] * c[l];
  return sum;
}

double convolve_basis(const TemporalBasis& basis, int N, double R, double t, const LegendreMap& map) {
  return convolve_profile(basis.profile(), N, R, t, map);
}

double exact_convolution(const TemporalBasis& basis, double R, double t) {
  if (!(R > 0.0)) throw std::domain_error("exact_convolution: R must be positive");
  return basis(t - R / kSpeedOfLight) / R;
}

}  // namespace tdie
