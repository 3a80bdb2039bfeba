#include "tdie/triangle_integrals.hpp"

#include "tdie/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace tdie {

PotentialIntegrals potential_integrals(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                                       const Eigen::Vector3d& c, const Eigen::Vector3d& r) {
  const Eigen::Vector3d n = (b - a).cross(c - a).normalized();
  const double d = (r - a).dot(n);
  const double ad = std::abs(d);
  const double scale = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
  PotentialIntegrals out;
  out.rho = r - d * n;
  out.vector.setZero();
  out.gradient.setZero();

  const std::array<const Eigen::Vector3d*, 3> p = {&a, &b, &c};
  double beta_sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector3d& pm = *p[i];
    const Eigen::Vector3d& pp = *p[(i + 1) % 3];
    const Eigen::Vector3d lhat = (pp - pm).normalized();
    const Eigen::Vector3d u = lhat.cross(n);  // outward in-plane edge normal
    const double P0 = (pm - out.rho).dot(u);
    const double lp = (pp - out.rho).dot(lhat);
    const double lm = (pm - out.rho).dot(lhat);
    const double R0sq = P0 * P0 + d * d;
    const double Rp = (r - pp).norm();
    const double Rm = (r - pm).norm();

    double f = 0.0;
    const bool on_edge_line = R0sq <= 1e-28 * scale * scale;
    if (!on_edge_line) {
      f = (lp + lm) > 0.0 ? std::log((Rp + lp) / (Rm + lm)) : std::log((Rm - lm) / (Rp - lp));
    } else if (lm * lp > 0.0) {
      // on the line of the edge but outside the segment: P0 = 0 kills the scalar
      // part and R0^2 the vector part, but the gradient log term stays finite
      f = lp > 0.0 ? std::log(lp / lm) : std::log(lm / lp);
    }
    double beta = 0.0;
    if (!on_edge_line) {
      beta = std::atan(P0 * lp / (R0sq + ad * Rp)) - std::atan(P0 * lm / (R0sq + ad * Rm));
    }
    beta_sum += beta;
    out.scalar += P0 * f;
    out.vector += 0.5 * u * (R0sq * f + lp * Rp - lm * Rm);
    out.gradient -= u * f;
  }
  out.scalar -= ad * beta_sum;
  const double sgn = d > 0.0 ? 1.0 : d < 0.0 ? -1.0 : 0.0;
  out.gradient -= n * sgn * beta_sum;
  return out;
}

}  // namespace tdie

namespace tdie {

void polar_points(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c,
                  const Eigen::Vector3d& r, int radial, int angular, std::vector<Eigen::Vector3d>& points,
                  std::vector<double>& weights) {
  points.clear();
  weights.clear();
  const Eigen::Vector3d n = (b - a).cross(c - a).normalized();
  const double h = std::abs((r - a).dot(n));
  const Eigen::Vector3d r0 = r - (r - a).dot(n) * n;
  const double scale = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
  const GaussRule& gs = gauss_legendre(angular);
  const GaussRule& gr = gauss_legendre(radial);
  std::vector<double> rho_breaks;
  if (h > 1e-10 * scale) {
    for (double g = h; g < 2.0 * scale; g *= 3.0) rho_breaks.push_back(g);
  }
  std::vector<double> s_breaks;
  const std::array<std::pair<const Eigen::Vector3d*, const Eigen::Vector3d*>, 3> edges = {{{&a, &b}, {&b, &c}, {&c, &a}}};
  for (const auto& [P1, P2] : edges) {
    const double L = (*P2 - *P1).norm();
    const Eigen::Vector3d t = (*P2 - *P1) / L;
    const Eigen::Vector3d foot = *P1 + (r0 - *P1).dot(t) * t;
    const Eigen::Vector3d dvec = foot - r0;
    const double d = dvec.norm();
    if (d < 1e-12 * scale) continue;
    // sub-triangle (r0, P1, P2) counts negatively when r0 lies outside this edge
    const double sign = dvec.dot(n.cross(t)) < 0.0 ? 1.0 : -1.0;
    const Eigen::Vector3d g = dvec / d;
    const double s1 = (*P1 - foot).dot(t), s2 = (*P2 - foot).dot(t);
    s_breaks.assign({s1, s2});
    if (s1 < 0.0 && s2 > 0.0) s_breaks.push_back(0.0);
    for (double x = d; x < std::max(-s1, s2); x *= 4.0) {
      if (x < s2 && x > s1) s_breaks.push_back(x);
      if (-x > s1 && -x < s2) s_breaks.push_back(-x);
    }
    std::sort(s_breaks.begin(), s_breaks.end());
    for (std::size_t i = 0; i + 1 < s_breaks.size(); ++i) {
      const double sa = s_breaks[i], sb = s_breaks[i + 1];
      for (std::size_t q = 0; q < gs.nodes.size(); ++q) {
        const double s = 0.5 * (sa + sb) + 0.5 * (sb - sa) * gs.nodes[q];
        const double ws = sign * 0.5 * (sb - sa) * gs.weights[q] * d / (d * d + s * s);
        const double rho_max = std::sqrt(d * d + s * s);
        const Eigen::Vector3d e = (d * g + s * t) / rho_max;
        double lo = 0.0;
        auto panel = [&](double hi) {
          for (std::size_t k = 0; k < gr.nodes.size(); ++k) {
            const double rho = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gr.nodes[k];
            points.push_back(r0 + rho * e);
            weights.push_back(ws * 0.5 * (hi - lo) * gr.weights[k] * rho);
          }
          lo = hi;
        };
        for (double rb : rho_breaks) {
          if (rb >= rho_max) break;
          panel(rb);
        }
        panel(rho_max);
      }
    }
  }
}

}  // namespace tdie
