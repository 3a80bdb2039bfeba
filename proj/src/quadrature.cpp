#include "tdie/quadrature.hpp"

#include "tdie/constants.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace tdie {

namespace {

GaussRule compute_gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 1; k < n; ++k) {
        double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 1; k < n; ++k) {
      double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) {
      p1 = x;
      p0 = 1.0;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

constexpr int kMaxCachedGauss = 512;

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1 || n > kMaxCachedGauss) throw std::invalid_argument("gauss_legendre: order out of range");
  static std::array<std::unique_ptr<GaussRule>, kMaxCachedGauss + 1> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  if (!cache[n]) cache[n] = std::make_unique<GaussRule>(compute_gauss_legendre(n));
  return *cache[n];
}

TriangleRule triangle_product_rule(int n) {
  const GaussRule& g = gauss_legendre(n);
  TriangleRule rule;
  rule.degree = 2 * n - 1;
  for (int i = 0; i < n; ++i) {
    const double u = 0.5 * (g.nodes[i] + 1.0);
    const double wu = 0.5 * g.weights[i];
    for (int j = 0; j < n; ++j) {
      const double v = 0.5 * (g.nodes[j] + 1.0);
      const double wv = 0.5 * g.weights[j];
      // (u, v) in the unit square collapses onto the triangle; the Jacobian (1 - u)
      // is normalized by the reference area 1/2.
      const double b1 = u;
      const double b2 = (1.0 - u) * v;
      rule.barycentric.emplace_back(1.0 - b1 - b2, b1, b2);
      rule.weights.push_back(2.0 * wu * wv * (1.0 - u));
    }
  }
  return rule;
}

TriangleRule triangle_rule(int degree) {
  TriangleRule rule;
  if (degree <= 1) {
    rule.degree = 1;
    rule.barycentric = {Eigen::Vector3d(1.0 / 3, 1.0 / 3, 1.0 / 3)};
    rule.weights = {1.0};
    return rule;
  }
  if (degree == 2) {
    rule.degree = 2;
    const double a = 2.0 / 3, b = 1.0 / 6;
    rule.barycentric = {Eigen::Vector3d(a, b, b), Eigen::Vector3d(b, a, b), Eigen::Vector3d(b, b, a)};
    rule.weights = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    return rule;
  }
  if (degree <= 5) {
    // Radon's 7-point rule.
    rule.degree = 5;
    const double s15 = std::sqrt(15.0);
    const double a1 = (6.0 - s15) / 21.0, b1 = 1.0 - 2.0 * a1;
    const double a2 = (6.0 + s15) / 21.0, b2 = 1.0 - 2.0 * a2;
    const double w1 = (155.0 - s15) / 1200.0;
    const double w2 = (155.0 + s15) / 1200.0;
    rule.barycentric = {Eigen::Vector3d(1.0 / 3, 1.0 / 3, 1.0 / 3),
                        Eigen::Vector3d(b1, a1, a1), Eigen::Vector3d(a1, b1, a1), Eigen::Vector3d(a1, a1, b1),
                        Eigen::Vector3d(b2, a2, a2), Eigen::Vector3d(a2, b2, a2), Eigen::Vector3d(a2, a2, b2)};
    rule.weights = {9.0 / 40, w1, w1, w1, w2, w2, w2};
    return rule;
  }
  return triangle_product_rule((degree + 2) / 2);
}

TriangleRule subdivide(const TriangleRule& rule, int levels) {
  if (levels <= 0) return rule;
  // Children of the reference triangle, as barycentric corner triples.
  const std::array<std::array<Eigen::Vector3d, 3>, 4> children = {{
      {Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0.5, 0.5, 0), Eigen::Vector3d(0.5, 0, 0.5)},
      {Eigen::Vector3d(0.5, 0.5, 0), Eigen::Vector3d(0, 1, 0), Eigen::Vector3d(0, 0.5, 0.5)},
      {Eigen::Vector3d(0.5, 0, 0.5), Eigen::Vector3d(0, 0.5, 0.5), Eigen::Vector3d(0, 0, 1)},
      {Eigen::Vector3d(0.5, 0.5, 0), Eigen::Vector3d(0, 0.5, 0.5), Eigen::Vector3d(0.5, 0, 0.5)},
  }};
  TriangleRule out;
  out.degree = rule.degree;
  for (const auto& child : children) {
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const Eigen::Vector3d& b = rule.barycentric[i];
      out.barycentric.push_back(b[0] * child[0] + b[1] * child[1] + b[2] * child[2]);
      out.weights.push_back(0.25 * rule.weights[i]);
    }
  }
  return subdivide(out, levels - 1);
}

}  // namespace tdie
