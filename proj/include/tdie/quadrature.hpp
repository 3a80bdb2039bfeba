#pragma once

#include <Eigen/Dense>

#include <vector>

namespace tdie {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (exact for degree 2n-1). Rules are computed once
/// and cached; the returned reference stays valid for the program lifetime.
const GaussRule& gauss_legendre(int n);

/// Integrates f over [a, b] with the n-point Gauss-Legendre rule.
template <typename F>
auto integrate_gauss(F&& f, double a, double b, int n) {
  const GaussRule& rule = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  decltype(f(mid)) sum = f(mid) * 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return decltype(sum)(sum * half);
}

/// Quadrature on the reference triangle in barycentric coordinates. Weights sum to 1,
/// so a physical integral is area * sum_i w_i f(x_i).
struct TriangleRule {
  std::vector<Eigen::Vector3d> barycentric;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return weights.size(); }
};

/// Smallest built-in rule that integrates polynomials of at least the given degree.
/// Degrees up to 5 use symmetric rules (1, 3, 7 points); higher degrees use a collapsed
/// Gauss product rule.
TriangleRule triangle_rule(int degree);

/// Collapsed (Duffy) Gauss product rule with n*n points, exact to degree 2n-1.
TriangleRule triangle_product_rule(int n);

/// Subdivides every point of a rule into 4^levels child triangles.
TriangleRule subdivide(const TriangleRule& rule, int levels);

}  // namespace tdie
