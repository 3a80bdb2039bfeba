#pragma once

#include <Eigen/Dense>

#include <vector>

namespace tdie {

/// Closed-form potential integrals of a flat triangle (a, b, c) seen from r.
/// rho is the projection of r onto the triangle plane.
struct PotentialIntegrals {
  double scalar = 0.0;         // integral of 1/R dA'
  Eigen::Vector3d vector;      // integral of (r' - rho)/R dA' (in-plane)
  Eigen::Vector3d gradient;    // gradient with respect to r of the scalar integral
  Eigen::Vector3d rho;
};

/// Edge-by-edge line-integral formulas for the 1/R potential. The gradient is
/// singular on the edges themselves; its normal part is the principal value
/// (zero) for r in the triangle plane.
PotentialIntegrals potential_integrals(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                                       const Eigen::Vector3d& c, const Eigen::Vector3d& r);

}  // namespace tdie

namespace tdie {

/// Points and weights for integrands that are smooth functions of |r' - r| on
/// the triangle (a, b, c): polar coordinates about the projection of r, with
/// panels graded toward the projection along every edge and, off the plane,
/// radial panels graded at the height. Cancels the 1/R of the area element.
void polar_points(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c,
                  const Eigen::Vector3d& r, int radial, int angular, std::vector<Eigen::Vector3d>& points,
                  std::vector<double>& weights);

}  // namespace tdie
