#include "tdie/sphere_validation.hpp"

#include "tdie/constants.hpp"
#include "tdie/far_field.hpp"
#include "tdie/mie.hpp"

#include <cmath>
#include <stdexcept>

namespace tdie {

std::vector<SphereComparison> compare_with_mie(const CurrentHistory& history, const SurfaceMesh& mesh,
                                               const std::vector<RwgFunction>& rwg, int order,
                                               const PlaneWave& pw, double radius,
                                               const std::vector<double>& freqs, int n_angles,
                                               const std::vector<ScatteringPlane>& planes) {
  if (n_angles < 2) throw std::invalid_argument("compare_with_mie: need at least 2 angles");
  pw.validate();
  std::vector<SphereComparison> rows;
  for (ScatteringPlane plane : planes) {
    const Eigen::Vector3d side = plane == ScatteringPlane::kE ? pw.u_hat : Eigen::Vector3d(pw.k_hat.cross(pw.u_hat));
    // Mie puts the polarization on x, so the E-plane is phi = 0
    const double phi = plane == ScatteringPlane::kE ? 0.0 : 0.5 * kPi;
    for (int a = 0; a < n_angles; ++a) {
      const double theta = kPi * a / (n_angles - 1);
      const Eigen::Vector3d r = (std::cos(theta) * pw.k_hat + std::sin(theta) * side).normalized();
      const auto spec = far_field_spectrum(history, mesh, rwg, order, r, freqs);
      for (std::size_t i = 0; i < freqs.size(); ++i) {
        SphereComparison row;
        row.frequency = freqs[i];
        row.plane = plane;
        row.theta = theta;
        row.mot_magnitude = spec[i].norm() / std::abs(incident_spectrum(pw, freqs[i]));
        row.mie_magnitude = mie_far_field(radius, freqs[i], theta, phi).magnitude();
        row.deviation_db = 20.0 * std::log10(row.mot_magnitude / row.mie_magnitude);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

double worst_deviation_db(const std::vector<SphereComparison>& rows) {
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, std::abs(r.deviation_db));
  return worst;
}

}  // namespace tdie
