#pragma once

// Far-field spectrum of a marched sphere run against the Mie series. The sphere
// must be centred at the origin; angles are measured from k_hat in the E-plane
// (spanned by k_hat and u_hat) or the H-plane (k_hat and k_hat x u_hat).

#include "tdie/excitation.hpp"
#include "tdie/geometry.hpp"
#include "tdie/mot_solver.hpp"

#include <vector>

namespace tdie {

enum class ScatteringPlane { kE, kH };

struct SphereComparison {
  double frequency = 0.0;
  ScatteringPlane plane = ScatteringPlane::kE;
  double theta = 0.0;         // rad from forward
  double mot_magnitude = 0.0;  // |r E(f)| / |E_inc(f)|, metres
  double mie_magnitude = 0.0;
  double deviation_db = 0.0;  // 20 log10(mot / mie)
};

/// n_angles equally spaced angles over [0, pi] in each requested plane.
std::vector<SphereComparison> compare_with_mie(const CurrentHistory& history, const SurfaceMesh& mesh,
                                               const std::vector<RwgFunction>& rwg, int order,
                                               const PlaneWave& pw, double radius,
                                               const std::vector<double>& freqs, int n_angles = 19,
                                               const std::vector<ScatteringPlane>& planes = {ScatteringPlane::kE});

/// Largest |deviation_db|.
double worst_deviation_db(const std::vector<SphereComparison>& rows);

}  // namespace tdie
