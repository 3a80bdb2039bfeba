#pragma once

// Radiation-zone field of the marched current,
//   r E(r_hat, t) = -mu0/(4 pi) (I - r_hat r_hat) d/dt int J(r', t + r_hat.r'/c) dA',
// with t measured from the arrival of a wave from the origin.

#include "tdie/geometry.hpp"
#include "tdie/mot_solver.hpp"

#include <complex>
#include <vector>

namespace tdie {

using Vector3cd = Eigen::Matrix<std::complex<double>, 3, 1>;

/// Time series at the given times, with J(t) interpolated by the order-p temporal basis.
std::vector<Eigen::Vector3d> far_field(const CurrentHistory& history, const SurfaceMesh& mesh,
                                       const std::vector<RwgFunction>& rwg, int order,
                                       const Eigen::Vector3d& direction, const std::vector<double>& times,
                                       int degree = 4);

/// Exact Fourier transform (exp(-j omega t)) of the same far field: the interpolated
/// current is a finite sum of shifted basis functions, so the transform is
/// -mu0/(4 pi) (I - r r) j omega T(omega) sum_n [sum_i J_ni e^{-j omega i dt}] int S_n e^{j omega r.r'/c}.
std::vector<Vector3cd> far_field_spectrum(const CurrentHistory& history, const SurfaceMesh& mesh,
                                          const std::vector<RwgFunction>& rwg, int order,
                                          const Eigen::Vector3d& direction, const std::vector<double>& freqs,
                                          int degree = 6);

/// Fourier transform of one temporal basis function T_0.
std::complex<double> basis_spectrum(const TemporalBasis& basis, double f);

}  // namespace tdie
