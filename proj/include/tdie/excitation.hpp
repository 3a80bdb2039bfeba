#pragma once

#include <Eigen/Dense>

#include <complex>

namespace tdie {

/// Modulated Gaussian plane wave
///   E(r, t) = amplitude * u * cos(2 pi f0 s) * exp(-(s - t_p)^2 / (2 sigma^2)),  s = t - r.k/c
/// with sigma = 3/(2 pi B) and t_p = 6 sigma.
struct PlaneWave {
  Eigen::Vector3d u_hat = Eigen::Vector3d::UnitX();
  Eigen::Vector3d k_hat = Eigen::Vector3d::UnitZ();
  double f0 = 0.0;
  double B = 0.0;
  double amplitude = 1.0;

  double sigma() const;
  double t_p() const { return 6.0 * sigma(); }
  double f_max() const { return f0 + B; }

  /// Throws std::invalid_argument unless u and k are orthogonal unit vectors and B > 0.
  void validate() const;
};

Eigen::Vector3d incident_field(const PlaneWave& pw, const Eigen::Vector3d& r, double t);

/// H = k x E / eta0.
Eigen::Vector3d incident_magnetic(const PlaneWave& pw, const Eigen::Vector3d& r, double t);

/// Fourier transform (exp(-j omega t) convention) of the scalar waveform at r = 0.
std::complex<double> incident_spectrum(const PlaneWave& pw, double f);

/// Same transform by Gauss quadrature of the time signal over [0, 2 t_p]; an
/// independent check of incident_spectrum.
std::complex<double> incident_spectrum_numeric(const PlaneWave& pw, double f);

/// 10 log10 of |E(f)|^2 / |E(f0)|^2 from the analytic spectrum.
double relative_power_db(const PlaneWave& pw, double f);

}  // namespace tdie
