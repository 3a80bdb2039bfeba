#include "tdie/excitation.hpp"

#include "tdie/constants.hpp"
#include "tdie/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace tdie {

double PlaneWave::sigma() const { return 3.0 / (2.0 * kPi * B); }

void PlaneWave::validate() const {
  if (std::abs(u_hat.norm() - 1.0) > 1e-9 || std::abs(k_hat.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("plane wave: u_hat and k_hat must be unit vectors");
  }
  if (std::abs(u_hat.dot(k_hat)) > 1e-9) throw std::invalid_argument("plane wave: u_hat must be orthogonal to k_hat");
  if (!(B > 0.0) || f0 < 0.0) throw std::invalid_argument("plane wave: need B > 0 and f0 >= 0");
}

Eigen::Vector3d incident_field(const PlaneWave& pw, const Eigen::Vector3d& r, double t) {
  const double s = t - r.dot(pw.k_hat) / kSpeedOfLight;
  const double sig = pw.sigma();
  const double x = (s - pw.t_p()) / sig;
  return pw.amplitude * std::cos(2.0 * kPi * pw.f0 * s) * std::exp(-0.5 * x * x) * pw.u_hat;
}

Eigen::Vector3d incident_magnetic(const PlaneWave& pw, const Eigen::Vector3d& r, double t) {
  return pw.k_hat.cross(incident_field(pw, r, t)) / kEta0;
}

std::complex<double> incident_spectrum(const PlaneWave& pw, double f) {
  const double sig = pw.sigma();
  const double w = 2.0 * kPi * f;
  const double w0 = 2.0 * kPi * pw.f0;
  // the carrier is not centred on the envelope, so each sideband keeps its own phase
  const double c = 0.5 * sig * std::sqrt(2.0 * kPi);
  const std::complex<double> g = c * std::exp(-0.5 * std::pow((w - w0) * sig, 2)) * std::polar(1.0, -(w - w0) * pw.t_p()) +
                                 c * std::exp(-0.5 * std::pow((w + w0) * sig, 2)) * std::polar(1.0, -(w + w0) * pw.t_p());
  return pw.amplitude * g;
}

std::complex<double> incident_spectrum_numeric(const PlaneWave& pw, double f) {
  const double w = 2.0 * kPi * f;
  const double T = 2.0 * pw.t_p();
  const int panels = 64 + static_cast<int>(8.0 * (pw.f0 + std::abs(f)) * T);
  std::complex<double> sum = 0.0;
  const double h = T / panels;
  for (int i = 0; i < panels; ++i) {
    sum += integrate_gauss(
        [&](double t) {
          return incident_field(pw, Eigen::Vector3d::Zero(), t).dot(pw.u_hat) * std::polar(1.0, -w * t);
        },
        i * h, (i + 1) * h, 12);
  }
  return sum;
}

double relative_power_db(const PlaneWave& pw, double f) {
  return 20.0 * std::log10(std::abs(incident_spectrum(pw, f)) / std::abs(incident_spectrum(pw, pw.f0)));
}

}  // namespace tdie
