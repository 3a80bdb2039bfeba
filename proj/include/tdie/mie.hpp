#pragma once

// Mie series for plane-wave scattering by a perfectly conducting sphere.
// Incidence along +z with x polarization, exp(-i omega t) convention (Bohren and
// Huffman): r E_theta = (i/k) cos(phi) S2(theta), r E_phi = -(i/k) sin(phi) S1(theta),
// dropping exp(ikr), for unit incident amplitude.

#include <complex>

namespace tdie {

struct MieResult {
  double frequency = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  std::complex<double> E_theta;  // r E / |E_inc|, metres
  std::complex<double> E_phi;
  int terms = 0;

  double magnitude() const { return std::sqrt(std::norm(E_theta) + std::norm(E_phi)); }
};

/// n_max = ceil(x + 4 x^{1/3} + 2) for size parameter x = ka.
int mie_terms(double x);

/// Sums at least mie_terms(ka) + extra_terms terms and keeps going until the last
/// term is below 1e-12 of the largest. Throws std::invalid_argument for a <= 0 or
/// f <= 0, std::runtime_error if that takes more than max_terms terms.
MieResult mie_far_field(double a, double f, double theta, double phi, int extra_terms = 0, int max_terms = 4000);

struct MieEfficiencies {
  double extinction = 0.0;
  double scattering = 0.0;
  double backscatter = 0.0;  // sigma_back / (pi a^2)
};

MieEfficiencies mie_efficiencies(double x, int extra_terms = 0);

}  // namespace tdie
