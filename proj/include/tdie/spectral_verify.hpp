#pragma once

// Spectrum of the exact retarded convolution T(t - R/c)/R against the truncated
// Legendre expansion of the kernel, and the in-band error as a function of N.

#include "tdie/truncation_bounds.hpp"

#include <complex>
#include <vector>

namespace tdie {

enum class SpectrumMethod {
  kContinuous,  // Fourier integral by Gauss quadrature on the smooth pieces
  kDft,         // sampled signal, zero padded, direct DFT at the band bins
};

struct SpectrumStudy {
  int order = 1;               // temporal basis order p
  double dt = 1e-9;            // s
  double R = 1.0;              // m
  double window = 3.0;         // window width in multiples of dt, centred on R/c
  std::vector<int> N_list = {2, 3, 5, 7, 10, 14};
  double band_lo = 0.0;        // Hz
  double band_hi = 0.0;        // Hz; 0 means 1/(20 dt)
  int num_frequencies = 201;   // continuous method only
  SpectrumMethod method = SpectrumMethod::kContinuous;
  int samples_per_dt = 32;     // DFT method only
  bool signal_weighted = false;

  double upper_edge() const { return band_hi > 0.0 ? band_hi : 1.0 / (20.0 * dt); }
  LegendreMap map() const;

  /// Temporal edge 2 pi band_hi; spatial edge pi/(c dt), the finest feature the
  /// time step resolves.
  BandLimits band() const;
};

struct SpectrumReport {
  int N = 0;
  std::vector<double> frequencies;
  std::vector<double> exact_mag;
  std::vector<double> approx_mag;
  double inband_l2_error = 0.0;
};

/// Throws std::invalid_argument when window < p + 1, the band is empty, or (DFT)
/// the sampling rate is below 8x the band edge.
std::vector<SpectrumReport> run_spectrum_study(const SpectrumStudy& study);

/// Direct DFT sum_n x_n exp(-j 2 pi f t_n) * dt_s at arbitrary frequencies, for samples
/// x_n taken at t_n = t0 + n * dt_s.
std::vector<std::complex<double>> sampled_spectrum(const std::vector<double>& samples, double t0, double dt_s,
                                                   const std::vector<double>& frequencies);

/// Band-limited weighting used by signal_weighted: modulated Gaussian centred in
/// the band with the band half-width as its -39 dB point.
double band_signal_magnitude(double f, double band_lo, double band_hi);

}  // namespace tdie
