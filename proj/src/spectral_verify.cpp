#include "tdie/spectral_verify.hpp"

#include "tdie/constants.hpp"
#include "tdie/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tdie {

namespace {

using cplx = std::complex<double>;

// Gauss nodes and weights covering [a, b] split at the given breakpoints.
struct TimeRule {
  std::vector<double> t;
  std::vector<double> w;
};

TimeRule piecewise_rule(std::vector<double> breaks, double max_width, int npts) {
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  TimeRule rule;
  const GaussRule& g = gauss_legendre(npts);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i], b = breaks[i + 1];
    if (!(b > a)) continue;
    const int sub = std::max(1, static_cast<int>(std::ceil((b - a) / max_width)));
    const double h = (b - a) / sub;
    for (int s = 0; s < sub; ++s) {
      const double mid = a + (s + 0.5) * h;
      for (std::size_t q = 0; q < g.nodes.size(); ++q) {
        rule.t.push_back(mid + 0.5 * h * g.nodes[q]);
        rule.w.push_back(0.5 * h * g.weights[q]);
      }
    }
  }
  return rule;
}

std::vector<cplx> fourier(const TimeRule& rule, const std::vector<double>& values,
                          const std::vector<double>& freqs) {
  std::vector<cplx> out(freqs.size());
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    const double w = 2.0 * kPi * freqs[k];
    cplx s = 0.0;
    for (std::size_t i = 0; i < rule.t.size(); ++i) s += rule.w[i] * values[i] * std::polar(1.0, -w * rule.t[i]);
    out[k] = s;
  }
  return out;
}

double relative_l2(const std::vector<cplx>& approx, const std::vector<cplx>& exact,
                   const std::vector<double>& weight) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < exact.size(); ++k) {
    const double w2 = weight[k] * weight[k];
    num += w2 * std::norm(approx[k] - exact[k]);
    den += w2 * std::norm(exact[k]);
  }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

}  // namespace

LegendreMap SpectrumStudy::map() const {
  const double tau = R / kSpeedOfLight;
  return make_map(tau - 0.5 * window * dt, tau + 0.5 * window * dt);
}

BandLimits SpectrumStudy::band() const {
  return BandLimits{2.0 * kPi * upper_edge(), kPi / (kSpeedOfLight * dt)};
}

double band_signal_magnitude(double f, double band_lo, double band_hi) {
  const double f0 = 0.5 * (band_lo + band_hi);
  const double B = 0.5 * (band_hi - band_lo);
  const double sigma_f = B / 3.0;
  return std::exp(-0.5 * std::pow((std::abs(f) - f0) / sigma_f, 2));
}

std::vector<cplx> sampled_spectrum(const std::vector<double>& samples, double t0, double dt_s,
                                   const std::vector<double>& frequencies) {
  std::vector<cplx> out(frequencies.size());
  for (std::size_t k = 0; k < frequencies.size(); ++k) {
    const double w = 2.0 * kPi * frequencies[k];
    cplx s = 0.0;
    for (std::size_t n = 0; n < samples.size(); ++n) s += samples[n] * std::polar(1.0, -w * (t0 + n * dt_s));
    out[k] = s * dt_s;
  }
  return out;
}

std::vector<SpectrumReport> run_spectrum_study(const SpectrumStudy& study) {
  if (study.order < 0) throw std::invalid_argument("spectrum: basis order must be >= 0");
  if (!(study.dt > 0.0) || !(study.R > 0.0)) throw std::invalid_argument("spectrum: dt and R must be positive");
  if (study.window < study.order + 1) throw std::invalid_argument("spectrum: window must be at least p+1 time steps");
  const double f_hi = study.upper_edge();
  if (!(f_hi > study.band_lo) || study.band_lo < 0.0) throw std::invalid_argument("spectrum: empty band");
  for (int N : study.N_list) {
    if (N < 0) throw std::invalid_argument("spectrum: N must be >= 0");
  }

  const TemporalBasis basis(study.order, study.dt);
  const LegendreMap map = study.map();
  const double tau = study.R / kSpeedOfLight;
  const double t_begin = basis.profile().support_begin() + map.alpha;
  const double t_end = basis.profile().support_end() + map.beta;

  std::vector<double> freqs;
  std::vector<double> weight;
  std::vector<cplx> exact;
  std::vector<std::vector<double>> approx_values(study.N_list.size());
  std::vector<std::vector<cplx>> approx(study.N_list.size());

  if (study.method == SpectrumMethod::kContinuous) {
    const int nf = std::max(2, study.num_frequencies);
    for (int k = 0; k < nf; ++k) freqs.push_back(study.band_lo + (f_hi - study.band_lo) * k / (nf - 1));
    std::vector<double> breaks = {t_begin, t_end};
    for (double knot : basis.profile().knots()) {
      breaks.push_back(knot + map.alpha);
      breaks.push_back(knot + map.beta);
      breaks.push_back(knot + tau);
    }
    int n_max = 0;
    for (int N : study.N_list) n_max = std::max(n_max, N);
    // polynomial of degree <= N + p + 1 per piece, plus room for the oscillation
    const TimeRule rule = piecewise_rule(breaks, study.dt, (n_max + study.order + 2) / 2 + 12);
    std::vector<double> ex(rule.t.size());
    for (std::size_t i = 0; i < rule.t.size(); ++i) ex[i] = exact_convolution(basis, study.R, rule.t[i]);
    exact = fourier(rule, ex, freqs);
    for (std::size_t n = 0; n < study.N_list.size(); ++n) {
      std::vector<double> v(rule.t.size());
      for (std::size_t i = 0; i < rule.t.size(); ++i) v[i] = convolve_basis(basis, study.N_list[n], study.R, rule.t[i], map);
      approx[n] = fourier(rule, v, freqs);
    }
  } else {
    const double ts = study.dt / std::max(1, study.samples_per_dt);
    if (1.0 / ts < 8.0 * f_hi) throw std::invalid_argument("spectrum: sampling rate below 8x the band edge");
    const int n_samples = static_cast<int>(std::ceil((t_end - t_begin) / ts)) + 1;
    const int padded = 4 * n_samples;
    const double df = 1.0 / (padded * ts);
    for (int k = 0; k * df <= f_hi * (1.0 + 1e-12); ++k) {
      if (k * df >= study.band_lo) freqs.push_back(k * df);
    }
    std::vector<double> ex(n_samples);
    for (int i = 0; i < n_samples; ++i) ex[i] = exact_convolution(basis, study.R, t_begin + i * ts);
    exact = sampled_spectrum(ex, t_begin, ts, freqs);
    for (std::size_t n = 0; n < study.N_list.size(); ++n) {
      std::vector<double> v(n_samples);
      for (int i = 0; i < n_samples; ++i) v[i] = convolve_basis(basis, study.N_list[n], study.R, t_begin + i * ts, map);
      approx[n] = sampled_spectrum(v, t_begin, ts, freqs);
    }
  }

  weight.resize(freqs.size(), 1.0);
  if (study.signal_weighted) {
    for (std::size_t k = 0; k < freqs.size(); ++k) weight[k] = band_signal_magnitude(freqs[k], study.band_lo, f_hi);
  }

  std::vector<SpectrumReport> reports;
  for (std::size_t n = 0; n < study.N_list.size(); ++n) {
    SpectrumReport r;
    r.N = study.N_list[n];
    r.frequencies = freqs;
    for (std::size_t k = 0; k < freqs.size(); ++k) {
      r.exact_mag.push_back(weight[k] * std::abs(exact[k]));
      r.approx_mag.push_back(weight[k] * std::abs(approx[n][k]));
    }
    r.inband_l2_error = relative_l2(approx[n], exact, weight);
    reports.push_back(std::move(r));
  }
  return reports;
}

}  // namespace tdie
