#include "wgqed/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wgqed {

namespace {
constexpr cplx I{0.0, 1.0};
}

FrequencyTrack instantaneous_frequency(const std::vector<double>& t, const std::vector<cplx>& values, double floor) {
  if (t.size() != values.size()) throw SpectralError("time and value lengths differ");
  if (t.size() < 3) throw SpectralError("instantaneous frequency needs at least 3 samples");
  double peak = 0.0;
  for (const auto& v : values) peak = std::max(peak, std::abs(v));
  const double cut = floor * peak;

  FrequencyTrack out;
  out.t = t;
  out.omega.assign(t.size(), std::nan(""));
  out.valid.assign(t.size(), false);
  for (std::size_t j = 1; j + 1 < t.size(); ++j) {
    if (!(std::abs(values[j - 1]) >= cut && std::abs(values[j]) >= cut && std::abs(values[j + 1]) >= cut) || peak == 0.0)
      continue;
    // phase increments are taken pairwise, which unwraps them implicitly
    const double back = std::arg(values[j] * std::conj(values[j - 1]));
    const double fwd = std::arg(values[j + 1] * std::conj(values[j]));
    out.omega[j] = -(back + fwd) / (t[j + 1] - t[j - 1]);
    out.valid[j] = true;
  }
  return out;
}

FrequencyTrack instantaneous_frequency(const ProbeSeries& series, double floor) {
  return instantaneous_frequency(series.t, series.values, floor);
}

Spectrum probe_spectrum(const ProbeSeries& series, const SpectrumWindow& w) {
  if (!(w.omega_max > w.omega_min)) throw SpectralError("empty frequency band");
  std::size_t lo = 0;
  while (lo < series.t.size() && series.t[lo] < w.t_begin) ++lo;
  std::size_t hi = series.t.size();
  while (hi > lo && series.t[hi - 1] > w.t_end) --hi;
  if (hi - lo < 2) throw SpectralError("spectrum window holds fewer than 2 samples");

  double peak = 0.0;
  for (std::size_t j = lo; j < hi; ++j) peak = std::max(peak, std::abs(series.values[j]));
  if (peak == 0.0) throw SpectralError("series is identically zero");
  if (w.require_compact &&
      (std::abs(series.values[lo]) > 1e-8 * peak || std::abs(series.values[hi - 1]) > 1e-8 * peak))
    throw SpectralError("series not compactly supported");

  const double dt = (series.t[hi - 1] - series.t[lo]) / static_cast<double>(hi - lo - 1);
  const double duration = series.t[hi - 1] - series.t[lo] + dt;

  Spectrum s;
  s.bin_width = 2.0 * std::numbers::pi / duration;
  std::size_t n = w.points;
  if (n == 0) n = static_cast<std::size_t>(std::ceil(4.0 * (w.omega_max - w.omega_min) / s.bin_width)) + 1;
  n = std::max<std::size_t>(n, 2);

  s.omega.resize(n);
  s.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double om = w.omega_min + (w.omega_max - w.omega_min) * static_cast<double>(i) / static_cast<double>(n - 1);
    // samples are uniform; rotate a phasor instead of calling exp per sample
    const cplx rot = std::exp(I * (om * dt));
    cplx ph = std::exp(I * (om * series.t[lo]));
    cplx acc = 0.0;
    for (std::size_t j = lo; j < hi; ++j) {
      acc += series.values[j] * ph;
      ph *= rot;
      if ((j - lo) % 256 == 255) ph = std::exp(I * (om * series.t[j + 1 < hi ? j + 1 : j]));
    }
    s.omega[i] = om;
    s.values[i] = acc * dt;
  }
  return s;
}

TransmissionEstimate transmission_estimate(const Spectrum& input, const Spectrum& output, double delay,
                                           double omega_0, double threshold) {
  if (input.omega != output.omega) throw SpectralError("input and output spectra use different frequency grids");
  double peak = 0.0;
  for (const auto& v : input.values) peak = std::max(peak, std::norm(v));
  if (peak == 0.0) throw SpectralError("input spectrum is zero");

  TransmissionEstimate est;
  for (std::size_t i = 0; i < input.omega.size(); ++i) {
    if (std::norm(input.values[i]) < threshold * peak) continue;
    const double om = input.omega[i];
    const cplx t = output.values[i] / input.values[i] * std::exp(-I * ((om - omega_0) * delay));
    est.omega.push_back(om);
    est.t.push_back(t);
    est.abs_t.push_back(std::abs(t));
  }
  return est;
}

SpectralMoments spectral_moments(const Spectrum& s) {
  double w = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < s.omega.size(); ++i) {
    const double p = std::norm(s.values[i]);
    w += p;
    m1 += p * s.omega[i];
    m2 += p * s.omega[i] * s.omega[i];
  }
  if (w == 0.0) throw SpectralError("spectrum is zero");
  SpectralMoments out;
  out.mean = m1 / w;
  out.stddev = std::sqrt(std::max(0.0, m2 / w - out.mean * out.mean));
  return out;
}

double peak_frequency(const Spectrum& s) {
  if (s.values.empty()) throw SpectralError("spectrum is empty");
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.values.size(); ++i)
    if (std::norm(s.values[i]) > std::norm(s.values[best])) best = i;
  return s.omega[best];
}

double power_at(const Spectrum& s, double omega) {
  if (s.omega.size() < 2) throw SpectralError("spectrum is empty");
  if (omega <= s.omega.front()) return std::norm(s.values.front());
  if (omega >= s.omega.back()) return std::norm(s.values.back());
  const auto it = std::upper_bound(s.omega.begin(), s.omega.end(), omega);
  const std::size_t i = static_cast<std::size_t>(it - s.omega.begin());
  const double f = (omega - s.omega[i - 1]) / (s.omega[i] - s.omega[i - 1]);
  return (1.0 - f) * std::norm(s.values[i - 1]) + f * std::norm(s.values[i]);
}

}  // namespace wgqed
