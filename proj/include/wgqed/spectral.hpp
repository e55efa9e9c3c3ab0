#pragma once

// Phase and spectral analysis of recorded probe series.

#include <limits>
#include <stdexcept>
#include <vector>

#include "wgqed/solver.hpp"

namespace wgqed {

class SpectralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FrequencyTrack {
  std::vector<double> t;
  std::vector<double> omega;
  std::vector<bool> valid;  // false where the amplitude is below the floor
};

/// omega_inst = -d arg(e)/dt by central differences of the unwrapped phase,
/// so e ~ exp(-i w t) gives +w. Samples with |e| < floor * max|e| and the two
/// end samples are masked.
FrequencyTrack instantaneous_frequency(const std::vector<double>& t, const std::vector<cplx>& values,
                                       double floor = 1e-6);
FrequencyTrack instantaneous_frequency(const ProbeSeries& series, double floor = 1e-6);

struct SpectrumWindow {
  double omega_min = -1.0;
  double omega_max = 1.0;
  std::size_t points = 0;  // 0: four samples per resolution bin
  double t_begin = -std::numeric_limits<double>::infinity();
  double t_end = std::numeric_limits<double>::infinity();
  bool require_compact = true;
};

struct Spectrum {
  std::vector<double> omega;
  std::vector<cplx> values;
  double bin_width = 0.0;  // 2 pi / window duration
};

/// S(w) = sum_j v_j exp(i w t_j) dt on the window. Series carry the carrier
/// phase, so w is an absolute frequency. Throws "series not compactly
/// supported" when either end of the window exceeds 1e-8 of the peak.
Spectrum probe_spectrum(const ProbeSeries& series, const SpectrumWindow& window);

struct TransmissionEstimate {
  std::vector<double> omega;   // valid band only
  std::vector<cplx> t;         // output / input, delay removed
  std::vector<double> abs_t;
};

/// Ratio of output to input spectra on bins where |input|^2 >= threshold *
/// peak. `delay` is the free-propagation time between the probes; its phase
/// exp(i (w - w0) delay) is divided out.
TransmissionEstimate transmission_estimate(const Spectrum& input, const Spectrum& output, double delay = 0.0,
                                           double omega_0 = 0.0, double threshold = 0.01);

/// Power-weighted mean and standard deviation of a spectrum.
struct SpectralMoments {
  double mean = 0.0;
  double stddev = 0.0;
};
SpectralMoments spectral_moments(const Spectrum& s);

/// Frequency of the largest |S|.
double peak_frequency(const Spectrum& s);

/// |S(w)|^2 linearly interpolated at w.
double power_at(const Spectrum& s, double omega);

}  // namespace wgqed
