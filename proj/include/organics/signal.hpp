#pragma once

// Spectral peak detection and envelope helpers for simulated time series.

#include "organics/core.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <vector>

namespace organics::signal {

struct Spectrum {
  std::vector<double> freqs_hz;
  std::vector<double> magnitude;
  double bin_hz = 0.0;  // resolution of the unpadded record, 1 / duration
};

// One-sided amplitude spectrum of a real series sampled every dt_ms. The
// mean is removed and the record is zero-padded to pad_factor times its
// length (rounded up to a power of two) to refine peak positions.
inline Spectrum amplitude_spectrum(const std::vector<double>& samples, double dt_ms,
                                   int pad_factor = 8) {
  if (samples.size() < 4) throw ParameterError("amplitude_spectrum: need at least 4 samples");
  if (!(dt_ms > 0.0)) throw ParameterError("amplitude_spectrum: dt must be positive");
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= static_cast<double>(samples.size());

  std::size_t n = 1;
  while (n < samples.size() * static_cast<std::size_t>(std::max(1, pad_factor))) n <<= 1;
  std::vector<double> buf(n, 0.0);
  for (std::size_t i = 0; i < samples.size(); ++i) buf[i] = samples[i] - mean;

  Eigen::FFT<double> fft;
  std::vector<cplx> out;
  fft.fwd(out, buf);

  const double fs = 1000.0 / dt_ms;
  Spectrum s;
  s.bin_hz = fs / static_cast<double>(samples.size());
  const std::size_t half = n / 2 + 1;
  s.freqs_hz.resize(half);
  s.magnitude.resize(half);
  for (std::size_t k = 0; k < half; ++k) {
    s.freqs_hz[k] = fs * static_cast<double>(k) / static_cast<double>(n);
    s.magnitude[k] = std::abs(out[k]) * 2.0 / static_cast<double>(samples.size());
  }
  return s;
}

struct Peak {
  double freq_hz = 0.0;
  double magnitude = 0.0;
};

// Local maxima of the spectrum, largest first.
inline std::vector<Peak> spectral_peaks(const Spectrum& s, std::size_t count) {
  std::vector<Peak> peaks;
  const auto& m = s.magnitude;
  for (std::size_t k = 1; k + 1 < m.size(); ++k)
    if (m[k] > m[k - 1] && m[k] >= m[k + 1]) peaks.push_back({s.freqs_hz[k], m[k]});
  std::sort(peaks.begin(), peaks.end(),
            [](const Peak& l, const Peak& r) { return l.magnitude > r.magnitude; });
  if (peaks.size() > count) peaks.resize(count);
  return peaks;
}

inline double dominant_frequency(const std::vector<double>& samples, double dt_ms) {
  const auto peaks = spectral_peaks(amplitude_spectrum(samples, dt_ms), 1);
  if (peaks.empty()) return 0.0;
  return peaks.front().freq_hz;
}

// Indices of strict interior local maxima.
inline std::vector<std::size_t> local_maxima(const std::vector<double>& v) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 1; k + 1 < v.size(); ++k)
    if (v[k] > v[k - 1] && v[k] > v[k + 1]) idx.push_back(k);
  return idx;
}

}  // namespace organics::signal
