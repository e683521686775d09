#include "musepref/spectral/welch.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "musepref/common/error.hpp"
#include "musepref/spectral/fft.hpp"

namespace musepref::spectral {

Psd welch_psd(std::span<const double> signal, double sample_rate_hz,
              const WelchParams& params) {
  if (!(sample_rate_hz > 0.0))
    throw std::invalid_argument("welch_psd: sample rate must be > 0");
  if (params.overlap < 0.0 || params.overlap >= 1.0)
    throw std::invalid_argument("welch_psd: overlap must be in [0, 1)");

  const auto window_len =
      static_cast<std::size_t>(std::lround(params.window_s * sample_rate_hz));
  if (window_len < 8)
    throw std::invalid_argument("welch_psd: window too short");
  if (signal.size() < window_len)
    throw SignalTooShort("signal of " + std::to_string(signal.size()) +
                         " samples is shorter than one " +
                         std::to_string(window_len) + "-sample window");

  const auto overlap_len =
      static_cast<std::size_t>(std::floor(params.overlap * window_len));
  const std::size_t step = window_len - overlap_len;
  const std::size_t n_segments = 1 + (signal.size() - window_len) / step;
  const std::size_t nfft = next_pow2(window_len);
  const std::size_t bins = nfft / 2 + 1;

  // periodic Hann
  std::vector<double> window(window_len);
  double window_power = 0.0;
  for (std::size_t i = 0; i < window_len; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi *
                                     static_cast<double>(i) /
                                     static_cast<double>(window_len));
    window_power += window[i] * window[i];
  }

  std::vector<double> segment(nfft, 0.0);
  std::vector<std::complex<double>> spectrum;
  std::vector<double> acc(bins, 0.0);

  for (std::size_t s = 0; s < n_segments; ++s) {
    const double* x = signal.data() + s * step;
    double mean = 0.0;
    for (std::size_t i = 0; i < window_len; ++i) mean += x[i];
    mean /= static_cast<double>(window_len);
    for (std::size_t i = 0; i < window_len; ++i)
      segment[i] = (x[i] - mean) * window[i];
    for (std::size_t i = window_len; i < nfft; ++i) segment[i] = 0.0;

    rfft(segment, spectrum);
    for (std::size_t k = 0; k < bins; ++k) acc[k] += std::norm(spectrum[k]);
  }

  const double scale =
      1.0 / (sample_rate_hz * window_power * static_cast<double>(n_segments));
  Psd psd;
  psd.n_segments = n_segments;
  psd.freqs_hz.resize(bins);
  psd.density.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    psd.freqs_hz[k] =
        static_cast<double>(k) * sample_rate_hz / static_cast<double>(nfft);
    double d = acc[k] * scale;
    if (k != 0 && k != bins - 1) d *= 2.0;  // one-sided
    psd.density[k] = d;
  }
  return psd;
}

}  // namespace musepref::spectral
