#pragma once

#include <span>
#include <vector>

namespace musepref::spectral {

struct WelchParams {
  double window_s = 4.0;
  double overlap = 0.5;  // fraction of the window, in [0, 1)
};

struct Psd {
  std::vector<double> freqs_hz;
  std::vector<double> density;  // power per Hz, one-sided
  std::size_t n_segments = 0;
};

// Hann-windowed, overlapped, averaged periodogram with per-segment mean
// removal, density-scaled so the one-sided integral over [0, Nyquist]
// recovers the signal variance.
Psd welch_psd(std::span<const double> signal, double sample_rate_hz,
              const WelchParams& params = {});

}  // namespace musepref::spectral
