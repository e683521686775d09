#pragma once

#include <complex>
#include <span>
#include <vector>

namespace musepref::spectral {

// Real-to-complex FFT (FFTW-backed). Output holds n/2 + 1 bins.
// Thread-safe; plans are cached per thread and size.
void rfft(std::span<const double> in, std::vector<std::complex<double>>& out);

std::size_t next_pow2(std::size_t n);

}  // namespace musepref::spectral
