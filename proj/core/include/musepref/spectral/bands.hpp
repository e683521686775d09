#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

namespace musepref::spectral {

struct BandDefinition {
  std::string name;
  double lo_hz = 0.0;
  double hi_hz = 0.0;
};

// theta 4-7, alpha 8-13, beta 13-30. The 13 Hz ordinate is the shared
// endpoint of alpha and beta; under trapezoidal integration it contributes
// measure zero to each, so neither band double-counts power.
const std::array<BandDefinition, 3>& canonical_bands();

// Trapezoidal integral of the density over [lo, hi] per band, with linear
// interpolation at the band edges.
std::vector<double> band_powers(std::span<const double> freqs_hz,
                                std::span<const double> density,
                                std::span<const BandDefinition> bands);

std::array<double, 3> band_powers_tab(std::span<const double> freqs_hz,
                                      std::span<const double> density);

// Divides each band power by their sum.
std::array<double, 3> normalize_bands(double theta, double alpha, double beta);

}  // namespace musepref::spectral
