#include "musepref/spectral/bands.hpp"

#include <algorithm>
#include <cmath>

#include "musepref/common/error.hpp"

namespace musepref::spectral {

const std::array<BandDefinition, 3>& canonical_bands() {
  static const std::array<BandDefinition, 3> bands = {
      BandDefinition{"theta", 4.0, 7.0},
      BandDefinition{"alpha", 8.0, 13.0},
      BandDefinition{"beta", 13.0, 30.0}};
  return bands;
}

namespace {

double interp(std::span<const double> xs, std::span<const double> ys, double x) {
  auto it = std::lower_bound(xs.begin(), xs.end(), x);
  if (it == xs.begin()) return ys.front();
  if (it == xs.end()) return ys.back();
  const auto hi = static_cast<std::size_t>(it - xs.begin());
  const auto lo = hi - 1;
  const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + t * (ys[hi] - ys[lo]);
}

double integrate_band(std::span<const double> freqs, std::span<const double> density,
                      double lo, double hi) {
  // ordinates: interpolated lo edge, interior grid points, interpolated hi edge
  double prev_f = lo;
  double prev_y = interp(freqs, density, lo);
  double area = 0.0;
  auto it = std::upper_bound(freqs.begin(), freqs.end(), lo);
  for (; it != freqs.end() && *it < hi; ++it) {
    const auto k = static_cast<std::size_t>(it - freqs.begin());
    area += 0.5 * (prev_y + density[k]) * (*it - prev_f);
    prev_f = *it;
    prev_y = density[k];
  }
  const double hi_y = interp(freqs, density, hi);
  area += 0.5 * (prev_y + hi_y) * (hi - prev_f);
  return area;
}

}  // namespace

std::vector<double> band_powers(std::span<const double> freqs_hz,
                                std::span<const double> density,
                                std::span<const BandDefinition> bands) {
  if (freqs_hz.size() != density.size() || freqs_hz.size() < 2)
    throw std::invalid_argument("band_powers: malformed spectrum");
  std::vector<double> powers;
  powers.reserve(bands.size());
  for (const auto& band : bands) {
    if (band.lo_hz < freqs_hz.front() || band.hi_hz > freqs_hz.back())
      throw BandOutsideGrid("band " + band.name + " [" +
                            std::to_string(band.lo_hz) + ", " +
                            std::to_string(band.hi_hz) +
                            "] outside the frequency grid");
    if (!(band.lo_hz < band.hi_hz))
      throw BandOutsideGrid("band " + band.name + " is empty");
    powers.push_back(integrate_band(freqs_hz, density, band.lo_hz, band.hi_hz));
  }
  return powers;
}

std::array<double, 3> band_powers_tab(std::span<const double> freqs_hz,
                                      std::span<const double> density) {
  auto p = band_powers(freqs_hz, density, canonical_bands());
  return {p[0], p[1], p[2]};
}

std::array<double, 3> normalize_bands(double theta, double alpha, double beta) {
  const double total = theta + alpha + beta;
  if (!(total > 0.0))
    throw ZeroPower("band powers sum to zero; cannot normalize");
  return {theta / total, alpha / total, beta / total};
}

}  // namespace musepref::spectral
