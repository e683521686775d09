#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "musepref/common/error.hpp"

namespace musepref::dsp {

enum class FilterKind { Notch, HighPass, BandPass, LowPass };

std::string to_string(FilterKind kind);

struct FilterSpec {
  FilterKind kind = FilterKind::HighPass;
  int order = 1;
  std::vector<double> cutoffs_hz;  // one (HP/LP) or two (BP)
  double notch_freq_hz = 0.0;
  double notch_q = 0.0;
};

// One second-order section, normalized so a0 = 1. First-order factors are
// carried with b2 = a2 = 0.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;

  double dc_gain() const { return (b0 + b1 + b2) / (1.0 + a1 + a2); }
};

struct SosCascade {
  std::vector<Biquad> sections;
  double sample_rate_hz = 0.0;
  FilterSpec spec;

  std::size_t size() const { return sections.size(); }
  // odd-reflection padding used by filtfilt
  std::size_t pad_len() const { return 30 * sections.size(); }
};

// Zero-phase Butterworth designs realized as biquad cascades; the -3 dB
// point lands exactly on the requested cutoff (bilinear transform with
// prewarping).
SosCascade design_butterworth(int order, FilterKind kind,
                              std::span<const double> cutoffs_hz,
                              double sample_rate_hz);

// Second-order notch with zeros on the unit circle at the target frequency.
SosCascade design_notch(double freq_hz, double q, double sample_rate_hz);

// Complex frequency response of the cascade at f (single forward pass; the
// zero-phase application squares the magnitude).
std::complex<double> evaluate_response(const SosCascade& sos, double freq_hz);

double magnitude_db(const SosCascade& sos, double freq_hz);

// Forward-backward zero-phase filtering with odd-reflection padding and
// steady-state initial conditions per section.
std::vector<double> filtfilt(const SosCascade& sos, std::span<const double> x);

void filtfilt_inplace(const SosCascade& sos, std::span<double> x);

}  // namespace musepref::dsp
