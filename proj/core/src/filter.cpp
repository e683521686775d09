#include "musepref/dsp/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace musepref::dsp {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

struct Zpk {
  std::vector<cd> zeros;
  std::vector<cd> poles;
  double gain = 1.0;
};

// Analog Butterworth lowpass prototype: unit-circle poles in the left
// half-plane, no finite zeros.
Zpk butter_prototype(int order) {
  Zpk zpk;
  zpk.poles.reserve(order);
  for (int m = -order + 1; m < order; m += 2) {
    double theta = kPi * m / (2.0 * order);
    zpk.poles.push_back(-std::exp(cd(0.0, theta)));
  }
  return zpk;
}

cd product_of_negated(const std::vector<cd>& roots) {
  cd acc(1.0, 0.0);
  for (const auto& r : roots) acc *= -r;
  return acc;
}

Zpk lp_to_lp(const Zpk& in, double wo) {
  Zpk out;
  const auto degree = in.poles.size() - in.zeros.size();
  for (const auto& z : in.zeros) out.zeros.push_back(z * wo);
  for (const auto& p : in.poles) out.poles.push_back(p * wo);
  out.gain = in.gain * std::pow(wo, static_cast<double>(degree));
  return out;
}

Zpk lp_to_hp(const Zpk& in, double wo) {
  Zpk out;
  const auto degree = in.poles.size() - in.zeros.size();
  for (const auto& z : in.zeros) out.zeros.push_back(wo / z);
  for (const auto& p : in.poles) out.poles.push_back(wo / p);
  for (std::size_t i = 0; i < degree; ++i) out.zeros.push_back(cd(0.0, 0.0));
  cd k = product_of_negated(in.zeros) / product_of_negated(in.poles);
  out.gain = in.gain * k.real();
  return out;
}

Zpk lp_to_bp(const Zpk& in, double wo, double bw) {
  Zpk out;
  const auto degree = in.poles.size() - in.zeros.size();
  auto transform = [&](const std::vector<cd>& roots, std::vector<cd>& dst) {
    for (const auto& r : roots) {
      cd scaled = r * (bw / 2.0);
      cd disc = std::sqrt(scaled * scaled - wo * wo);
      dst.push_back(scaled + disc);
      dst.push_back(scaled - disc);
    }
  };
  transform(in.zeros, out.zeros);
  transform(in.poles, out.poles);
  for (std::size_t i = 0; i < degree; ++i) out.zeros.push_back(cd(0.0, 0.0));
  out.gain = in.gain * std::pow(bw, static_cast<double>(degree));
  return out;
}

Zpk bilinear(const Zpk& in, double fs) {
  const double fs2 = 2.0 * fs;
  Zpk out;
  for (const auto& z : in.zeros) out.zeros.push_back((fs2 + z) / (fs2 - z));
  for (const auto& p : in.poles) out.poles.push_back((fs2 + p) / (fs2 - p));
  const auto degree = in.poles.size() - in.zeros.size();
  for (std::size_t i = 0; i < degree; ++i) out.zeros.push_back(cd(-1.0, 0.0));
  cd num(1.0, 0.0), den(1.0, 0.0);
  for (const auto& z : in.zeros) num *= (fs2 - z);
  for (const auto& p : in.poles) den *= (fs2 - p);
  out.gain = in.gain * (num / den).real();
  return out;
}

constexpr double kRealTol = 1e-9;

bool is_real(const cd& v) { return std::abs(v.imag()) <= kRealTol * (1.0 + std::abs(v)); }

// Greedy conjugate pairing into real-coefficient sections; the overall gain
// folds into the last section's numerator.
std::vector<Biquad> zpk_to_sos(Zpk zpk) {
  auto take_nearest = [](std::vector<cd>& pool, const cd& target) {
    std::size_t best = 0;
    double best_d = std::abs(pool[0] - target);
    for (std::size_t i = 1; i < pool.size(); ++i) {
      double d = std::abs(pool[i] - target);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    cd out = pool[best];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
    return out;
  };

  // worst (closest to unit circle) poles first so they get the nearest zeros
  std::sort(zpk.poles.begin(), zpk.poles.end(), [](const cd& a, const cd& b) {
    return std::abs(1.0 - std::abs(a)) < std::abs(1.0 - std::abs(b));
  });

  std::vector<Biquad> sections;
  std::vector<cd>& poles = zpk.poles;
  std::vector<cd>& zeros = zpk.zeros;
  while (!poles.empty()) {
    cd p1 = poles.front();
    poles.erase(poles.begin());
    Biquad s;
    if (!is_real(p1)) {
      take_nearest(poles, std::conj(p1));  // consume the conjugate partner
      s.a1 = -2.0 * p1.real();
      s.a2 = std::norm(p1);
      cd z1 = take_nearest(zeros, p1);
      if (is_real(z1) && !zeros.empty()) {
        // keep coefficients real: a real zero pairs with another real one
        cd z2 = take_nearest(zeros, z1);
        s.b0 = 1.0;
        s.b1 = -(z1.real() + z2.real());
        s.b2 = z1.real() * z2.real();
      } else if (!is_real(z1)) {
        take_nearest(zeros, std::conj(z1));  // consume the conjugate partner
        s.b0 = 1.0;
        s.b1 = -2.0 * z1.real();
        s.b2 = std::norm(z1);
      } else {
        s.b0 = 1.0;
        s.b1 = -z1.real();
        s.b2 = 0.0;
      }
    } else {
      // gather a second real pole if one exists
      auto real_it = std::find_if(poles.begin(), poles.end(), is_real);
      if (real_it != poles.end()) {
        cd p2 = *real_it;
        poles.erase(real_it);
        s.a1 = -(p1.real() + p2.real());
        s.a2 = p1.real() * p2.real();
        cd z1 = take_nearest(zeros, p1);
        if (!zeros.empty()) {
          cd z2 = take_nearest(zeros, is_real(z1) ? cd(z1.real(), 0) : std::conj(z1));
          s.b0 = 1.0;
          s.b1 = -(z1.real() + z2.real());
          s.b2 = z1.real() * z2.real();
        } else {
          s.b0 = 1.0;
          s.b1 = -z1.real();
          s.b2 = 0.0;
        }
      } else {
        s.a1 = -p1.real();
        s.a2 = 0.0;
        if (!zeros.empty()) {
          cd z1 = take_nearest(zeros, p1);
          s.b0 = 1.0;
          s.b1 = -z1.real();
          s.b2 = 0.0;
        } else {
          s.b0 = 1.0;
          s.b1 = 0.0;
          s.b2 = 0.0;
        }
      }
    }
    sections.push_back(s);
  }
  // per-section gain stays 1; the overall k folds into the last section
  if (!sections.empty()) {
    auto& last = sections.back();
    last.b0 *= zpk.gain;
    last.b1 *= zpk.gain;
    last.b2 *= zpk.gain;
  }
  return sections;
}

void valid_cutoff_or_throw(double f, double fs) {
  if (!(f > 0.0) || !(f < fs / 2.0))
    throw InvalidCutoff("cutoff " + std::to_string(f) + " Hz outside (0, " +
                        std::to_string(fs / 2.0) + ") for fs=" + std::to_string(fs));
}

double prewarp(double f, double fs) { return 2.0 * fs * std::tan(kPi * f / fs); }

}  // namespace

std::string to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::Notch: return "notch";
    case FilterKind::HighPass: return "highpass";
    case FilterKind::BandPass: return "bandpass";
    case FilterKind::LowPass: return "lowpass";
  }
  return "?";
}

SosCascade design_butterworth(int order, FilterKind kind,
                              std::span<const double> cutoffs_hz,
                              double sample_rate_hz) {
  if (order < 1) throw InvalidCutoff("filter order must be >= 1");
  if (!(sample_rate_hz > 0.0)) throw InvalidCutoff("sample rate must be > 0");

  Zpk analog = butter_prototype(order);
  Zpk shaped;
  switch (kind) {
    case FilterKind::HighPass: {
      if (cutoffs_hz.size() != 1) throw InvalidCutoff("highpass takes one cutoff");
      valid_cutoff_or_throw(cutoffs_hz[0], sample_rate_hz);
      shaped = lp_to_hp(analog, prewarp(cutoffs_hz[0], sample_rate_hz));
      break;
    }
    case FilterKind::LowPass: {
      if (cutoffs_hz.size() != 1) throw InvalidCutoff("lowpass takes one cutoff");
      valid_cutoff_or_throw(cutoffs_hz[0], sample_rate_hz);
      shaped = lp_to_lp(analog, prewarp(cutoffs_hz[0], sample_rate_hz));
      break;
    }
    case FilterKind::BandPass: {
      if (cutoffs_hz.size() != 2) throw InvalidCutoff("bandpass takes two cutoffs");
      valid_cutoff_or_throw(cutoffs_hz[0], sample_rate_hz);
      valid_cutoff_or_throw(cutoffs_hz[1], sample_rate_hz);
      if (!(cutoffs_hz[0] < cutoffs_hz[1]))
        throw InvalidCutoff("bandpass cutoffs must be increasing");
      double w1 = prewarp(cutoffs_hz[0], sample_rate_hz);
      double w2 = prewarp(cutoffs_hz[1], sample_rate_hz);
      shaped = lp_to_bp(analog, std::sqrt(w1 * w2), w2 - w1);
      break;
    }
    case FilterKind::Notch:
      throw InvalidCutoff("use design_notch for notch filters");
  }
  Zpk digital = bilinear(shaped, sample_rate_hz);

  SosCascade sos;
  sos.sections = zpk_to_sos(std::move(digital));
  sos.sample_rate_hz = sample_rate_hz;
  sos.spec.kind = kind;
  sos.spec.order = order;
  sos.spec.cutoffs_hz.assign(cutoffs_hz.begin(), cutoffs_hz.end());
  return sos;
}

SosCascade design_notch(double freq_hz, double q, double sample_rate_hz) {
  if (!(freq_hz > 0.0) || !(freq_hz < sample_rate_hz / 2.0))
    throw InvalidCutoff("notch frequency outside (0, Nyquist)");
  if (!(q > 0.0)) throw InvalidCutoff("notch q must be > 0");

  const double w0 = 2.0 * kPi * freq_hz / sample_rate_hz;
  const double alpha = std::sin(w0) / (2.0 * q);
  const double cw = std::cos(w0);
  const double a0 = 1.0 + alpha;

  Biquad s;
  s.b0 = 1.0 / a0;
  s.b1 = -2.0 * cw / a0;
  s.b2 = 1.0 / a0;
  s.a1 = -2.0 * cw / a0;
  s.a2 = (1.0 - alpha) / a0;

  SosCascade sos;
  sos.sections = {s};
  sos.sample_rate_hz = sample_rate_hz;
  sos.spec.kind = FilterKind::Notch;
  sos.spec.order = 2;
  sos.spec.notch_freq_hz = freq_hz;
  sos.spec.notch_q = q;
  return sos;
}

std::complex<double> evaluate_response(const SosCascade& sos, double freq_hz) {
  const double w = 2.0 * kPi * freq_hz / sos.sample_rate_hz;
  const cd z1 = std::exp(cd(0.0, -w));
  const cd z2 = z1 * z1;
  cd h(1.0, 0.0);
  for (const auto& s : sos.sections) {
    h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
  }
  return h;
}

double magnitude_db(const SosCascade& sos, double freq_hz) {
  return 20.0 * std::log10(std::abs(evaluate_response(sos, freq_hz)));
}

namespace {

// One section over the whole signal, DF2T, started at the steady state of a
// step with the signal's first value. Keeps a constant input exactly at its
// steady-state output from sample zero.
void run_section(const Biquad& s, std::span<double> x) {
  const double g = s.dc_gain();
  const double x0 = x.empty() ? 0.0 : x[0];
  double s1 = ((s.b1 + s.b2) - (s.a1 + s.a2) * g) * x0;
  double s2 = (s.b2 - s.a2 * g) * x0;
  for (auto& v : x) {
    const double in = v;
    const double out = s.b0 * in + s1;
    s1 = s.b1 * in - s.a1 * out + s2;
    s2 = s.b2 * in - s.a2 * out;
    v = out;
  }
}

}  // namespace

void filtfilt_inplace(const SosCascade& sos, std::span<double> x) {
  const std::size_t padlen = sos.pad_len();
  if (x.size() <= 3 * padlen)
    throw SignalTooShort("signal length " + std::to_string(x.size()) +
                         " <= 3x padding length " + std::to_string(3 * padlen));

  const std::size_t n = x.size();
  std::vector<double> ext(n + 2 * padlen);
  const double first = x[0];
  const double last = x[n - 1];
  for (std::size_t i = 0; i < padlen; ++i)
    ext[i] = 2.0 * first - x[padlen - i];
  std::copy(x.begin(), x.end(), ext.begin() + static_cast<std::ptrdiff_t>(padlen));
  for (std::size_t i = 0; i < padlen; ++i)
    ext[padlen + n + i] = 2.0 * last - x[n - 2 - i];

  for (const auto& s : sos.sections) run_section(s, ext);
  std::reverse(ext.begin(), ext.end());
  for (const auto& s : sos.sections) run_section(s, ext);
  std::reverse(ext.begin(), ext.end());

  std::copy(ext.begin() + static_cast<std::ptrdiff_t>(padlen),
            ext.begin() + static_cast<std::ptrdiff_t>(padlen + n), x.begin());
}

std::vector<double> filtfilt(const SosCascade& sos, std::span<const double> x) {
  std::vector<double> out(x.begin(), x.end());
  filtfilt_inplace(sos, out);
  return out;
}

}  // namespace musepref::dsp
