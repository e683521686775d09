#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "musepref/common/rng.hpp"
#include "musepref/dsp/car.hpp"
#include "musepref/dsp/filter.hpp"
#include "test_util.hpp"

using namespace musepref;
using dsp::FilterKind;

namespace {

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Independent closed-form oracles. A digital Butterworth designed through
// the bilinear transform matches the analog prototype magnitude evaluated at
// the prewarped frequency, so these are exact references, not approximations.
// ---------------------------------------------------------------------------

double warp(double f, double fs) { return 2.0 * fs * std::tan(kPi * f / fs); }

double oracle_hp_db(int order, double fc, double f, double fs) {
  const double ratio = warp(fc, fs) / warp(f, fs);
  const double mag2 = 1.0 / (1.0 + std::pow(ratio, 2.0 * order));
  return 10.0 * std::log10(mag2);
}

double oracle_lp_db(int order, double fc, double f, double fs) {
  const double ratio = warp(f, fs) / warp(fc, fs);
  const double mag2 = 1.0 / (1.0 + std::pow(ratio, 2.0 * order));
  return 10.0 * std::log10(mag2);
}

double oracle_bp_db(int order, double f1, double f2, double f, double fs) {
  const double w1 = warp(f1, fs), w2 = warp(f2, fs), w = warp(f, fs);
  const double w0 = std::sqrt(w1 * w2), bw = w2 - w1;
  const double lp = (w * w - w0 * w0) / (bw * w);
  const double mag2 = 1.0 / (1.0 + std::pow(lp * lp, static_cast<double>(order)));
  return 10.0 * std::log10(mag2);
}

struct ToneFit {
  double amplitude;
  double phase;
};

// amplitude/phase of a tone via quadrature projection
ToneFit fit_tone(std::span<const double> y, double freq_hz, double fs,
                 std::size_t begin, std::size_t end) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    const double arg = 2.0 * kPi * freq_hz * static_cast<double>(i) / fs;
    s += y[i] * std::sin(arg);
    c += y[i] * std::cos(arg);
  }
  const double n = static_cast<double>(end - begin);
  s *= 2.0 / n;
  c *= 2.0 / n;
  return {std::hypot(s, c), std::atan2(c, s)};
}

bool close_db(double actual, double expected, double tol_db = 0.1) {
  return std::abs(actual - expected) <= tol_db;
}

}  // namespace

TEST_CASE("highpass magnitude matches the closed-form oracle") {
  const double fs = 1200.0;
  const std::array<double, 1> fc = {0.1};
  auto sos = dsp::design_butterworth(5, FilterKind::HighPass, fc, fs);

  CHECK(sos.sections.size() == 3);
  CHECK(close_db(dsp::magnitude_db(sos, 0.1), -10.0 * std::log10(2.0)));

  const double probes[] = {0.05, 0.08, 0.1,  0.15, 0.2,  0.3,  0.5,
                           0.8,  1.0,  2.0,  5.0,  10.0, 20.0, 50.0,
                           80.0, 120., 200., 300., 450., 580.};
  for (double f : probes) {
    const double expected = oracle_hp_db(5, 0.1, f, fs);
    if (expected > -60.0)  // representable band; the deep floor is below
      CHECK(close_db(dsp::magnitude_db(sos, f), expected));
  }
  CHECK(dsp::magnitude_db(sos, 0.001) < -40.0);
}

TEST_CASE("bandpass magnitude matches the closed-form oracle") {
  const double fs = 1200.0;
  const std::array<double, 2> fc = {2.0, 45.0};
  auto sos = dsp::design_butterworth(4, FilterKind::BandPass, fc, fs);

  CHECK(sos.sections.size() == 4);
  const double center = std::sqrt(2.0 * 45.0);
  CHECK(std::abs(dsp::magnitude_db(sos, center)) < 0.1);

  const double probes[] = {0.5,  1.0,  1.5, 2.0, 3.0,  5.0,  8.0,
                           10.0, 15.0, 20., 25., 30.0, 35.0, 40.0,
                           45.0, 60.0, 90., 150, 300., 500.};
  for (double f : probes) {
    const double expected = oracle_bp_db(4, 2.0, 45.0, f, fs);
    if (expected > -60.0) {
      CHECK(close_db(dsp::magnitude_db(sos, f), expected));
    } else {
      CHECK(dsp::magnitude_db(sos, f) < -50.0);
    }
  }
  CHECK(close_db(dsp::magnitude_db(sos, 2.0), -10.0 * std::log10(2.0)));
  CHECK(close_db(dsp::magnitude_db(sos, 45.0), -10.0 * std::log10(2.0)));
}

TEST_CASE("lowpass magnitude matches the closed-form oracle") {
  const double fs = 1200.0;
  const std::array<double, 1> fc = {135.0};
  auto sos = dsp::design_butterworth(8, FilterKind::LowPass, fc, fs);
  for (double f : {10.0, 50.0, 100.0, 135.0, 200.0}) {
    const double expected = oracle_lp_db(8, 135.0, f, fs);
    if (expected > -60.0) CHECK(close_db(dsp::magnitude_db(sos, f), expected));
  }
}

TEST_CASE("cutoffs at or beyond Nyquist are rejected") {
  const std::array<double, 1> bad = {700.0};
  CHECK_THROWS_AS(dsp::design_butterworth(1, FilterKind::HighPass, bad, 1200.0),
                  InvalidCutoff);
  const std::array<double, 1> zero = {0.0};
  CHECK_THROWS_AS(dsp::design_butterworth(2, FilterKind::HighPass, zero, 1200.0),
                  InvalidCutoff);
  const std::array<double, 2> swapped = {45.0, 2.0};
  CHECK_THROWS_AS(dsp::design_butterworth(4, FilterKind::BandPass, swapped, 1200.0),
                  InvalidCutoff);
}

TEST_CASE("notch meets depth and width targets") {
  auto sos = dsp::design_notch(50.0, 30.0, 1200.0);
  CHECK(sos.sections.size() == 1);
  CHECK(dsp::magnitude_db(sos, 50.0) <= -30.0);
  CHECK(dsp::magnitude_db(sos, 45.0) >= -3.0);
  CHECK(dsp::magnitude_db(sos, 55.0) >= -3.0);
  CHECK(dsp::magnitude_db(sos, 10.0) >= -0.5);
  CHECK_THROWS_AS(dsp::design_notch(0.0, 30.0, 1200.0), InvalidCutoff);
  CHECK_THROWS_AS(dsp::design_notch(600.0, 30.0, 1200.0), InvalidCutoff);
}

TEST_CASE("filtfilt kills DC through the highpass") {
  const double fs = 1200.0;
  const std::array<double, 1> fc = {0.1};
  auto sos = dsp::design_butterworth(5, FilterKind::HighPass, fc, fs);

  const double amplitude = 100.0;
  std::vector<double> x(4000, amplitude);
  auto y = dsp::filtfilt(sos, x);
  for (double v : y) CHECK(std::abs(v) < 1e-3 * amplitude);
}

TEST_CASE("filtfilt passes a 10 Hz tone through the bandpass unchanged") {
  const double fs = 1200.0;
  const std::array<double, 2> fc = {2.0, 45.0};
  auto sos = dsp::design_butterworth(4, FilterKind::BandPass, fc, fs);

  const std::size_t n = 24000;  // 20 s
  auto x = test_util::sine(10.0, fs, n);
  auto y = dsp::filtfilt(sos, x);

  ToneFit fit = fit_tone(y, 10.0, fs, n / 10, n - n / 10);
  CHECK(fit.amplitude == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::abs(fit.phase) < 0.01);
}

TEST_CASE("filtfilt notch removes a 50 Hz tone") {
  const double fs = 1200.0;
  auto sos = dsp::design_notch(50.0, 30.0, fs);
  const std::size_t n = 12000;
  auto x = test_util::sine(50.0, fs, n);
  auto y = dsp::filtfilt(sos, x);
  double ss = 0.0;
  std::size_t count = 0;
  for (std::size_t i = n / 10; i < n - n / 10; ++i, ++count) ss += y[i] * y[i];
  CHECK(std::sqrt(ss / static_cast<double>(count)) < 0.03);
}

TEST_CASE("filtfilt rejects too-short signals") {
  const std::array<double, 2> fc = {2.0, 45.0};
  auto sos = dsp::design_butterworth(4, FilterKind::BandPass, fc, 1200.0);
  std::vector<double> x(3 * sos.pad_len());
  CHECK_THROWS_AS(dsp::filtfilt(sos, x), SignalTooShort);
}

TEST_CASE("zero phase: passband tone cross-correlation peaks at lag 0") {
  const double fs = 1200.0;
  const std::array<double, 2> bp_fc = {2.0, 45.0};
  auto bp = dsp::design_butterworth(4, FilterKind::BandPass, bp_fc, fs);
  const std::array<double, 1> hp_fc = {0.1};
  auto hp = dsp::design_butterworth(5, FilterKind::HighPass, hp_fc, fs);
  auto notch = dsp::design_notch(50.0, 30.0, fs);

  const std::size_t n = 12000;
  struct Probe {
    const dsp::SosCascade* sos;
    double tone_hz;
  };
  const Probe probes[] = {{&bp, 10.0}, {&hp, 30.0}, {&notch, 10.0}};
  for (const auto& probe : probes) {
    auto x = test_util::sine(probe.tone_hz, fs, n);
    auto y = dsp::filtfilt(*probe.sos, x);
    double best = -1e300;
    int best_lag = -99;
    for (int lag = -5; lag <= 5; ++lag) {
      double acc = 0.0;
      for (std::size_t i = 100; i + 100 < n; ++i)
        acc += y[i] * x[static_cast<std::size_t>(static_cast<int>(i) + lag)];
      if (acc > best) {
        best = acc;
        best_lag = lag;
      }
    }
    CHECK(best_lag == 0);
  }
}

TEST_CASE("filtfilt is linear on randomized fixtures") {
  const double fs = 600.0;
  const std::array<double, 2> fc = {2.0, 45.0};
  auto sos = dsp::design_butterworth(4, FilterKind::BandPass, fc, fs);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto x = test_util::gaussian_noise(2000, seed);
    auto y = test_util::gaussian_noise(2000, seed + 100);
    Rng rng(seed + 200);
    const double a = rng.uniform(-2.0, 2.0);
    const double b = rng.uniform(-2.0, 2.0);

    std::vector<double> combo(2000);
    for (std::size_t i = 0; i < combo.size(); ++i) combo[i] = a * x[i] + b * y[i];

    auto f_combo = dsp::filtfilt(sos, combo);
    auto fx = dsp::filtfilt(sos, x);
    auto fy = dsp::filtfilt(sos, y);

    double max_err = 0.0, max_val = 0.0;
    for (std::size_t i = 0; i < combo.size(); ++i) {
      max_err = std::max(max_err, std::abs(f_combo[i] - (a * fx[i] + b * fy[i])));
      max_val = std::max(max_val, std::abs(f_combo[i]));
    }
    CHECK(max_err < 1e-9 * std::max(1.0, max_val));
  }
}

TEST_CASE("common average reference") {
  using test_util::make_epoch;

  SUBCASE("two opposite channels are already zero-mean") {
    auto epoch = make_epoch({"C1", "C2"}, 100.0, 50);
    for (std::size_t i = 0; i < 50; ++i) {
      epoch.channel(0)[i] = std::sin(0.1 * static_cast<double>(i));
      epoch.channel(1)[i] = -std::sin(0.1 * static_cast<double>(i));
    }
    auto out = dsp::common_average_reference(epoch);
    for (std::size_t i = 0; i < 50; ++i) {
      CHECK(out.channel(0)[i] == doctest::Approx(epoch.channel(0)[i]).epsilon(1e-12));
      CHECK(out.channel(1)[i] == doctest::Approx(epoch.channel(1)[i]).epsilon(1e-12));
    }
  }

  SUBCASE("identical channels collapse to zero") {
    auto epoch = make_epoch({"C1", "C2", "C3"}, 100.0, 64);
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < 64; ++i)
        epoch.channel(c)[i] = 3.0 + 0.5 * static_cast<double>(i);
    auto out = dsp::common_average_reference(epoch);
    for (std::size_t c = 0; c < 3; ++c)
      for (double v : out.channel(c)) CHECK(std::abs(v) < 1e-12 * 64.0);
  }

  SUBCASE("random 62-channel epoch has zero column means, EOG untouched") {
    std::vector<std::string> names;
    for (int c = 0; c < 62; ++c) names.push_back("ch" + std::to_string(c));
    names.push_back("EOG1");
    names.push_back("EOG2");
    auto epoch = make_epoch(names, 100.0, 200, {"EOG1", "EOG2"});
    Rng rng(7);
    for (auto& v : epoch.data) v = rng.normal(0.0, 20.0);
    const std::vector<double> eog1_before(epoch.channel(62).begin(),
                                          epoch.channel(62).end());

    auto out = dsp::common_average_reference(epoch);
    for (std::size_t i = 0; i < 200; ++i) {
      double mean = 0.0;
      for (std::size_t c = 0; c < 62; ++c) mean += out.channel(c)[i];
      mean /= 62.0;
      CHECK(std::abs(mean) < 1e-9 * 20.0);
    }
    for (std::size_t i = 0; i < 200; ++i)
      CHECK(out.channel(62)[i] == eog1_before[i]);

    auto twice = dsp::common_average_reference(out);
    for (std::size_t c = 0; c < 62; ++c)
      for (std::size_t i = 0; i < 200; ++i)
        CHECK(std::abs(twice.channel(c)[i] - out.channel(c)[i]) < 1e-12 * 100.0);
  }
}
