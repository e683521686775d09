// Acceptance suite: one pass/fail line per criterion, exit 0 only when all
// pass. Each criterion is self-contained and prints its measured numbers so
// a failing run is diagnosable from the log alone.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "musepref/common/rng.hpp"
#include "musepref/corpus/corpus.hpp"
#include "musepref/dsp/car.hpp"
#include "musepref/dsp/filter.hpp"
#include "musepref/dsp/ica.hpp"
#include "musepref/dsp/preprocess.hpp"
#include "musepref/modelsel/cv.hpp"
#include "musepref/modelsel/feature_config.hpp"
#include "musepref/modelsel/study.hpp"
#include "musepref/spectral/bands.hpp"
#include "musepref/spectral/features.hpp"
#include "musepref/spectral/welch.hpp"
#include "musepref/stats/analysis.hpp"
#include "musepref/stats/mann_whitney.hpp"
#include "musepref/synth/generate.hpp"

using namespace musepref;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kPi = std::numbers::pi;

struct Criterion {
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void note(const std::string& text) { notes.push_back(text); }
};

double warp(double f, double fs) { return 2.0 * fs * std::tan(kPi * f / fs); }

double oracle_hp_db(int order, double fc, double f, double fs) {
  const double ratio = warp(fc, fs) / warp(f, fs);
  return 10.0 * std::log10(1.0 / (1.0 + std::pow(ratio, 2.0 * order)));
}

double oracle_bp_db(int order, double f1, double f2, double f, double fs) {
  const double w1 = warp(f1, fs), w2 = warp(f2, fs), w = warp(f, fs);
  const double w0 = std::sqrt(w1 * w2), bw = w2 - w1;
  const double lp = (w * w - w0 * w0) / (bw * w);
  return 10.0 *
         std::log10(1.0 / (1.0 + std::pow(lp * lp, static_cast<double>(order))));
}

std::vector<double> sine(double freq, double fs, std::size_t n, double amp = 1.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = amp * std::sin(2.0 * kPi * freq * static_cast<double>(i) / fs);
  return x;
}

// ---------------------------------------------------------------------- C1
void criterion_dsp(Criterion& c) {
  const double fs = 1200.0;
  const std::array<double, 1> hp_fc = {0.1};
  auto hp = dsp::design_butterworth(5, dsp::FilterKind::HighPass, hp_fc, fs);
  const std::array<double, 2> bp_fc = {2.0, 45.0};
  auto bp = dsp::design_butterworth(4, dsp::FilterKind::BandPass, bp_fc, fs);
  auto notch = dsp::design_notch(50.0, 30.0, fs);

  const double hp_probes[20] = {0.05, 0.08, 0.1, 0.15, 0.2,  0.3,  0.5,
                                0.8,  1.0,  2.0, 5.0,  10.0, 20.0, 50.0,
                                80.0, 120,  200, 300,  450,  580};
  for (double f : hp_probes) {
    const double expected = oracle_hp_db(5, 0.1, f, fs);
    if (expected > -60.0)
      c.require(std::abs(dsp::magnitude_db(hp, f) - expected) <= 0.1,
                "hp probe " + std::to_string(f) + " Hz off by > 0.1 dB");
  }
  c.require(dsp::magnitude_db(hp, 0.001) < -40.0, "hp stopband floor");

  const double bp_probes[20] = {0.5,  1.0, 1.5, 2.0, 3.0, 5.0, 8.0,
                                10.0, 15,  20,  25,  30,  35,  40,
                                45.0, 60,  90,  150, 300, 500};
  for (double f : bp_probes) {
    const double expected = oracle_bp_db(4, 2.0, 45.0, f, fs);
    if (expected > -60.0)
      c.require(std::abs(dsp::magnitude_db(bp, f) - expected) <= 0.1,
                "bp probe " + std::to_string(f) + " Hz off by > 0.1 dB");
    else
      c.require(dsp::magnitude_db(bp, f) < -50.0, "bp stopband floor");
  }

  c.require(dsp::magnitude_db(notch, 50.0) <= -30.0, "notch depth");
  c.require(dsp::magnitude_db(notch, 45.0) >= -3.0, "notch width low");
  c.require(dsp::magnitude_db(notch, 55.0) >= -3.0, "notch width high");
  c.require(dsp::magnitude_db(notch, 10.0) >= -0.5, "notch passband");

  // 100 randomized fixtures: 50 linearity + 50 zero-phase
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    std::vector<double> x(2000), y(2000);
    for (auto& v : x) v = rng.normal();
    for (auto& v : y) v = rng.normal();
    const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
    std::vector<double> combo(2000);
    for (std::size_t i = 0; i < 2000; ++i) combo[i] = a * x[i] + b * y[i];
    auto f_combo = dsp::filtfilt(bp, combo);
    auto fx = dsp::filtfilt(bp, x);
    auto fy = dsp::filtfilt(bp, y);
    double max_err = 0.0, max_val = 1.0;
    for (std::size_t i = 0; i < 2000; ++i) {
      max_err = std::max(max_err, std::abs(f_combo[i] - (a * fx[i] + b * fy[i])));
      max_val = std::max(max_val, std::abs(f_combo[i]));
    }
    c.require(max_err < 1e-9 * max_val, "linearity fixture " + std::to_string(seed));
  }
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(1000 + seed);
    const double tone = rng.uniform(5.0, 40.0);
    auto x = sine(tone, fs, 9600);
    auto y = dsp::filtfilt(bp, x);
    double best = -1e300;
    int best_lag = -99;
    for (int lag = -5; lag <= 5; ++lag) {
      double acc = 0.0;
      for (std::size_t i = 100; i + 100 < x.size(); ++i)
        acc += y[i] * x[static_cast<std::size_t>(static_cast<int>(i) + lag)];
      if (acc > best) {
        best = acc;
        best_lag = lag;
      }
    }
    c.require(best_lag == 0, "zero-phase fixture " + std::to_string(seed));
  }
}

// ---------------------------------------------------------------------- C2
void criterion_ica(Criterion& c) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 3000;
    Mat sources(3, n);
    Rng src_rng(derive_seed(seed, 1));
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / 200.0;
      sources.at(0, i) = std::sin(2.0 * kPi * 7.0 * t);
      sources.at(1, i) = 2.0 * (3.0 * t - std::floor(3.0 * t)) - 1.0;
      sources.at(2, i) = src_rng.uniform(-1.0, 1.0);
    }
    Mat mixing(3, 3);
    Rng mix_rng(derive_seed(seed, 2));
    for (auto& v : mixing.v) v = mix_rng.normal();
    Mat mixed(3, n);
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < 3; ++j)
          acc += mixing.at(r, j) * sources.at(j, i);
        mixed.at(r, i) = acc;
      }

    auto ica = dsp::fastica(mixed, 3, seed);
    double worst = 1.0;
    for (std::size_t t = 0; t < 3; ++t) {
      double best = 0.0;
      for (std::size_t r = 0; r < 3; ++r) {
        std::span<const double> a(sources.row_ptr(t), n);
        std::span<const double> b(ica.sources.row_ptr(r), n);
        best = std::max(best, std::abs(dsp::pearson(a, b)));
      }
      worst = std::min(worst, best);
    }
    c.require(worst > 0.95, "mixture seed " + std::to_string(seed) +
                                " worst |r| = " + std::to_string(worst));
  }

  // blink-removal fixture
  const std::vector<std::string> names = {"Fp1", "Fp2", "AF3", "AF4", "F3",
                                          "F4",  "C3",  "C4",  "O1",  "O2",
                                          "EOG1", "EOG2"};
  const double weights[] = {1.0, 0.95, 0.6, 0.55, 0.3, 0.28,
                            0.0, 0.0,  0.0, 0.0,  1.5, 1.3};
  corpus::EegEpoch epoch;
  epoch.channel_names = names;
  epoch.sample_rate_hz = 300.0;
  epoch.n_samples = 9000;
  epoch.data.assign(names.size() * epoch.n_samples, 0.0);
  epoch.eog_indices = {10, 11};

  Rng blink_rng(0xB11F);
  std::vector<std::size_t> starts;
  for (int b = 0; b < 20; ++b)
    starts.push_back(static_cast<std::size_t>(blink_rng.bounded(9000 - 200)));
  for (std::size_t ch = 0; ch < names.size(); ++ch) {
    auto data = epoch.channel(ch);
    Rng rng(derive_seed(7, ch));
    double lp = 0.0;
    for (std::size_t i = 0; i < epoch.n_samples; ++i) {
      lp = 0.95 * lp + 0.05 * rng.normal();
      data[i] = 10.0 * lp + 2.0 * rng.normal();
    }
    if (weights[ch] > 0.0) {
      for (auto start : starts)
        for (std::size_t i = 0; i < 120; ++i) {
          const double t = static_cast<double>(i) / 120.0;
          data[start + i] +=
              100.0 * weights[ch] * 0.5 * (1.0 - std::cos(2.0 * kPi * t));
        }
    }
    double mean = 0.0;
    for (double v : data) mean += v;
    mean /= static_cast<double>(epoch.n_samples);
    for (auto& v : data) v -= mean;
  }

  dsp::FastIcaOptions options;
  options.require_convergence = false;
  auto ica = dsp::fastica(epoch, 10, 3, options);
  auto removal = dsp::remove_ocular_components(epoch, ica, 0.6);
  for (std::size_t frontal : {0u, 1u, 2u, 3u}) {
    double r = 0.0;
    for (auto e : epoch.eog_indices)
      r = std::max(r, std::abs(dsp::pearson(removal.epoch.channel(frontal),
                                            epoch.channel(e))));
    c.require(r < 0.2, "frontal-EOG correlation " + std::to_string(r));
  }
  for (std::size_t occipital : {8u, 9u}) {
    double before = 0.0, after = 0.0;
    for (double v : epoch.channel(occipital)) before += v * v;
    for (double v : removal.epoch.channel(occipital)) after += v * v;
    before = std::sqrt(before);
    after = std::sqrt(after);
    c.require(std::abs(after - before) / before < 0.05,
              "occipital RMS change " + std::to_string((after - before) / before));
  }
}

// ---------------------------------------------------------------------- C3
void criterion_spectral(Criterion& c) {
  const double fs = 1200.0;
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    Rng rng(seed);
    std::vector<double> x(24000);
    for (auto& v : x) v = rng.normal();
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= static_cast<double>(x.size());

    auto psd = spectral::welch_psd(x, fs);
    double total = 0.0;
    for (std::size_t k = 1; k < psd.freqs_hz.size(); ++k)
      total += 0.5 * (psd.density[k] + psd.density[k - 1]) *
               (psd.freqs_hz[k] - psd.freqs_hz[k - 1]);
    c.require(std::abs(total - var) / var < 0.05,
              "Parseval seed " + std::to_string(seed) + ": " +
                  std::to_string(total));
  }

  const double tones[3] = {5.0, 10.0, 20.0};
  for (int band = 0; band < 3; ++band) {
    auto x = sine(tones[band], fs, 12000);
    auto psd = spectral::welch_psd(x, fs);
    auto powers = spectral::band_powers_tab(psd.freqs_hz, psd.density);
    const double frac = powers[static_cast<std::size_t>(band)] /
                        (powers[0] + powers[1] + powers[2]);
    c.require(frac > 0.95, "tone " + std::to_string(tones[band]) +
                               " Hz band fraction " + std::to_string(frac));
  }

  spectral::FeatureParams params;
  params.music_onset_s = 0.0;
  const auto& fr = spectral::region_lookup("Frontal_Right");
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    corpus::EegEpoch epoch;
    epoch.channel_names = fr.channels;
    epoch.sample_rate_hz = 300.0;
    epoch.n_samples = 3600;
    epoch.data.resize(epoch.n_channels() * epoch.n_samples);
    Rng rng(seed);
    for (auto& v : epoch.data) v = rng.normal(0.0, 15.0);

    auto features = spectral::extract_features(epoch, fr, params);
    for (const auto& [name, p] : features.per_channel)
      c.require(std::abs(p[0] + p[1] + p[2] - 1.0) <= 1e-9, "sum-to-one on " + name);

    auto scaled = epoch;
    for (auto& v : scaled.data) v *= 119.25;
    auto scaled_features = spectral::extract_features(scaled, fr, params);
    for (int b = 0; b < 3; ++b)
      c.require(
          std::abs(scaled_features.region_mean[b] - features.region_mean[b]) <=
              1e-9,
          "scale invariance");
  }
}

// ---------------------------------------------------------------------- C4
void criterion_mann_whitney(Criterion& c) {
  const std::vector<double> a = {1, 2, 3}, b = {4, 5, 6};
  auto worked = stats::mann_whitney_u(a, b);
  c.require(worked.u_statistic == 0.0 && std::abs(worked.p_value - 0.1) < 1e-12,
            "worked example p != 0.1");

  // exhaustive exact-vs-normal agreement; the stats module pins the 0.02
  // bound at n_a = n_b = 6 (the approximation is provably looser below
  // n = 5; the measured gaps are printed for the record)
  for (std::size_t n = 1; n <= 6; ++n) {
    double worst = 0.0;
    std::vector<int> mask(2 * n, 0);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(n), 1);
    std::sort(mask.begin(), mask.end());
    do {
      std::vector<double> xa, xb;
      for (std::size_t i = 0; i < mask.size(); ++i)
        (mask[i] ? xa : xb).push_back(static_cast<double>(i + 1));
      worst = std::max(worst, std::abs(stats::exact_two_sided_p(xa, xb) -
                                       stats::normal_approx_two_sided_p(xa, xb)));
    } while (std::next_permutation(mask.begin(), mask.end()));
    char line[96];
    std::snprintf(line, sizeof(line),
                  "n_a = n_b = %zu: max |p_exact - p_normal| = %.4f", n, worst);
    c.note(line);
    if (n >= 5) c.require(worst < 0.02, std::string(line) + " exceeds 0.02");
  }

  Rng rng(101);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t na = 1 + rng.bounded(15);
    const std::size_t nb = 1 + rng.bounded(15);
    std::vector<double> xa(na), xb(nb);
    for (auto& v : xa) v = std::floor(rng.uniform(0.0, 10.0));
    for (auto& v : xb) v = std::floor(rng.uniform(0.0, 10.0));
    auto u = stats::u_statistics(xa, xb);
    c.require(std::abs(u.u_a + u.u_b - static_cast<double>(na * nb)) < 1e-9,
              "U duality trial " + std::to_string(trial));
  }
}

// ---------------------------------------------------------------------- C5
void criterion_learners(Criterion& c) {
  {
    Rng rng(3);
    learn::Dataset data;
    data.x = Mat(40, 2);
    data.y.resize(40);
    const double angle = 0.5;
    for (std::size_t i = 0; i < 40; ++i) {
      const int label = i % 2 == 0 ? 1 : 0;
      const double along = rng.uniform(-3.0, 3.0);
      const double off = (label ? 1.0 : -1.0) * (1.0 + rng.uniform(0.0, 1.5));
      data.x.at(i, 0) = along * -std::sin(angle) + off * std::cos(angle);
      data.x.at(i, 1) = along * std::cos(angle) + off * std::sin(angle);
      data.y[i] = label;
    }
    learn::SvmParams params;
    params.kernel = learn::Kernel::Linear;
    params.c = 1.0;
    auto model = learn::svm_train(data, params);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < 40; ++i)
      if (model.predict({data.x.row_ptr(i), 2}) == data.y[i]) ++correct;
    c.require(correct == 40, "linear blobs training accuracy");
    c.require(model.kkt_residual < 1e-3, "linear blobs KKT residual");
  }

  {
    Rng rng(5);
    learn::Dataset data;
    data.x = Mat(40, 2);
    data.y.resize(40);
    const double corners[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
    const int labels[4] = {1, 0, 0, 1};
    for (std::size_t i = 0; i < 40; ++i) {
      data.x.at(i, 0) = corners[i % 4][0] + rng.normal(0.0, 0.1);
      data.x.at(i, 1) = corners[i % 4][1] + rng.normal(0.0, 0.1);
      data.y[i] = labels[i % 4];
    }
    learn::SvmParams params;
    params.kernel = learn::Kernel::Rbf;
    params.gamma = 1.0;
    params.c = 10.0;
    auto model = learn::svm_train(data, params);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < 40; ++i)
      if (model.predict({data.x.row_ptr(i), 2}) == data.y[i]) ++correct;
    c.require(correct == 40, "XOR training accuracy");
    c.require(model.kkt_residual < 1e-3, "XOR KKT residual");
  }

  {
    learn::Dataset train;
    train.x = Mat(3, 1);
    train.x.at(0, 0) = 1.0;
    train.x.at(1, 0) = 2.0;
    train.x.at(2, 0) = 3.0;
    train.y = {1, 0, 0};
    learn::KnnParams params;
    params.k = 3;
    params.weights = learn::KnnWeights::Distance;
    std::vector<double> q = {0.0};
    auto pred = learn::knn_predict(train, params, q);
    c.require(std::abs(pred.score_positive - 1.0) < 1e-12 &&
                  std::abs(pred.score_negative - (0.5 + 1.0 / 3.0)) < 1e-12 &&
                  pred.label == 1,
              "kNN weighted-vote example");
  }

  {
    Rng rng(9);
    learn::Dataset data;
    data.x = Mat(120, 4);
    data.y.resize(120);
    for (std::size_t i = 0; i < 120; ++i) {
      data.y[i] = i % 3 == 0 ? 1 : 0;
      for (std::size_t col = 0; col < 4; ++col)
        data.x.at(i, col) = rng.normal() + (data.y[i] ? 0.8 : -0.8);
    }
    learn::ForestParams params;
    params.n_estimators = 50;
    params.seed = 12;
    auto m1 = learn::forest_train(data, params);
    auto m2 = learn::forest_train(data, params);
    bool identical = true;
    Rng probe(10);
    for (int p = 0; p < 50; ++p) {
      std::vector<double> x(4);
      for (auto& v : x) v = probe.uniform(-3.0, 3.0);
      if (m1.positive_vote_fraction(x) != m2.positive_vote_fraction(x))
        identical = false;
    }
    c.require(identical, "forest determinism under a fixed seed");
  }
}

// ------------------------------------------------------------------- C6/C8
// In-memory pipeline: synth -> preprocess -> band-power features. ICA stays
// off in these batteries (the corpora are blink-free; ICA correctness is
// criterion 2), keeping the 20-replication loop inside the budget.
spectral::FeatureTable pipeline_features(const synth::EffectSpec& effect,
                                         std::size_t np, std::size_t nm,
                                         bool melody_only) {
  auto plans = synth::plan_trials(np, nm, effect);
  dsp::PreprocessConfig config;
  config.ica.enabled = false;

  spectral::FeatureParams params;
  params.music_onset_s = effect.baseline_s;

  spectral::FeatureTable table;
  bool first = true;
  for (const auto& plan : plans) {
    if (melody_only && plan.type != corpus::MusicType::Melody) continue;
    auto epoch = synth::generate_epoch(effect, plan);
    auto pre = dsp::preprocess(epoch, config, 0);
    auto powers = spectral::extract_channel_band_powers(pre.epoch, {}, params);
    if (first) {
      table.channels = powers.channel_names;
      first = false;
    }
    spectral::TrialFeatures t;
    t.participant_id = plan.record.participant_id;
    t.music_id = plan.record.music_id;
    t.music_type = plan.type;
    t.label = plan.record.label;
    t.familiarity = plan.record.behavior.familiarity;
    t.response_rate = plan.record.behavior.response_rate_hz;
    t.bands = powers.relative;
    table.trials.push_back(std::move(t));
  }
  return table;
}

synth::EffectSpec acceptance_effect(std::uint64_t seed) {
  synth::EffectSpec effect;
  effect.seed = seed;
  effect.sample_rate_hz = 300.0;
  effect.duration_lo_s = 19.0;
  effect.duration_hi_s = 26.0;
  effect.baseline_s = 5.0;
  effect.channels = spectral::region_lookup("Frontal_LR").channels;
  effect.noise_amplitude_uv = 10.0;
  effect.burst_amplitude_uv = 8.0;
  effect.blink_rate_per_min = 0.0;
  return effect;
}

void criterion_pipeline(Criterion& c) {
  const auto t0 = Clock::now();

  // null calibration: pooled significance rate over 20 replications
  std::size_t significant = 0, comparisons = 0;
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    auto effect = acceptance_effect(rep);  // every effect knob at the null
    auto table = pipeline_features(effect, 20, 22, false);
    auto rows = stats::standard_comparisons(table);
    for (const auto& row : rows) {
      ++comparisons;
      significant += row.result.significant ? 1u : 0u;
    }
  }
  const double null_rate =
      static_cast<double>(significant) / static_cast<double>(comparisons);
  c.note("null battery: " + std::to_string(significant) + "/" +
         std::to_string(comparisons) + " significant (pooled rate " +
         std::to_string(null_rate) + ")");
  c.require(null_rate <= 0.10, "null significance rate above 10%");

  // injected right-frontal alpha effect (power ratio 2) + behavior effects
  int detected = 0, f1_ok = 0, fused_ge = 0;
  double eeg_sum = 0.0, fused_sum = 0.0;
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    auto effect = acceptance_effect(100 + rep);
    effect.region = spectral::Region::FrontalRight;
    effect.band = 1;
    effect.power_ratio = 2.0;
    effect.burst_jitter_sigma = 0.08;
    effect.fam_shift = 0.4;
    effect.resr_ratio = 0.7;

    auto table = pipeline_features(effect, 20, 22, true);

    stats::Variable alpha_fr{stats::VariableKind::BandPower,
                             spectral::Region::FrontalRight, 1};
    auto cmp = stats::compare_groups(
        table, {corpus::PreferenceLabel::Favored, corpus::MusicType::Melody},
        {corpus::PreferenceLabel::NonFavored, corpus::MusicType::Melody},
        alpha_fr);
    detected += cmp.result.significant ? 1 : 0;

    modelsel::FeatureConfig eeg_config;
    eeg_config.region = spectral::Region::FrontalRight;
    eeg_config.music_type = corpus::MusicType::Melody;
    modelsel::CvOptions options;
    options.seed = rep;
    auto grid = modelsel::quick_grid(modelsel::ModelFamily::Svm);
    auto eeg = modelsel::nested_cv(modelsel::assemble_features(table, eeg_config),
                                   grid, options);

    modelsel::FeatureConfig fused_config = eeg_config;
    fused_config.use_familiarity = true;
    fused_config.use_response_rate = true;
    auto fused = modelsel::nested_cv(
        modelsel::assemble_features(table, fused_config), grid, options);

    f1_ok += eeg.mean_f1 >= 0.8 ? 1 : 0;
    fused_ge += fused.mean_f1 >= eeg.mean_f1 ? 1 : 0;
    eeg_sum += eeg.mean_f1;
    fused_sum += fused.mean_f1;
  }
  c.note("effect battery: detected " + std::to_string(detected) +
         "/20, EEG-only F1>=0.8 in " + std::to_string(f1_ok) + "/20 (mean " +
         std::to_string(eeg_sum / 20.0) + "), fused mean " +
         std::to_string(fused_sum / 20.0) + ", fused>=eeg in " +
         std::to_string(fused_ge) + "/20");
  c.require(detected >= 18, "effect detected in fewer than 18/20 replications");
  c.require(f1_ok >= 18, "EEG-only F1 >= 0.8 in fewer than 18/20 replications");
  c.require(fused_sum >= eeg_sum, "behavior fusion did not improve the mean F1");

  const double minutes =
      std::chrono::duration<double>(Clock::now() - t0).count() / 60.0;
  c.note("runtime " + std::to_string(minutes) + " min");
  c.require(minutes < 15.0, "criterion exceeded its 15-minute budget");
}

// ---------------------------------------------------------------------- C7
void criterion_reproduction(Criterion& c, const Criterion& pipeline_result) {
  std::string dataset_dir;
  if (const char* env = std::getenv("MUSEPREF_DATASET")) dataset_dir = env;
  if (dataset_dir.empty() && fs::exists("dataset/manifest.json"))
    dataset_dir = "dataset";

  const double baseline = 271.0 / 352.0;
  c.require(std::abs(baseline - 0.770) < 5e-4,
            "baseline arithmetic 271/352 != 77.0%");
  c.note("majority-class baseline accuracy 271/352 = " + std::to_string(baseline));

  if (dataset_dir.empty()) {
    c.note(
        "dataset gap: no released-recording corpus found (set MUSEPREF_DATASET "
        "or place it under ./dataset); reproduction replaced by the synthetic "
        "power/calibration battery per the acceptance contract");
    c.require(pipeline_result.failures.empty(),
              "stand-in synthetic battery did not pass");
    return;
  }

  // full reproduction path: ingest -> preprocess -> features -> study
  auto imported = corpus::import_corpus(dataset_dir);
  auto census = corpus::label_census(imported.corpus);
  c.note("census: favored items " +
         std::to_string(census.items[corpus::PreferenceLabel::Favored]) +
         ", non-favored " +
         std::to_string(census.items[corpus::PreferenceLabel::NonFavored]));
  c.require(census.items[corpus::PreferenceLabel::Favored] == 81 &&
                census.items[corpus::PreferenceLabel::NonFavored] == 271,
            "census does not reproduce the 81/271 split");

  spectral::FeatureParams params;  // defaults: 4 s Hann, 50%, band-sum, onset 5 s
  dsp::PreprocessConfig config;    // the full chain incl. ICA
  spectral::FeatureTable table;
  bool first = true;
  for (const auto& trial : imported.corpus.trials) {
    auto epoch = corpus::load_epoch(imported.corpus, trial);
    auto pre = dsp::preprocess(epoch, config, 0);
    auto powers = spectral::extract_channel_band_powers(pre.epoch, {}, params);
    if (first) {
      table.channels = powers.channel_names;
      first = false;
    }
    spectral::TrialFeatures t;
    t.participant_id = trial.participant_id;
    t.music_id = trial.music_id;
    t.music_type = trial.music_type;
    t.label = trial.label;
    t.familiarity = trial.behavior.familiarity;
    t.response_rate = trial.behavior.response_rate_hz;
    t.bands = powers.relative;
    table.trials.push_back(std::move(t));
  }

  modelsel::StudyOptions options;  // full factorial, full grids
  auto study = modelsel::run_study(table, options);

  struct Target {
    modelsel::ModelFamily family;
    corpus::MusicType type;
    double f1, accuracy;
  };
  const Target targets[] = {
      {modelsel::ModelFamily::Svm, corpus::MusicType::Melody, 0.7109, 0.7529},
      {modelsel::ModelFamily::Rf, corpus::MusicType::Song, 0.7492, 0.8464},
  };
  for (const auto& target : targets) {
    double best_f1 = -1.0, best_acc = -1.0;
    for (const auto& cell : study.cells) {
      if (cell.family != target.family ||
          cell.config.music_type != target.type || !cell.report ||
          cell.config.behavior_count() == 0)
        continue;
      if (cell.report->mean_f1 > best_f1) {
        best_f1 = cell.report->mean_f1;
        best_acc = cell.report->mean_accuracy;
      }
    }
    c.note("best with-behaviors " + modelsel::to_string(target.family) + " " +
           corpus::to_string(target.type) + ": F1 " + std::to_string(best_f1) +
           " (target " + std::to_string(target.f1) + "), accuracy " +
           std::to_string(best_acc) + " (target " +
           std::to_string(target.accuracy) + ")");
    c.require(std::abs(best_f1 - target.f1) <= 0.05,
              "F1 outside +/-5 points of the published value");
  }
  c.note(
      "configuration delta vs the publication: the PSD estimator (Welch 4 s "
      "Hann 50%), band-sum normalization, binary F1, CV seed and the "
      "validation-fold rule are all unreported there; the values used here "
      "follow:");
  c.note(study.configuration.dump());
}

// ---------------------------------------------------------------------- C8
void criterion_ordering(Criterion& c) {
  int right_wins = 0;
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    auto effect = acceptance_effect(500 + rep);
    effect.region = spectral::Region::FrontalRight;
    effect.band = 1;
    effect.power_ratio = 2.0;
    effect.burst_jitter_sigma = 0.08;

    auto table = pipeline_features(effect, 10, 12, true);

    modelsel::StudyOptions options;
    options.families = {modelsel::ModelFamily::Svm};
    options.regions = {spectral::Region::FrontalLeft,
                       spectral::Region::FrontalRight};
    options.behavior_variants = {{false, false}};
    options.music_types = {corpus::MusicType::Melody};
    options.grids = modelsel::GridSet::quick();
    options.cv.seed = rep;

    auto study = modelsel::run_study(table, options);
    const auto& left = study.cells[0];
    const auto& right = study.cells[1];
    if (left.report && right.report &&
        right.report->mean_f1 > left.report->mean_f1)
      ++right_wins;
  }
  c.note("effect-bearing side ranked first in " + std::to_string(right_wins) +
         "/20 seeds");
  c.require(right_wins >= 18, "lateralized ordering below 18/20");
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    std::function<void(Criterion&)> run;
  };

  Criterion pipeline_result;
  const std::vector<Entry> entries = {
      {1, "DSP correctness", criterion_dsp},
      {2, "ICA recovery", criterion_ica},
      {3, "Spectral oracles", criterion_spectral},
      {4, "Mann-Whitney exactness", criterion_mann_whitney},
      {5, "Learner oracles", criterion_learners},
      {6, "Pipeline power & calibration",
       [&](Criterion& c) {
         criterion_pipeline(c);
         pipeline_result = c;
       }},
      {7, "Reference-study reproduction (conditional)",
       [&](Criterion& c) { criterion_reproduction(c, pipeline_result); }},
      {8, "Lateralized ordering", criterion_ordering},
  };

  int failures = 0;
  for (const auto& entry : entries) {
    Criterion c;
    const auto t0 = Clock::now();
    try {
      entry.run(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("[%s] criterion %d: %s (%.1f s)\n",
                c.failures.empty() ? "PASS" : "FAIL", entry.id, entry.name,
                seconds);
    for (const auto& note : c.notes) std::printf("       . %s\n", note.c_str());
    for (const auto& failure : c.failures)
      std::printf("       ! %s\n", failure.c_str());
    std::fflush(stdout);
    if (!c.failures.empty()) ++failures;
  }

  if (failures == 0) {
    std::printf("acceptance: all 8 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criteria failed\n", failures);
  return 1;
}
