#include "musepref/synth/generate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "musepref/common/error.hpp"
#include "musepref/common/parallel.hpp"
#include "musepref/common/rng.hpp"
#include "musepref/corpus/epoch_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace musepref::synth {

namespace {

constexpr double kPi = std::numbers::pi;

const char* kBandNames[3] = {"theta", "alpha", "beta"};

int band_from_string(const std::string& s) {
  for (int b = 0; b < 3; ++b)
    if (s == kBandNames[b]) return b;
  throw MalformedManifest("unknown band: " + s);
}

// blink projection strength by electrode site
double blink_weight(const std::string& channel) {
  if (channel == "EOG1") return 1.5;
  if (channel == "EOG2") return 1.2;
  if (channel.rfind("Fp", 0) == 0) return 1.0;
  if (channel.rfind("AF", 0) == 0) return 0.6;
  if (channel.rfind("FT", 0) == 0 || channel.rfind("FC", 0) == 0) return 0.15;
  if (channel.rfind("F", 0) == 0) return 0.35;
  return 0.0;
}

double clip(double v, double lo, double hi) { return std::clamp(v, lo, hi); }

// Kellet-style pink filter; close enough to 1/f power over the 2-45 Hz
// analysis range at these sample rates.
struct PinkFilter {
  double b0 = 0, b1 = 0, b2 = 0, b3 = 0, b4 = 0, b5 = 0, b6 = 0;

  double step(double white) {
    b0 = 0.99886 * b0 + white * 0.0555179;
    b1 = 0.99332 * b1 + white * 0.0750759;
    b2 = 0.96900 * b2 + white * 0.1538520;
    b3 = 0.86650 * b3 + white * 0.3104856;
    b4 = 0.55000 * b4 + white * 0.5329522;
    b5 = -0.7616 * b5 - white * 0.0168980;
    const double pink = b0 + b1 + b2 + b3 + b4 + b5 + b6 + white * 0.5362;
    b6 = white * 0.115926;
    return pink;
  }
};

}  // namespace

double band_tone_hz(int band) {
  switch (band) {
    case 0: return 5.5;
    case 1: return 10.0;
    case 2: return 20.0;
  }
  throw std::invalid_argument("band must be 0..2");
}

json EffectSpec::to_json() const {
  json j;
  j["region"] = spectral::region_lookup(region).name;
  j["band"] = kBandNames[band];
  j["power_ratio"] = power_ratio;
  j["fam_shift"] = fam_shift;
  j["resr_ratio"] = resr_ratio;
  j["blink_rate_per_min"] = blink_rate_per_min;
  j["seed"] = seed;
  j["sample_rate_hz"] = sample_rate_hz;
  j["duration_s"] = {duration_lo_s, duration_hi_s};
  j["baseline_s"] = baseline_s;
  j["favored_fraction"] = favored_fraction;
  j["undecided_fraction"] = undecided_fraction;
  j["noise_amplitude_uv"] = noise_amplitude_uv;
  j["burst_amplitude_uv"] = burst_amplitude_uv;
  j["burst_jitter_sigma"] = burst_jitter_sigma;
  if (!channels.empty()) j["channels"] = channels;
  return j;
}

EffectSpec EffectSpec::from_json(const json& j) {
  EffectSpec e;
  if (j.contains("region"))
    e.region = spectral::region_lookup(j["region"].get<std::string>()).region;
  if (j.contains("band")) e.band = band_from_string(j["band"].get<std::string>());
  if (j.contains("power_ratio")) e.power_ratio = j["power_ratio"].get<double>();
  if (j.contains("fam_shift")) e.fam_shift = j["fam_shift"].get<double>();
  if (j.contains("resr_ratio")) e.resr_ratio = j["resr_ratio"].get<double>();
  if (j.contains("blink_rate_per_min"))
    e.blink_rate_per_min = j["blink_rate_per_min"].get<double>();
  if (j.contains("seed")) e.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("sample_rate_hz"))
    e.sample_rate_hz = j["sample_rate_hz"].get<double>();
  if (j.contains("duration_s")) {
    auto d = j["duration_s"].get<std::vector<double>>();
    if (d.size() != 2 || !(d[0] <= d[1]))
      throw MalformedManifest("duration_s must be [lo, hi]");
    e.duration_lo_s = d[0];
    e.duration_hi_s = d[1];
  }
  if (j.contains("baseline_s")) e.baseline_s = j["baseline_s"].get<double>();
  if (j.contains("favored_fraction"))
    e.favored_fraction = j["favored_fraction"].get<double>();
  if (j.contains("undecided_fraction"))
    e.undecided_fraction = j["undecided_fraction"].get<double>();
  if (j.contains("noise_amplitude_uv"))
    e.noise_amplitude_uv = j["noise_amplitude_uv"].get<double>();
  if (j.contains("burst_amplitude_uv"))
    e.burst_amplitude_uv = j["burst_amplitude_uv"].get<double>();
  if (j.contains("burst_jitter_sigma"))
    e.burst_jitter_sigma = j["burst_jitter_sigma"].get<double>();
  if (j.contains("channels"))
    e.channels = j["channels"].get<std::vector<std::string>>();
  if (!(e.power_ratio > 0.0)) throw MalformedManifest("power_ratio must be > 0");
  if (e.blink_rate_per_min < 0.0)
    throw MalformedManifest("blink_rate_per_min must be >= 0");
  return e;
}

EffectSpec EffectSpec::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingFile("effect spec not found: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw MalformedManifest(std::string("effect spec parse error: ") + e.what());
  }
  return from_json(j);
}

std::vector<std::string> effect_channel_layout(const EffectSpec& effect) {
  std::vector<std::string> layout =
      effect.channels.empty() ? corpus::canonical_eeg_channels() : effect.channels;
  for (const auto& eog : corpus::canonical_eog_channels()) layout.push_back(eog);
  return layout;
}

namespace {

std::string participant_id(std::size_t p) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "P%02zu", p + 1);
  return buf;
}

std::string music_id(std::size_t m) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "M%03zu", m + 1);
  return buf;
}

}  // namespace

std::vector<TrialPlan> plan_trials(std::size_t n_participants,
                                   std::size_t n_music, const EffectSpec& effect) {
  if (n_participants < 1 || n_music < 1)
    throw std::invalid_argument("plan_trials: sizes must be >= 1");

  std::vector<TrialPlan> plans;
  plans.reserve(n_participants * n_music * 2);

  for (std::size_t p = 0; p < n_participants; ++p) {
    for (std::size_t m = 0; m < n_music; ++m) {
      // label is joint over both music types of a (participant, music) item
      Rng item_rng(derive_seed(effect.seed, p, m, 0x4c4142ULL));
      const double r = item_rng.uniform();
      corpus::PreferenceLabel label;
      bool heart_melody = false, heart_song = false;
      if (r < effect.favored_fraction) {
        label = corpus::PreferenceLabel::Favored;
        heart_melody = heart_song = true;
      } else if (r < effect.favored_fraction + effect.undecided_fraction) {
        label = corpus::PreferenceLabel::Undecided;
        (item_rng.bounded(2) == 0 ? heart_melody : heart_song) = true;
      } else {
        label = corpus::PreferenceLabel::NonFavored;
      }

      Rng dur_rng(derive_seed(effect.seed, m, 0, 0x445552ULL));
      const double music_len =
          dur_rng.uniform(effect.duration_lo_s, effect.duration_hi_s);

      for (auto type : {corpus::MusicType::Melody, corpus::MusicType::Song}) {
        const auto type_idx = type == corpus::MusicType::Melody ? 0u : 1u;
        Rng beh_rng(derive_seed(effect.seed, p, m, 0x424548ULL + type_idx));

        TrialPlan plan;
        plan.participant = p;
        plan.music = m;
        plan.type = type;
        plan.duration_s = effect.baseline_s + music_len;

        corpus::TrialRecord& t = plan.record;
        t.participant_id = participant_id(p);
        t.music_id = music_id(m);
        t.music_type = type;
        t.label = label;
        t.behavior.heart_melody = heart_melody;
        t.behavior.heart_song = heart_song;

        double fam = beh_rng.normal(0.2, 0.35);
        if (label == corpus::PreferenceLabel::Favored) fam += effect.fam_shift;
        t.behavior.familiarity = clip(fam, -1.0, 1.0);

        double assess = std::exp(beh_rng.normal(std::log(5.0), 0.4));
        if (label == corpus::PreferenceLabel::Favored) assess /= effect.resr_ratio;
        t.behavior.assessment_time_s = assess;
        t.behavior.response_rate_hz = corpus::compute_response_rate(assess);
        t.valence = "0";
        t.arousal = "0";
        t.star = "0";

        plans.push_back(std::move(plan));
      }
    }
  }
  return plans;
}

corpus::EegEpoch generate_epoch(const EffectSpec& effect, const TrialPlan& plan) {
  const auto layout = effect_channel_layout(effect);
  const double fs = effect.sample_rate_hz;
  const auto n_samples = static_cast<std::size_t>(std::lround(plan.duration_s * fs));
  const auto onset = static_cast<std::size_t>(std::lround(effect.baseline_s * fs));

  corpus::EegEpoch epoch;
  epoch.channel_names = layout;
  epoch.sample_rate_hz = fs;
  epoch.n_samples = n_samples;
  epoch.data.assign(layout.size() * n_samples, 0.0);
  for (std::size_t i = 0; i < layout.size(); ++i)
    if (layout[i] == "EOG1" || layout[i] == "EOG2") epoch.eog_indices.push_back(i);

  const auto type_idx = plan.type == corpus::MusicType::Melody ? 0u : 1u;
  const std::uint64_t trial_seed =
      derive_seed(effect.seed, plan.participant, plan.music, 0xE0000ULL + type_idx);

  // blink schedule is shared by all channels of the trial
  std::vector<std::size_t> blink_starts;
  if (effect.blink_rate_per_min > 0.0) {
    Rng blink_rng(derive_seed(trial_seed, 0x424c4bULL));
    const double expected = effect.blink_rate_per_min * plan.duration_s / 60.0;
    std::size_t n_blinks = static_cast<std::size_t>(std::floor(expected));
    if (blink_rng.uniform() < expected - std::floor(expected)) ++n_blinks;
    for (std::size_t b = 0; b < n_blinks; ++b)
      blink_starts.push_back(static_cast<std::size_t>(
          blink_rng.bounded(std::max<std::size_t>(1, n_samples))));
  }
  const auto blink_len = static_cast<std::size_t>(std::lround(0.4 * fs));

  const auto& region = spectral::region_lookup(effect.region);
  const double tone_hz = band_tone_hz(effect.band);
  const bool favored = plan.record.label == corpus::PreferenceLabel::Favored;
  double tone_amp =
      effect.burst_amplitude_uv * (favored ? std::sqrt(effect.power_ratio) : 1.0);
  if (effect.burst_jitter_sigma > 0.0) {
    Rng jitter_rng(derive_seed(trial_seed, 0x4a4954ULL));
    tone_amp *= std::exp(effect.burst_jitter_sigma * jitter_rng.normal());
  }

  for (std::size_t c = 0; c < layout.size(); ++c) {
    auto ch = epoch.channel(c);
    const bool is_eog = epoch.is_eog(c);
    Rng rng(derive_seed(trial_seed, c, 0x434841ULL));

    // 1/f background, RMS-normalized
    if (effect.noise_amplitude_uv > 0.0) {
      PinkFilter pink;
      double ss = 0.0;
      for (std::size_t i = 0; i < n_samples; ++i) {
        ch[i] = pink.step(rng.normal());
        ss += ch[i] * ch[i];
      }
      const double rms = std::sqrt(ss / static_cast<double>(n_samples));
      const double target = is_eog ? 0.5 * effect.noise_amplitude_uv
                                   : effect.noise_amplitude_uv;
      if (rms > 0.0) {
        const double g = target / rms;
        for (auto& v : ch) v *= g;
      }
    }

    // band tone in the effect region, music segment only
    const bool in_region =
        !is_eog && std::find(region.channels.begin(), region.channels.end(),
                             layout[c]) != region.channels.end();
    if (in_region && tone_amp > 0.0) {
      const double phase = rng.uniform(0.0, 2.0 * kPi);
      for (std::size_t i = onset; i < n_samples; ++i)
        ch[i] += tone_amp *
                 std::sin(2.0 * kPi * tone_hz * static_cast<double>(i) / fs + phase);
    }

    const double w = blink_weight(layout[c]);
    if (w > 0.0) {
      for (auto start : blink_starts) {
        const std::size_t end = std::min(n_samples, start + blink_len);
        for (std::size_t i = start; i < end; ++i) {
          const double t = static_cast<double>(i - start) /
                           static_cast<double>(blink_len);
          ch[i] += 100.0 * w * 0.5 * (1.0 - std::cos(2.0 * kPi * t));
        }
      }
    }
  }
  return epoch;
}

corpus::Corpus generate_corpus(std::size_t n_participants, std::size_t n_music,
                               const EffectSpec& effect,
                               const std::string& out_dir) {
  auto plans = plan_trials(n_participants, n_music, effect);

  corpus::Corpus c;
  c.dataset_name = "synthetic";
  c.root_dir = out_dir;
  c.sample_rate_hz = effect.sample_rate_hz;
  c.units = "microvolts";
  c.channel_layout = effect_channel_layout(effect);
  c.eog_channels = corpus::canonical_eog_channels();
  for (auto& plan : plans) {
    plan.record.eeg_path =
        (fs::path(out_dir) / "eeg" /
         corpus::epoch_filename(plan.record.participant_id, plan.record.music_id,
                                plan.type))
            .string();
    c.trials.push_back(plan.record);
  }

  corpus::write_corpus_metadata(out_dir, c);
  parallel_for(plans.size(), [&](std::size_t i) {
    corpus::EegEpoch epoch = generate_epoch(effect, plans[i]);
    corpus::write_epoch(plans[i].record.eeg_path, epoch);
  });
  return c;
}

}  // namespace musepref::synth
