#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "musepref/corpus/corpus.hpp"
#include "musepref/spectral/regions.hpp"

namespace musepref::synth {

// Generative parameters encoding a known ground-truth effect. With
// power_ratio = 1, fam_shift = 0 and resr_ratio = 1 the favored and
// non-favored groups are drawn from identical distributions (the null).
struct EffectSpec {
  spectral::Region region = spectral::Region::FrontalRight;
  int band = 1;               // 0 theta, 1 alpha, 2 beta
  double power_ratio = 1.0;   // favored/non-favored band power in the region
  double fam_shift = 0.0;     // familiarity median offset for favored trials
  double resr_ratio = 1.0;    // favored/non-favored response rate ratio
  double blink_rate_per_min = 0.0;
  std::uint64_t seed = 0;

  // session plumbing
  double sample_rate_hz = 300.0;
  double duration_lo_s = 19.0;
  double duration_hi_s = 66.0;
  double baseline_s = 5.0;  // silence before music onset; no tone injected
  double favored_fraction = 0.23;
  double undecided_fraction = 0.20;
  double noise_amplitude_uv = 10.0;   // 1/f background RMS
  double burst_amplitude_uv = 8.0;    // injected tone amplitude (non-favored)
  // per-trial log-amplitude spread of the tone; class distributions overlap
  // when this is comparable to log(sqrt(power_ratio))
  double burst_jitter_sigma = 0.0;
  // empty = full canonical montage; otherwise these EEG channels (EOG is
  // always appended)
  std::vector<std::string> channels;

  nlohmann::json to_json() const;
  static EffectSpec from_json(const nlohmann::json& j);
  static EffectSpec load(const std::string& path);
};

// tone frequency used to realize a band effect: theta 5.5, alpha 10, beta 20
double band_tone_hz(int band);

struct TrialPlan {
  std::size_t participant = 0;
  std::size_t music = 0;
  corpus::MusicType type = corpus::MusicType::Melody;
  corpus::TrialRecord record;  // ids, label, behaviors (eeg_path unset)
  double duration_s = 0.0;     // including baseline
};

// Labels, behaviors and durations for every participant x music x type.
// Pure function of (sizes, effect); epochs are generated lazily per trial.
std::vector<TrialPlan> plan_trials(std::size_t n_participants,
                                   std::size_t n_music, const EffectSpec& effect);

corpus::EegEpoch generate_epoch(const EffectSpec& effect, const TrialPlan& plan);

std::vector<std::string> effect_channel_layout(const EffectSpec& effect);

// Writes manifest.json, trials.csv and eeg/ epochs in the canonical corpus
// format. Byte-identical output for identical (sizes, effect).
corpus::Corpus generate_corpus(std::size_t n_participants, std::size_t n_music,
                               const EffectSpec& effect,
                               const std::string& out_dir);

}  // namespace musepref::synth
