#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "musepref/common/error.hpp"

namespace musepref::corpus {

enum class MusicType { Melody, Song };

enum class PreferenceLabel { Favored, NonFavored, Undecided };

std::string to_string(MusicType t);
std::string to_string(PreferenceLabel l);
MusicType music_type_from_string(const std::string& s);

struct BehaviorRecord {
  double familiarity = 0.0;        // slider score in [-1, 1]
  double assessment_time_s = 0.0;  // seconds, > 0
  double response_rate_hz = 0.0;   // 1 / assessment_time_s
  bool heart_melody = false;
  bool heart_song = false;
};

struct TrialRecord {
  std::string participant_id;
  std::string music_id;
  MusicType music_type = MusicType::Melody;
  BehaviorRecord behavior;
  PreferenceLabel label = PreferenceLabel::Undecided;
  std::string eeg_path;
  // columns recorded by the experiment software but unused here; preserved
  // verbatim through import/export
  std::string valence, arousal, star;
};

// Multichannel sample matrix, channel-major (each channel's samples are
// contiguous). Values are in the unit declared by the corpus manifest
// (microvolts for everything this toolkit writes).
struct EegEpoch {
  std::vector<std::string> channel_names;
  double sample_rate_hz = 0.0;
  std::size_t n_samples = 0;
  std::vector<double> data;            // channel-major, size = channels * samples
  std::vector<std::size_t> eog_indices;

  std::size_t n_channels() const { return channel_names.size(); }
  double duration_s() const {
    return sample_rate_hz > 0 ? static_cast<double>(n_samples) / sample_rate_hz : 0.0;
  }

  std::span<double> channel(std::size_t i) {
    return {data.data() + i * n_samples, n_samples};
  }
  std::span<const double> channel(std::size_t i) const {
    return {data.data() + i * n_samples, n_samples};
  }

  bool is_eog(std::size_t i) const {
    for (auto e : eog_indices)
      if (e == i) return true;
    return false;
  }

  std::vector<std::size_t> eeg_channel_indices() const {
    std::vector<std::size_t> idx;
    idx.reserve(n_channels());
    for (std::size_t i = 0; i < n_channels(); ++i)
      if (!is_eog(i)) idx.push_back(i);
    return idx;
  }
};

struct Corpus {
  std::string dataset_name;
  std::string root_dir;
  double sample_rate_hz = 0.0;
  std::string units = "microvolts";
  std::vector<std::string> channel_layout;  // canonical order, EEG + EOG
  std::vector<std::string> eog_channels;
  std::vector<TrialRecord> trials;
};

}  // namespace musepref::corpus
