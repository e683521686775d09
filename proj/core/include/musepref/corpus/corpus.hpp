#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "musepref/corpus/types.hpp"

namespace musepref::corpus {

// Canonical on-disk layout of a corpus directory:
//   manifest.json   dataset_name, sample_rate_hz, units, channel_layout,
//                   eog_channels
//   trials.csv      one row per participant x music x type
//   eeg/            binary epochs named {participant_id}_{music_id}_{type}.eegt
inline constexpr const char* kTrialsCsvHeader =
    "participant_id,music_id,music_type,heart_melody,heart_song,familiarity,"
    "assessment_time_s,valence,arousal,star";

// Shortest epoch admitted at ingestion; spectral estimation needs at least
// one full analysis window.
inline constexpr double kMinEpochSeconds = 4.0;

// 62-channel extended 10-20 montage (the 54 lateral channels of the analysis
// regions plus 8 midline sites), then the two EOG channels.
const std::vector<std::string>& canonical_eeg_channels();   // 62
const std::vector<std::string>& canonical_eog_channels();   // 2
const std::vector<std::string>& canonical_channel_layout(); // 64

std::string epoch_filename(const std::string& participant_id,
                           const std::string& music_id, MusicType type);

PreferenceLabel derive_label(bool heart_melody, bool heart_song);

double compute_response_rate(double assessment_time_s);

struct ImportResult {
  Corpus corpus;
  // one entry per malformed trial row, naming row number and reason;
  // such rows are excluded from the corpus but never silently dropped
  std::vector<std::string> issues;
};

ImportResult import_corpus(const std::string& root_dir,
                           const std::string& manifest_path);

// Convenience overload: manifest.json inside root_dir.
ImportResult import_corpus(const std::string& root_dir);

// Writes manifest.json + trials.csv into root_dir (epochs are written
// separately through write_epoch). Creates directories as needed.
void write_corpus_metadata(const std::string& root_dir, const Corpus& corpus);

// Reads the declared EOG channel names, loads one trial's epoch and checks
// it against the corpus layout.
EegEpoch load_epoch(const Corpus& corpus, const TrialRecord& trial);

struct LabelCensus {
  // music items = unique (participant, music) pairs; labels are joint over
  // Melody+Song so the per-type trial counts repeat the item counts unless
  // a corpus is missing one type for some item
  std::map<PreferenceLabel, std::size_t> items;
  std::map<std::pair<PreferenceLabel, MusicType>, std::size_t> trials;
  std::size_t total_trials = 0;
};

LabelCensus label_census(const Corpus& corpus);

}  // namespace musepref::corpus
