#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "musepref/corpus/types.hpp"
#include "musepref/spectral/regions.hpp"
#include "musepref/spectral/welch.hpp"

namespace musepref::spectral {

// How relative band powers are formed. BandSum divides by theta+alpha+beta;
// TotalPower divides by the integral of the full 2-45 Hz density.
enum class NormalizationMode { BandSum, TotalPower };

struct FeatureParams {
  WelchParams welch;
  NormalizationMode normalization = NormalizationMode::BandSum;
  double music_onset_s = 5.0;  // silent baseline excluded from the window
};

// Relative band powers for a set of channels of one epoch.
struct ChannelBandPowers {
  std::vector<std::string> channel_names;
  std::vector<std::array<double, 3>> relative;  // theta, alpha, beta per channel
  double analysis_window_s = 0.0;
};

// Per-channel powers plus the region aggregate for one region.
struct SpectralFeatures {
  std::map<std::string, std::array<double, 3>> per_channel;
  std::array<double, 3> region_mean{};
  double analysis_window_s = 0.0;
};

// channels: names to analyze (must exist in the epoch; EOG channels are not
// meaningful here). Empty means every non-EOG channel of the epoch.
ChannelBandPowers extract_channel_band_powers(
    const corpus::EegEpoch& epoch, const std::vector<std::string>& channels,
    const FeatureParams& params);

SpectralFeatures extract_features(const corpus::EegEpoch& epoch,
                                  const RegionSpec& region,
                                  const FeatureParams& params);

// One trial's row of the feature table.
struct TrialFeatures {
  std::string participant_id;
  std::string music_id;
  corpus::MusicType music_type = corpus::MusicType::Melody;
  corpus::PreferenceLabel label = corpus::PreferenceLabel::Undecided;
  double familiarity = 0.0;
  double response_rate = 0.0;
  std::vector<std::array<double, 3>> bands;  // aligned with FeatureTable::channels
};

struct FeatureTable {
  std::vector<std::string> channels;
  std::vector<TrialFeatures> trials;

  int channel_index(const std::string& name) const;
  // mean relative power over the region's channels for one trial
  std::array<double, 3> region_mean(const TrialFeatures& trial,
                                    const RegionSpec& region) const;
};

void write_feature_csv(const std::string& path, const FeatureTable& table);
FeatureTable read_feature_csv(const std::string& path);

}  // namespace musepref::spectral
