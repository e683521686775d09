#pragma once

#include <array>
#include <string>

#include "musepref/learn/dataset.hpp"
#include "musepref/spectral/features.hpp"
#include "musepref/spectral/regions.hpp"

namespace musepref::modelsel {

struct FeatureConfig {
  spectral::Region region = spectral::Region::FrontalRight;
  std::array<bool, 3> bands{true, true, true};  // theta, alpha, beta
  bool use_familiarity = false;
  bool use_response_rate = false;
  corpus::MusicType music_type = corpus::MusicType::Melody;

  // "none", "fam", "resr", "fam+resr"
  std::string behaviors_name() const;
  std::size_t behavior_count() const {
    return (use_familiarity ? 1u : 0u) + (use_response_rate ? 1u : 0u);
  }
};

// One row per Favored/NonFavored trial of the configured music type:
// region channels in region order, bands within channel, then familiarity,
// then response rate as configured. Labels: Favored = 1, NonFavored = 0.
learn::Dataset assemble_features(const spectral::FeatureTable& table,
                                 const FeatureConfig& config);

}  // namespace musepref::modelsel
