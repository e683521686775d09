#include "musepref/modelsel/feature_config.hpp"

#include "musepref/common/error.hpp"

namespace musepref::modelsel {

namespace {
const char* kBandNames[3] = {"theta", "alpha", "beta"};
}

std::string FeatureConfig::behaviors_name() const {
  if (use_familiarity && use_response_rate) return "fam+resr";
  if (use_familiarity) return "fam";
  if (use_response_rate) return "resr";
  return "none";
}

learn::Dataset assemble_features(const spectral::FeatureTable& table,
                                 const FeatureConfig& config) {
  const auto& region = spectral::region_lookup(config.region);

  std::vector<std::size_t> columns;  // table channel index per region channel
  for (const auto& name : region.channels) {
    int idx = table.channel_index(name);
    if (idx < 0)
      throw MissingFeatures("feature table lacks channel '" + name +
                            "' required by region " + region.name);
    columns.push_back(static_cast<std::size_t>(idx));
  }

  std::vector<const spectral::TrialFeatures*> selected;
  for (const auto& trial : table.trials) {
    if (trial.music_type != config.music_type) continue;
    if (trial.label == corpus::PreferenceLabel::Undecided) continue;
    if (trial.bands.size() != table.channels.size())
      throw MissingFeatures("trial " + trial.participant_id + "/" +
                            trial.music_id + " has no extracted features");
    selected.push_back(&trial);
  }

  std::size_t n_bands = 0;
  for (bool b : config.bands) n_bands += b ? 1u : 0u;
  if (n_bands == 0) throw MissingFeatures("feature config selects no bands");

  learn::Dataset data;
  const std::size_t dim = columns.size() * n_bands + config.behavior_count();
  data.x = Mat(selected.size(), dim);
  data.y.reserve(selected.size());

  for (std::size_t c = 0; c < columns.size(); ++c)
    for (int b = 0; b < 3; ++b)
      if (config.bands[static_cast<std::size_t>(b)])
        data.feature_names.push_back(region.channels[c] + "_" + kBandNames[b]);
  if (config.use_familiarity) data.feature_names.push_back("familiarity");
  if (config.use_response_rate) data.feature_names.push_back("response_rate");

  for (std::size_t r = 0; r < selected.size(); ++r) {
    const auto& trial = *selected[r];
    std::size_t c_out = 0;
    for (auto col : columns)
      for (int b = 0; b < 3; ++b)
        if (config.bands[static_cast<std::size_t>(b)])
          data.x.at(r, c_out++) = trial.bands[col][static_cast<std::size_t>(b)];
    if (config.use_familiarity) data.x.at(r, c_out++) = trial.familiarity;
    if (config.use_response_rate) data.x.at(r, c_out++) = trial.response_rate;
    data.y.push_back(trial.label == corpus::PreferenceLabel::Favored ? 1 : 0);
    data.row_groups.push_back(trial.participant_id);
  }
  return data;
}

}  // namespace musepref::modelsel
