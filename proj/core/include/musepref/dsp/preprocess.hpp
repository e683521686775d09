#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "musepref/corpus/types.hpp"

namespace musepref::dsp {

struct IcaConfig {
  bool enabled = true;
  double threshold = 0.6;   // |Pearson r| against EOG above which a component goes
  std::uint64_t seed = 0;
  double decimate_hz = 300;  // estimation rate; unmixing applies at full rate
};

struct PreprocessConfig {
  double notch_hz = 50.0;
  double notch_q = 30.0;
  double hp_hz = 0.1;
  int hp_order = 5;
  double bp_lo_hz = 2.0;
  double bp_hi_hz = 45.0;
  int bp_order = 4;
  IcaConfig ica;

  nlohmann::json to_json() const;
  static PreprocessConfig from_json(const nlohmann::json& j);
  static PreprocessConfig load(const std::string& path);
};

struct PreprocessResult {
  corpus::EegEpoch epoch;
  nlohmann::json provenance;  // {"seed":..., "stages":[...]} in applied order
};

// Applies, in order: notch -> high-pass -> ICA ocular removal -> CAR ->
// band-pass; every filter is zero-phase. Stage failures are re-raised with
// the stage name attached (original error code preserved, type flattened to
// DomainError). A non-converged ICA is recorded in provenance rather than
// raised; rank deficiency still propagates.
PreprocessResult preprocess(const corpus::EegEpoch& epoch,
                            const PreprocessConfig& config, std::uint64_t seed);

}  // namespace musepref::dsp
