#include "musepref/dsp/preprocess.hpp"

#include <array>
#include <cmath>
#include <fstream>

#include "musepref/common/error.hpp"
#include "musepref/common/rng.hpp"
#include "musepref/dsp/car.hpp"
#include "musepref/dsp/filter.hpp"
#include "musepref/dsp/ica.hpp"

using nlohmann::json;

namespace musepref::dsp {

json PreprocessConfig::to_json() const {
  json j;
  j["notch_hz"] = notch_hz;
  j["notch_q"] = notch_q;
  j["hp_hz"] = hp_hz;
  j["hp_order"] = hp_order;
  j["bp_hz"] = {bp_lo_hz, bp_hi_hz};
  j["bp_order"] = bp_order;
  j["ica"] = {{"enabled", ica.enabled},
              {"threshold", ica.threshold},
              {"seed", ica.seed},
              {"decimate_hz", ica.decimate_hz}};
  return j;
}

PreprocessConfig PreprocessConfig::from_json(const json& j) {
  PreprocessConfig c;
  if (j.contains("notch_hz")) c.notch_hz = j["notch_hz"].get<double>();
  if (j.contains("notch_q")) c.notch_q = j["notch_q"].get<double>();
  if (j.contains("hp_hz")) c.hp_hz = j["hp_hz"].get<double>();
  if (j.contains("hp_order")) c.hp_order = j["hp_order"].get<int>();
  if (j.contains("bp_hz")) {
    auto bp = j["bp_hz"].get<std::vector<double>>();
    if (bp.size() != 2) throw InvalidCutoff("bp_hz must hold two frequencies");
    c.bp_lo_hz = bp[0];
    c.bp_hi_hz = bp[1];
  }
  if (j.contains("bp_order")) c.bp_order = j["bp_order"].get<int>();
  if (j.contains("ica")) {
    const auto& i = j["ica"];
    if (i.contains("enabled")) c.ica.enabled = i["enabled"].get<bool>();
    if (i.contains("threshold")) c.ica.threshold = i["threshold"].get<double>();
    if (i.contains("seed")) c.ica.seed = i["seed"].get<std::uint64_t>();
    if (i.contains("decimate_hz")) c.ica.decimate_hz = i["decimate_hz"].get<double>();
  }
  return c;
}

PreprocessConfig PreprocessConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingFile("config file not found: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw MalformedManifest(std::string("config parse error: ") + e.what());
  }
  return from_json(j);
}

namespace {

template <typename F>
auto run_stage(const char* stage, F&& f) {
  try {
    return f();
  } catch (const DomainError& e) {
    throw DomainError(e.module(), e.code(),
                      std::string("stage '") + stage + "': " + e.what());
  }
}

void filter_epoch(const SosCascade& sos, corpus::EegEpoch& epoch) {
  for (std::size_t c = 0; c < epoch.n_channels(); ++c)
    filtfilt_inplace(sos, epoch.channel(c));
}

// Zero-phase anti-alias lowpass + stride pick of the EEG channels, used only
// for ICA estimation.
Mat decimated_eeg(const corpus::EegEpoch& epoch, double target_hz,
                  std::size_t& factor_out) {
  const auto eeg = epoch.eeg_channel_indices();
  std::size_t factor = 1;
  if (target_hz > 0 && epoch.sample_rate_hz > target_hz)
    factor = static_cast<std::size_t>(std::floor(epoch.sample_rate_hz / target_hz));
  if (factor < 2) {
    factor_out = 1;
    Mat data(eeg.size(), epoch.n_samples);
    for (std::size_t r = 0; r < eeg.size(); ++r) {
      auto ch = epoch.channel(eeg[r]);
      std::copy(ch.begin(), ch.end(), data.row_ptr(r));
    }
    return data;
  }
  factor_out = factor;
  const double out_rate = epoch.sample_rate_hz / static_cast<double>(factor);
  const std::array<double, 1> cutoff = {0.45 * out_rate};
  SosCascade aa = design_butterworth(8, FilterKind::LowPass, cutoff,
                                     epoch.sample_rate_hz);
  const std::size_t n_out = (epoch.n_samples + factor - 1) / factor;
  Mat data(eeg.size(), n_out);
  std::vector<double> tmp;
  for (std::size_t r = 0; r < eeg.size(); ++r) {
    auto ch = epoch.channel(eeg[r]);
    tmp.assign(ch.begin(), ch.end());
    filtfilt_inplace(aa, tmp);
    for (std::size_t i = 0; i < n_out; ++i) data.at(r, i) = tmp[i * factor];
  }
  return data;
}

}  // namespace

PreprocessResult preprocess(const corpus::EegEpoch& epoch,
                            const PreprocessConfig& config, std::uint64_t seed) {
  PreprocessResult result;
  result.epoch = epoch;
  corpus::EegEpoch& work = result.epoch;
  json stages = json::array();

  {
    SosCascade notch = run_stage("notch", [&] {
      return design_notch(config.notch_hz, config.notch_q, work.sample_rate_hz);
    });
    run_stage("notch", [&] { filter_epoch(notch, work); return 0; });
    stages.push_back({{"stage", "notch"},
                      {"freq_hz", config.notch_hz},
                      {"q", config.notch_q}});
  }
  {
    const std::array<double, 1> cutoff = {config.hp_hz};
    SosCascade hp = run_stage("highpass", [&] {
      return design_butterworth(config.hp_order, FilterKind::HighPass, cutoff,
                                work.sample_rate_hz);
    });
    run_stage("highpass", [&] { filter_epoch(hp, work); return 0; });
    stages.push_back({{"stage", "highpass"},
                      {"cutoff_hz", config.hp_hz},
                      {"order", config.hp_order}});
  }
  if (config.ica.enabled) {
    run_stage("ica", [&] {
      if (work.eog_indices.empty())
        throw RankDeficient("ICA ocular removal needs EOG channels in the epoch");
      std::size_t factor = 1;
      Mat est_data = decimated_eeg(work, config.ica.decimate_hz, factor);
      FastIcaOptions options;
      options.require_convergence = false;
      const std::uint64_t ica_seed = derive_seed(seed, config.ica.seed);
      IcaDecomposition ica = fastica(est_data, est_data.rows, ica_seed, options);
      OcularRemovalResult removal =
          remove_ocular_components(work, ica, config.ica.threshold);
      work = std::move(removal.epoch);
      stages.push_back({{"stage", "ica"},
                        {"components", est_data.rows},
                        {"removed", removal.removed_components},
                        {"converged", ica.converged},
                        {"iterations", ica.iterations},
                        {"threshold", config.ica.threshold},
                        {"decimation_factor", factor}});
      return 0;
    });
  }
  {
    run_stage("car", [&] {
      common_average_reference_inplace(work);
      return 0;
    });
    stages.push_back({{"stage", "car"},
                      {"eeg_channels", work.eeg_channel_indices().size()}});
  }
  {
    const std::array<double, 2> cutoffs = {config.bp_lo_hz, config.bp_hi_hz};
    SosCascade bp = run_stage("bandpass", [&] {
      return design_butterworth(config.bp_order, FilterKind::BandPass, cutoffs,
                                work.sample_rate_hz);
    });
    run_stage("bandpass", [&] { filter_epoch(bp, work); return 0; });
    stages.push_back({{"stage", "bandpass"},
                      {"cutoffs_hz", {config.bp_lo_hz, config.bp_hi_hz}},
                      {"order", config.bp_order}});
  }

  result.provenance = {{"seed", seed}, {"stages", stages}};
  return result;
}

}  // namespace musepref::dsp
