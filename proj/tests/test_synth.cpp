#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "musepref/corpus/corpus.hpp"
#include "musepref/corpus/epoch_io.hpp"
#include "musepref/dsp/ica.hpp"
#include "musepref/spectral/bands.hpp"
#include "musepref/spectral/welch.hpp"
#include "musepref/stats/analysis.hpp"
#include "musepref/synth/generate.hpp"
#include "test_util.hpp"

using namespace musepref;
namespace fs = std::filesystem;

namespace {

synth::EffectSpec small_spec(std::uint64_t seed) {
  synth::EffectSpec effect;
  effect.seed = seed;
  effect.sample_rate_hz = 200.0;
  effect.duration_lo_s = 8.0;
  effect.duration_hi_s = 12.0;
  effect.baseline_s = 2.0;
  effect.channels = spectral::region_lookup("Frontal_LR").channels;
  return effect;
}

}  // namespace

TEST_CASE("identical specs produce byte-identical corpora") {
  test_util::TempDir da("synth_a"), db("synth_b");
  auto effect = small_spec(5);
  effect.blink_rate_per_min = 4.0;

  auto ca = synth::generate_corpus(3, 4, effect, da.str());
  auto cb = synth::generate_corpus(3, 4, effect, db.str());
  CHECK(ca.trials.size() == 24);

  CHECK(test_util::slurp(da.str("manifest.json")) ==
        test_util::slurp(db.str("manifest.json")));
  CHECK(test_util::slurp(da.str("trials.csv")) ==
        test_util::slurp(db.str("trials.csv")));
  for (const auto& trial : ca.trials) {
    const auto name = fs::path(trial.eeg_path).filename().string();
    CHECK(test_util::slurp(da.str("eeg/" + name)) ==
          test_util::slurp(db.str("eeg/" + name)));
  }
}

TEST_CASE("generated corpora re-import cleanly") {
  test_util::TempDir dir("synth_import");
  auto effect = small_spec(7);
  effect.blink_rate_per_min = 6.0;
  synth::generate_corpus(3, 4, effect, dir.str());

  auto imported = corpus::import_corpus(dir.str());
  CHECK(imported.issues.empty());
  CHECK(imported.corpus.trials.size() == 24);
  CHECK(imported.corpus.channel_layout.size() == 22 + 2);

  // heart flags remain consistent with labels; epoch loads match the layout
  for (const auto& trial : imported.corpus.trials) {
    CHECK(corpus::derive_label(trial.behavior.heart_melody,
                               trial.behavior.heart_song) == trial.label);
  }
  auto epoch = corpus::load_epoch(imported.corpus, imported.corpus.trials[0]);
  CHECK(epoch.eog_indices.size() == 2);
  CHECK(epoch.duration_s() >= 8.0 + 2.0 - 1e-9);
  CHECK(epoch.duration_s() <= 12.0 + 2.0 + 1e-9);
}

TEST_CASE("labels are joint over the two music types") {
  auto plans = synth::plan_trials(4, 6, small_spec(11));
  REQUIRE(plans.size() == 48);
  for (std::size_t i = 0; i < plans.size(); i += 2) {
    CHECK(plans[i].record.participant_id == plans[i + 1].record.participant_id);
    CHECK(plans[i].record.music_id == plans[i + 1].record.music_id);
    CHECK(plans[i].record.label == plans[i + 1].record.label);
    CHECK(plans[i].type == corpus::MusicType::Melody);
    CHECK(plans[i + 1].type == corpus::MusicType::Song);
  }
}

TEST_CASE("injected tone amplitude is recoverable from noise-free epochs") {
  auto effect = small_spec(13);
  effect.noise_amplitude_uv = 0.0;
  effect.burst_amplitude_uv = 8.0;
  effect.band = 1;  // alpha: a 10 Hz tone
  effect.region = spectral::Region::FrontalRight;
  effect.duration_lo_s = effect.duration_hi_s = 20.0;

  auto plans = synth::plan_trials(1, 1, effect);
  auto epoch = synth::generate_epoch(effect, plans[0]);

  // analyze a Frontal_Right channel after the baseline
  const auto onset = static_cast<std::size_t>(2.0 * effect.sample_rate_hz);
  std::size_t idx = epoch.n_channels();
  for (std::size_t c = 0; c < epoch.n_channels(); ++c)
    if (epoch.channel_names[c] == "Fp2") idx = c;
  REQUIRE(idx < epoch.n_channels());

  auto psd = spectral::welch_psd(epoch.channel(idx).subspan(onset),
                                 effect.sample_rate_hz);
  auto powers = spectral::band_powers_tab(psd.freqs_hz, psd.density);
  const double recovered = std::sqrt(2.0 * powers[1]);
  CHECK(recovered == doctest::Approx(8.0).epsilon(0.10));

  // left-frontal channels carry no tone
  for (std::size_t c = 0; c < epoch.n_channels(); ++c)
    if (epoch.channel_names[c] == "Fp1") idx = c;
  auto quiet = spectral::welch_psd(epoch.channel(idx).subspan(onset),
                                   effect.sample_rate_hz);
  auto quiet_powers = spectral::band_powers_tab(quiet.freqs_hz, quiet.density);
  CHECK(quiet_powers[1] < 1e-6);
}

TEST_CASE("blinks land in frontal EEG and EOG together") {
  auto effect = small_spec(17);
  effect.blink_rate_per_min = 20.0;
  auto plans = synth::plan_trials(1, 1, effect);
  auto epoch = synth::generate_epoch(effect, plans[0]);

  std::size_t fp2 = 0, eog1 = 0;
  for (std::size_t c = 0; c < epoch.n_channels(); ++c) {
    if (epoch.channel_names[c] == "Fp2") fp2 = c;
    if (epoch.channel_names[c] == "EOG1") eog1 = c;
  }
  CHECK(std::abs(dsp::pearson(epoch.channel(fp2), epoch.channel(eog1))) > 0.5);
}

TEST_CASE("a null effect leaves the comparison battery mostly quiet") {
  // one fixed-seed corpus; the 20-replication calibration lives in the
  // acceptance suite
  auto effect = small_spec(23);
  effect.duration_lo_s = 10.0;
  effect.duration_hi_s = 14.0;
  test_util::TempDir dir("synth_null");
  auto corpus = synth::generate_corpus(6, 8, effect, dir.str());

  spectral::FeatureTable table;
  table.channels = corpus.channel_layout;
  table.channels.resize(table.channels.size() - 2);  // drop EOG
  spectral::FeatureParams params;
  params.music_onset_s = effect.baseline_s;
  for (const auto& trial : corpus.trials) {
    auto epoch = corpus::load_epoch(corpus, trial);
    auto powers = spectral::extract_channel_band_powers(epoch, table.channels, params);
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

  // band-power comparisons restricted to the generated frontal montage
  std::vector<stats::ComparisonRow> rows;
  for (auto type : {corpus::MusicType::Melody, corpus::MusicType::Song}) {
    const stats::GroupSelector fav{corpus::PreferenceLabel::Favored, type};
    const stats::GroupSelector non{corpus::PreferenceLabel::NonFavored, type};
    for (auto kind :
         {stats::VariableKind::Familiarity, stats::VariableKind::ResponseRate}) {
      rows.push_back(stats::compare_groups(table, fav, non, {kind}));
    }
    for (auto region :
         {spectral::Region::FrontalLeft, spectral::Region::FrontalRight}) {
      for (int band = 0; band < 3; ++band) {
        rows.push_back(stats::compare_groups(
            table, fav, non, {stats::VariableKind::BandPower, region, band}));
      }
    }
  }
  std::size_t significant = 0;
  for (const auto& row : rows) significant += row.result.significant ? 1u : 0u;
  CHECK(significant <= rows.size() / 4);  // loose smoke bound for one corpus
}

TEST_CASE("effect spec JSON round trips") {
  auto effect = small_spec(3);
  effect.power_ratio = 2.0;
  effect.fam_shift = 0.4;
  effect.blink_rate_per_min = 7.0;
  auto back = synth::EffectSpec::from_json(effect.to_json());
  CHECK(back.to_json() == effect.to_json());

  CHECK_THROWS_AS(
      synth::EffectSpec::from_json(nlohmann::json{{"power_ratio", -1.0}}),
      MalformedManifest);
}
