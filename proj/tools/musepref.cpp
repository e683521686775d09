// Command-line front end: synth -> ingest -> preprocess -> features ->
// stats -> classify -> report. Every stage reads only the previous stage's
// on-disk artifacts and drops a run.json provenance file beside its output.

#include <chrono>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "musepref/common/error.hpp"
#include "musepref/common/parallel.hpp"
#include "musepref/common/rng.hpp"
#include "musepref/corpus/corpus.hpp"
#include "musepref/corpus/epoch_io.hpp"
#include "musepref/dsp/preprocess.hpp"
#include "musepref/modelsel/study.hpp"
#include "musepref/spectral/features.hpp"
#include "musepref/stats/analysis.hpp"
#include "musepref/synth/generate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace musepref;

namespace {

constexpr const char* kToolVersion = "0.1.0";

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

class StageTimer {
 public:
  void start(const std::string& stage) {
    current_ = stage;
    t0_ = std::chrono::steady_clock::now();
  }
  void stop() {
    const auto dt = std::chrono::steady_clock::now() - t0_;
    timings_[current_] =
        std::chrono::duration_cast<std::chrono::milliseconds>(dt).count() / 1e3;
  }
  json to_json() const {
    json j;
    for (const auto& [stage, seconds] : timings_) j[stage] = seconds;
    return j;
  }

 private:
  std::string current_;
  std::chrono::steady_clock::time_point t0_;
  std::map<std::string, double> timings_;
};

void write_run_json(const fs::path& dir, const std::string& command,
                    const json& config, std::uint64_t seed,
                    const StageTimer& timer) {
  fs::create_directories(dir);
  json run = {{"command", command},
              {"version", kToolVersion},
              {"seed", seed},
              {"config", config},
              {"config_hash", hex64(fnv1a(config.dump()))},
              {"stage_timings_s", timer.to_json()},
              {"timestamp",
               std::chrono::duration_cast<std::chrono::seconds>(
                   std::chrono::system_clock::now().time_since_epoch())
                   .count()}};
  std::ofstream out(dir / "run.json");
  out << run.dump(2) << '\n';
}

spectral::FeatureParams feature_params_from(double onset, double window,
                                            double overlap,
                                            const std::string& norm) {
  spectral::FeatureParams params;
  params.music_onset_s = onset;
  params.welch.window_s = window;
  params.welch.overlap = overlap;
  if (norm == "band")
    params.normalization = spectral::NormalizationMode::BandSum;
  else if (norm == "total")
    params.normalization = spectral::NormalizationMode::TotalPower;
  else
    throw std::invalid_argument("--norm must be band or total");
  return params;
}

std::vector<std::string> split_csv_arg(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_synth(const std::string& effect_path, const std::string& out_dir,
              std::size_t participants, std::size_t music) {
  StageTimer timer;
  timer.start("synth");
  synth::EffectSpec effect = synth::EffectSpec::load(effect_path);
  synth::generate_corpus(participants, music, effect, out_dir);
  timer.stop();
  write_run_json(out_dir, "synth", effect.to_json(), effect.seed, timer);
  std::cout << "synth: wrote " << participants * music * 2 << " epochs to "
            << out_dir << "\n";
  return 0;
}

int cmd_ingest(const std::string& root, const std::string& out_dir) {
  StageTimer timer;
  timer.start("ingest");
  corpus::ImportResult imported = corpus::import_corpus(root);
  for (const auto& issue : imported.issues)
    std::cerr << "ingest: " << issue << "\n";

  if (fs::weakly_canonical(root) == fs::weakly_canonical(out_dir))
    throw MalformedManifest("ingest output must differ from the input directory");

  corpus::Corpus normalized = imported.corpus;
  for (auto& trial : normalized.trials) {
    trial.eeg_path =
        (fs::path(out_dir) / "eeg" /
         corpus::epoch_filename(trial.participant_id, trial.music_id,
                                trial.music_type))
            .string();
  }
  corpus::write_corpus_metadata(out_dir, normalized);
  parallel_for(imported.corpus.trials.size(), [&](std::size_t i) {
    const auto& src = imported.corpus.trials[i];
    corpus::EegEpoch epoch = corpus::load_epoch(imported.corpus, src);
    corpus::write_epoch(normalized.trials[i].eeg_path, epoch);
  });
  timer.stop();
  write_run_json(out_dir, "ingest", {{"root", root}}, 0, timer);
  std::cout << "ingest: " << normalized.trials.size() << " trials ("
            << imported.issues.size() << " malformed rows reported)\n";
  return 0;
}

int cmd_preprocess(const std::string& corpus_dir, const std::string& config_path,
                   const std::string& out_dir, std::uint64_t seed) {
  StageTimer timer;
  timer.start("preprocess");
  dsp::PreprocessConfig config = config_path.empty()
                                     ? dsp::PreprocessConfig{}
                                     : dsp::PreprocessConfig::load(config_path);
  corpus::ImportResult imported = corpus::import_corpus(corpus_dir);

  corpus::Corpus out_corpus = imported.corpus;
  for (auto& trial : out_corpus.trials) {
    trial.eeg_path =
        (fs::path(out_dir) / "eeg" /
         corpus::epoch_filename(trial.participant_id, trial.music_id,
                                trial.music_type))
            .string();
  }
  corpus::write_corpus_metadata(out_dir, out_corpus);

  parallel_for(imported.corpus.trials.size(), [&](std::size_t i) {
    const auto& src = imported.corpus.trials[i];
    corpus::EegEpoch epoch = corpus::load_epoch(imported.corpus, src);
    const std::uint64_t trial_seed =
        derive_seed(seed, fnv1a(src.participant_id), fnv1a(src.music_id),
                    src.music_type == corpus::MusicType::Melody ? 0 : 1);
    dsp::PreprocessResult result = dsp::preprocess(epoch, config, trial_seed);
    corpus::write_epoch(out_corpus.trials[i].eeg_path, result.epoch);
    std::ofstream prov(out_corpus.trials[i].eeg_path + ".prov.json");
    prov << result.provenance.dump(2) << '\n';
  });
  timer.stop();
  write_run_json(out_dir, "preprocess", config.to_json(), seed, timer);
  std::cout << "preprocess: " << out_corpus.trials.size() << " epochs -> "
            << out_dir << "\n";
  return 0;
}

int cmd_features(const std::string& pre_dir, const std::string& out_dir,
                 const std::string& regions_arg, double onset, double window,
                 double overlap, const std::string& norm) {
  StageTimer timer;
  timer.start("features");
  corpus::ImportResult imported = corpus::import_corpus(pre_dir);
  const corpus::Corpus& c = imported.corpus;

  spectral::FeatureParams params =
      feature_params_from(onset, window, overlap, norm);

  std::vector<std::string> channels;  // empty = all EEG channels
  if (regions_arg != "all") {
    for (const auto& name : split_csv_arg(regions_arg)) {
      for (const auto& ch : spectral::region_lookup(name).channels) {
        if (std::find(channels.begin(), channels.end(), ch) == channels.end())
          channels.push_back(ch);
      }
    }
  }

  spectral::FeatureTable table;
  table.trials.resize(c.trials.size());
  std::vector<std::vector<std::string>> names(c.trials.size());
  parallel_for(c.trials.size(), [&](std::size_t i) {
    corpus::EegEpoch epoch = corpus::load_epoch(c, c.trials[i]);
    spectral::ChannelBandPowers powers =
        spectral::extract_channel_band_powers(epoch, channels, params);
    spectral::TrialFeatures& t = table.trials[i];
    const auto& trial = c.trials[i];
    t.participant_id = trial.participant_id;
    t.music_id = trial.music_id;
    t.music_type = trial.music_type;
    t.label = trial.label;
    t.familiarity = trial.behavior.familiarity;
    t.response_rate = trial.behavior.response_rate_hz;
    t.bands = powers.relative;
    names[i] = powers.channel_names;
  });
  if (!table.trials.empty()) table.channels = names.front();

  fs::create_directories(out_dir);
  spectral::write_feature_csv((fs::path(out_dir) / "features.csv").string(),
                              table);
  json feat_config = {{"regions", regions_arg},
                      {"music_onset_s", onset},
                      {"psd", "welch"},
                      {"welch_window_s", window},
                      {"welch_overlap", overlap},
                      {"normalization", norm == "band" ? "theta+alpha+beta"
                                                       : "total 2-45 Hz power"}};
  std::ofstream pf(fs::path(out_dir) / "feature_params.json");
  pf << feat_config.dump(2) << '\n';
  timer.stop();
  write_run_json(out_dir, "features", feat_config, 0, timer);
  std::cout << "features: " << table.trials.size() << " trials x "
            << table.channels.size() << " channels -> " << out_dir << "\n";
  return 0;
}

int cmd_stats(const std::string& feat_dir, const std::string& out_csv,
              double alpha, int trend_bins) {
  StageTimer timer;
  timer.start("stats");
  spectral::FeatureTable table = spectral::read_feature_csv(
      (fs::path(feat_dir) / "features.csv").string());

  std::vector<stats::ComparisonRow> rows = stats::standard_comparisons(table, alpha);
  stats::write_significance_csv(out_csv, rows);

  const fs::path out_dir = fs::path(out_csv).has_parent_path()
                               ? fs::path(out_csv).parent_path()
                               : fs::path(".");
  for (auto type : {corpus::MusicType::Melody, corpus::MusicType::Song}) {
    std::vector<double> fam, resr;
    std::vector<corpus::PreferenceLabel> labels;
    for (const auto& t : table.trials) {
      if (t.music_type != type) continue;
      fam.push_back(t.familiarity);
      resr.push_back(t.response_rate);
      labels.push_back(t.label);
    }
    auto bins = stats::median_trend(fam, resr, labels, trend_bins, alpha);
    stats::write_trend_csv(
        (out_dir / ("trend_" + corpus::to_string(type) + ".csv")).string(), bins);
  }
  timer.stop();
  write_run_json(out_dir, "stats", {{"alpha", alpha}, {"trend_bins", trend_bins}},
                 0, timer);

  std::size_t significant = 0;
  for (const auto& row : rows) significant += row.result.significant ? 1u : 0u;
  std::cout << "stats: " << rows.size() << " comparisons, " << significant
            << " significant at alpha=" << alpha << " -> " << out_csv << "\n";
  return 0;
}

int cmd_classify(const std::string& feat_dir, const std::string& out_dir,
                 const std::string& models_arg, const std::string& behaviors_arg,
                 const std::string& regions_arg, const std::string& types_arg,
                 std::uint64_t seed, const std::string& grid_arg, bool gamma_fix,
                 const std::string& f1_avg, int k, bool retrain_with_val,
                 bool group_by_participant) {
  StageTimer timer;
  timer.start("classify");
  spectral::FeatureTable table = spectral::read_feature_csv(
      (fs::path(feat_dir) / "features.csv").string());

  modelsel::StudyOptions options;
  options.families.clear();
  for (const auto& m : split_csv_arg(models_arg))
    options.families.push_back(modelsel::model_family_from_string(m));

  options.behavior_variants.clear();
  for (const auto& b : split_csv_arg(behaviors_arg)) {
    if (b == "none")
      options.behavior_variants.push_back({false, false});
    else if (b == "fam")
      options.behavior_variants.push_back({true, false});
    else if (b == "resr")
      options.behavior_variants.push_back({false, true});
    else if (b == "fam+resr")
      options.behavior_variants.push_back({true, true});
    else
      throw std::invalid_argument("unknown behavior variant: " + b);
  }

  if (regions_arg != "all") {
    options.regions.clear();
    for (const auto& r : split_csv_arg(regions_arg))
      options.regions.push_back(spectral::region_lookup(r).region);
  }
  if (types_arg != "both") {
    options.music_types.clear();
    for (const auto& t : split_csv_arg(types_arg))
      options.music_types.push_back(corpus::music_type_from_string(t));
  }

  options.cv.k = k;
  options.cv.seed = seed;
  options.cv.f1_average = modelsel::f1_average_from_string(f1_avg);
  options.cv.retrain_with_validation = retrain_with_val;
  options.cv.group_by_participant = group_by_participant;
  if (grid_arg == "full")
    options.grids = modelsel::GridSet::defaults(gamma_fix);
  else if (grid_arg == "quick")
    options.grids = modelsel::GridSet::quick();
  else
    throw std::invalid_argument("--grid must be full or quick");

  modelsel::StudyTable study = modelsel::run_study(table, options);
  study.configuration["grid"] = grid_arg;
  study.configuration["gamma_fix"] = gamma_fix;
  const fs::path fp = fs::path(feat_dir) / "feature_params.json";
  if (fs::exists(fp)) {
    std::ifstream in(fp);
    json j;
    in >> j;
    study.configuration["features"] = j;
  }

  fs::create_directories(out_dir);
  modelsel::write_study_csv((fs::path(out_dir) / "study.csv").string(), study);
  std::ofstream js(fs::path(out_dir) / "study.json");
  js << modelsel::study_to_json(study).dump(2) << '\n';
  timer.stop();
  write_run_json(out_dir, "classify", study.configuration, seed, timer);

  std::size_t ok = 0;
  for (const auto& cell : study.cells) ok += cell.report ? 1u : 0u;
  std::cout << "classify: " << study.cells.size() << " cells (" << ok
            << " completed) -> " << out_dir << "\n";
  return 0;
}

int cmd_report(const std::string& reports_dir, const std::string& format,
               const std::string& out_path) {
  if (format != "md" && format != "json" && format != "csv")
    throw std::invalid_argument("--format must be csv, json or md");
  std::ifstream in(fs::path(reports_dir) / "study.json");
  if (!in) throw MissingFile("study.json not found in " + reports_dir);
  json j;
  in >> j;
  modelsel::StudyTable study = modelsel::study_from_json(j);

  std::string payload;
  if (format == "md") {
    payload = modelsel::render_best_markdown(study);
  } else if (format == "json") {
    payload = modelsel::study_to_json(study).dump(2) + "\n";
  } else if (format == "csv") {
    const std::string tmp =
        (fs::path(reports_dir) / ".report_tmp.csv").string();
    modelsel::write_study_csv(tmp, study);
    std::ifstream tf(tmp);
    std::stringstream ss;
    ss << tf.rdbuf();
    payload = ss.str();
    fs::remove(tmp);
  } else {
    throw std::invalid_argument("--format must be csv, json or md");
  }

  if (out_path.empty()) {
    std::cout << payload;
  } else {
    std::ofstream out(out_path);
    out << payload;
    std::cout << "report: wrote " << out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EEG music-preference analysis toolkit"};
  app.require_subcommand(1);

  // synth
  std::string synth_effect, synth_out;
  std::size_t synth_participants = 20, synth_music = 22;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic corpus");
  synth_cmd->add_option("effect", synth_effect, "EffectSpec JSON")->required();
  synth_cmd->add_option("-o,--out", synth_out, "output corpus directory")->required();
  synth_cmd->add_option("--participants", synth_participants, "participant count");
  synth_cmd->add_option("--music", synth_music, "music stimulus count");

  // ingest
  std::string ingest_root, ingest_out;
  auto* ingest_cmd = app.add_subcommand("ingest", "validate and normalize a corpus");
  ingest_cmd->add_option("root", ingest_root, "corpus root directory")->required();
  ingest_cmd->add_option("-o,--out", ingest_out, "normalized output directory")
      ->required();

  // preprocess
  std::string pre_corpus, pre_config, pre_out;
  std::uint64_t pre_seed = 0;
  auto* pre_cmd = app.add_subcommand("preprocess", "run the preprocessing chain");
  pre_cmd->add_option("corpus", pre_corpus, "corpus directory")->required();
  pre_cmd->add_option("-c,--config", pre_config, "PreprocessConfig JSON");
  pre_cmd->add_option("-o,--out", pre_out, "output directory")->required();
  pre_cmd->add_option("--seed", pre_seed, "base seed for ICA");

  // features
  std::string feat_pre, feat_out, feat_regions = "all", feat_norm = "band";
  double feat_onset = 5.0, feat_window = 4.0, feat_overlap = 0.5;
  auto* feat_cmd = app.add_subcommand("features", "extract spectral band powers");
  feat_cmd->add_option("pre", feat_pre, "preprocessed corpus directory")->required();
  feat_cmd->add_option("-o,--out", feat_out, "output directory")->required();
  feat_cmd->add_option("--regions", feat_regions,
                       "'all' or comma list of region names");
  feat_cmd->add_option("--onset", feat_onset, "music onset (s), baseline excluded");
  feat_cmd->add_option("--window", feat_window, "Welch window (s)");
  feat_cmd->add_option("--overlap", feat_overlap, "Welch overlap fraction");
  feat_cmd->add_option("--norm", feat_norm, "normalization: band|total");

  // stats
  std::string stats_feat, stats_out = "stats.csv";
  double stats_alpha = 0.05;
  int stats_bins = 10;
  auto* stats_cmd = app.add_subcommand("stats", "nonparametric group comparisons");
  stats_cmd->add_option("features", stats_feat, "feature directory")->required();
  stats_cmd->add_option("-o,--out", stats_out, "significance table CSV path");
  stats_cmd->add_option("--alpha", stats_alpha, "significance level");
  stats_cmd->add_option("--trend-bins", stats_bins, "familiarity bins for the trend");

  // classify
  std::string cls_feat, cls_out, cls_models = "svm,rf,knn";
  std::string cls_behaviors = "none,fam,resr,fam+resr";
  std::string cls_regions = "all", cls_types = "both", cls_grid = "full";
  std::string cls_f1 = "binary";
  std::uint64_t cls_seed = 0;
  int cls_k = 10;
  bool cls_gamma_fix = false, cls_retrain_val = false, cls_grouped = false;
  auto* cls_cmd = app.add_subcommand("classify", "nested-CV grid-search study");
  cls_cmd->add_option("features", cls_feat, "feature directory")->required();
  cls_cmd->add_option("-o,--out", cls_out, "reports output directory")->required();
  cls_cmd->add_option("--models", cls_models, "comma list: svm,rf,knn");
  cls_cmd->add_option("--behaviors", cls_behaviors,
                      "comma list: none,fam,resr,fam+resr");
  cls_cmd->add_option("--regions", cls_regions, "'all' or comma list");
  cls_cmd->add_option("--music-types", cls_types, "'both' or comma list");
  cls_cmd->add_option("--seed", cls_seed, "cross-validation seed");
  cls_cmd->add_option("--grid", cls_grid, "hyperparameter grid: full|quick");
  cls_cmd->add_flag("--gamma-fix", cls_gamma_fix,
                    "replace the printed gamma=0.11 with 0.1");
  cls_cmd->add_option("--f1-average", cls_f1, "binary|macro|weighted");
  cls_cmd->add_option("--k", cls_k, "fold count");
  cls_cmd->add_flag("--retrain-with-val", cls_retrain_val,
                    "refit on train+validation after selection");
  cls_cmd->add_flag("--group-by-participant", cls_grouped,
                    "participant-grouped folds");

  // report
  std::string rep_dir, rep_format = "md", rep_out;
  auto* rep_cmd = app.add_subcommand("report", "render classification tables");
  rep_cmd->add_option("reports", rep_dir, "reports directory")->required();
  rep_cmd->add_option("--format", rep_format, "csv|json|md");
  rep_cmd->add_option("-o,--out", rep_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (synth_cmd->parsed())
      return cmd_synth(synth_effect, synth_out, synth_participants, synth_music);
    if (ingest_cmd->parsed()) return cmd_ingest(ingest_root, ingest_out);
    if (pre_cmd->parsed())
      return cmd_preprocess(pre_corpus, pre_config, pre_out, pre_seed);
    if (feat_cmd->parsed())
      return cmd_features(feat_pre, feat_out, feat_regions, feat_onset,
                          feat_window, feat_overlap, feat_norm);
    if (stats_cmd->parsed())
      return cmd_stats(stats_feat, stats_out, stats_alpha, stats_bins);
    if (cls_cmd->parsed())
      return cmd_classify(cls_feat, cls_out, cls_models, cls_behaviors,
                          cls_regions, cls_types, cls_seed, cls_grid,
                          cls_gamma_fix, cls_f1, cls_k, cls_retrain_val,
                          cls_grouped);
    if (rep_cmd->parsed()) return cmd_report(rep_dir, rep_format, rep_out);
  } catch (const DomainError& e) {
    std::cerr << "error [" << e.module() << "/" << e.code() << "]: " << e.what()
              << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
