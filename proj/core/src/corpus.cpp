#include "musepref/corpus/corpus.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "musepref/common/csv.hpp"
#include "musepref/corpus/epoch_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace musepref::corpus {

std::string to_string(MusicType t) {
  return t == MusicType::Melody ? "Melody" : "Song";
}

std::string to_string(PreferenceLabel l) {
  switch (l) {
    case PreferenceLabel::Favored: return "Favored";
    case PreferenceLabel::NonFavored: return "NonFavored";
    default: return "Undecided";
  }
}

MusicType music_type_from_string(const std::string& s) {
  if (s == "Melody") return MusicType::Melody;
  if (s == "Song") return MusicType::Song;
  throw MalformedManifest("unknown music_type: '" + s + "'");
}

namespace {

std::vector<std::string> build_eeg_channels() {
  // front-to-back, left-to-right within each row
  return {
      "Fp1", "Fp2",
      "AF7", "AF5", "AF3", "AFz", "AF4", "AF6", "AF8",
      "F7",  "F5",  "F3",  "F1",  "Fz",  "F2",  "F4",  "F6",  "F8",
      "FT7", "FC5", "FC3", "FC1", "FCz", "FC2", "FC4", "FC6", "FT8",
      "T7",  "C5",  "C3",  "C1",  "Cz",  "C2",  "C4",  "C6",  "T8",
      "TP7", "CP5", "CP3", "CP1", "CPz", "CP2", "CP4", "CP6", "TP8",
      "P7",  "P5",  "P3",  "P1",  "Pz",  "P2",  "P4",  "P6",  "P8",
      "PO7", "PO3", "POz", "PO4", "PO8",
      "O1",  "Oz",  "O2"};
}

}  // namespace

const std::vector<std::string>& canonical_eeg_channels() {
  static const std::vector<std::string> channels = build_eeg_channels();
  return channels;
}

const std::vector<std::string>& canonical_eog_channels() {
  static const std::vector<std::string> channels = {"EOG1", "EOG2"};
  return channels;
}

const std::vector<std::string>& canonical_channel_layout() {
  static const std::vector<std::string> layout = [] {
    auto all = build_eeg_channels();
    for (const auto& e : canonical_eog_channels()) all.push_back(e);
    return all;
  }();
  return layout;
}

std::string epoch_filename(const std::string& participant_id,
                           const std::string& music_id, MusicType type) {
  return participant_id + "_" + music_id + "_" + to_string(type) + ".eegt";
}

PreferenceLabel derive_label(bool heart_melody, bool heart_song) {
  if (heart_melody && heart_song) return PreferenceLabel::Favored;
  if (!heart_melody && !heart_song) return PreferenceLabel::NonFavored;
  return PreferenceLabel::Undecided;
}

double compute_response_rate(double assessment_time_s) {
  if (!(assessment_time_s > 0.0))
    throw NonPositiveTime("assessment time must be > 0 s, got " +
                          std::to_string(assessment_time_s));
  return 1.0 / assessment_time_s;
}

namespace {

json load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingFile("manifest not found: " + path);
  json m;
  try {
    in >> m;
  } catch (const json::exception& e) {
    throw MalformedManifest(std::string("manifest parse error: ") + e.what());
  }
  for (const char* key :
       {"dataset_name", "sample_rate_hz", "units", "channel_layout", "eog_channels"}) {
    if (!m.contains(key))
      throw MalformedManifest(std::string("manifest missing key: ") + key);
  }
  return m;
}

std::optional<double> parse_double(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<bool> parse_flag(const std::string& s) {
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  return std::nullopt;
}

}  // namespace

ImportResult import_corpus(const std::string& root_dir,
                           const std::string& manifest_path) {
  json m = load_manifest(manifest_path);

  ImportResult result;
  Corpus& corpus = result.corpus;
  corpus.root_dir = root_dir;
  corpus.dataset_name = m["dataset_name"].get<std::string>();
  corpus.sample_rate_hz = m["sample_rate_hz"].get<double>();
  corpus.units = m["units"].get<std::string>();
  corpus.channel_layout = m["channel_layout"].get<std::vector<std::string>>();
  corpus.eog_channels = m["eog_channels"].get<std::vector<std::string>>();

  const fs::path root(root_dir);
  const fs::path trials_path = root / "trials.csv";
  if (!fs::exists(trials_path))
    throw MissingFile("trials.csv not found in " + root_dir);

  csv::Table table = csv::read_file(trials_path.string());
  const csv::Table expected_header{csv::split_line(kTrialsCsvHeader), {}};
  if (table.header != expected_header.header)
    throw MalformedManifest("trials.csv header does not match canonical schema");

  std::set<std::tuple<std::string, std::string, MusicType>> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = "trials.csv row " + std::to_string(r + 2);
    if (row.size() != table.header.size()) {
      result.issues.push_back(where + ": wrong field count");
      continue;
    }
    TrialRecord trial;
    trial.participant_id = row[0];
    trial.music_id = row[1];
    try {
      trial.music_type = music_type_from_string(row[2]);
    } catch (const MalformedManifest&) {
      result.issues.push_back(where + ": bad music_type '" + row[2] + "'");
      continue;
    }
    auto hm = parse_flag(row[3]);
    auto hs = parse_flag(row[4]);
    auto fam = parse_double(row[5]);
    auto at = parse_double(row[6]);
    if (!hm || !hs || !fam || !at) {
      result.issues.push_back(where + ": unparseable heart/familiarity/time field");
      continue;
    }
    if (*fam < -1.0 || *fam > 1.0) {
      result.issues.push_back(where + ": familiarity outside [-1, 1]");
      continue;
    }
    if (!(*at > 0.0)) {
      result.issues.push_back(where + ": non-positive assessment time");
      continue;
    }
    trial.behavior.heart_melody = *hm;
    trial.behavior.heart_song = *hs;
    trial.behavior.familiarity = *fam;
    trial.behavior.assessment_time_s = *at;
    trial.behavior.response_rate_hz = compute_response_rate(*at);
    trial.label = derive_label(*hm, *hs);
    trial.valence = row[7];
    trial.arousal = row[8];
    trial.star = row[9];

    auto key = std::make_tuple(trial.participant_id, trial.music_id, trial.music_type);
    if (!seen.insert(key).second) {
      result.issues.push_back(where + ": duplicate (participant, music, type)");
      continue;
    }

    const fs::path epoch_path =
        root / "eeg" / epoch_filename(trial.participant_id, trial.music_id, trial.music_type);
    if (!fs::exists(epoch_path))
      throw MissingFile("trial " + trial.participant_id + "/" + trial.music_id +
                        "/" + to_string(trial.music_type) +
                        " references absent epoch " + epoch_path.string());
    EpochHeader header = read_epoch_header(epoch_path.string());
    if (header.channel_names != corpus.channel_layout)
      throw ChannelMismatch("epoch " + epoch_path.string() +
                            " channel names do not match manifest layout");
    if (header.sample_rate_hz > 0 &&
        static_cast<double>(header.n_samples) / header.sample_rate_hz < kMinEpochSeconds)
      throw MalformedManifest("epoch " + epoch_path.string() + " shorter than " +
                              std::to_string(kMinEpochSeconds) + " s");
    trial.eeg_path = epoch_path.string();
    corpus.trials.push_back(std::move(trial));
  }
  return result;
}

ImportResult import_corpus(const std::string& root_dir) {
  return import_corpus(root_dir, (fs::path(root_dir) / "manifest.json").string());
}

void write_corpus_metadata(const std::string& root_dir, const Corpus& corpus) {
  fs::create_directories(fs::path(root_dir) / "eeg");

  json m;
  m["dataset_name"] = corpus.dataset_name;
  m["sample_rate_hz"] = corpus.sample_rate_hz;
  m["units"] = corpus.units;
  m["channel_layout"] = corpus.channel_layout;
  m["eog_channels"] = corpus.eog_channels;
  std::ofstream mf(fs::path(root_dir) / "manifest.json");
  mf << m.dump(2) << '\n';

  csv::Table table;
  table.header = csv::split_line(kTrialsCsvHeader);
  for (const auto& t : corpus.trials) {
    std::ostringstream fam, at;
    fam.precision(17);
    at.precision(17);
    fam << t.behavior.familiarity;
    at << t.behavior.assessment_time_s;
    table.rows.push_back({t.participant_id, t.music_id, to_string(t.music_type),
                          t.behavior.heart_melody ? "1" : "0",
                          t.behavior.heart_song ? "1" : "0", fam.str(), at.str(),
                          t.valence, t.arousal, t.star});
  }
  csv::write_file((fs::path(root_dir) / "trials.csv").string(), table);
}

EegEpoch load_epoch(const Corpus& corpus, const TrialRecord& trial) {
  EegEpoch epoch = read_epoch(trial.eeg_path, corpus.eog_channels);
  if (epoch.channel_names != corpus.channel_layout)
    throw ChannelMismatch("epoch " + trial.eeg_path +
                          " channel names do not match corpus layout");
  return epoch;
}

LabelCensus label_census(const Corpus& corpus) {
  LabelCensus census;
  for (auto l : {PreferenceLabel::Favored, PreferenceLabel::NonFavored,
                 PreferenceLabel::Undecided}) {
    census.items[l] = 0;
    for (auto t : {MusicType::Melody, MusicType::Song}) census.trials[{l, t}] = 0;
  }
  std::set<std::pair<std::string, std::string>> counted_items;
  for (const auto& trial : corpus.trials) {
    ++census.trials[{trial.label, trial.music_type}];
    ++census.total_trials;
    if (counted_items.insert({trial.participant_id, trial.music_id}).second)
      ++census.items[trial.label];
  }
  return census;
}

}  // namespace musepref::corpus
