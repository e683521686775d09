#include "musepref/spectral/features.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "musepref/common/csv.hpp"
#include "musepref/common/error.hpp"
#include "musepref/spectral/bands.hpp"

namespace musepref::spectral {

namespace {

std::array<double, 3> analyze_channel(std::span<const double> window,
                                      double sample_rate_hz,
                                      const FeatureParams& params) {
  Psd psd = welch_psd(window, sample_rate_hz, params.welch);
  auto powers = band_powers_tab(psd.freqs_hz, psd.density);
  if (params.normalization == NormalizationMode::BandSum)
    return normalize_bands(powers[0], powers[1], powers[2]);

  const BandDefinition total{"total", 2.0, 45.0};
  auto denom = band_powers(psd.freqs_hz, psd.density, std::span(&total, 1));
  if (!(denom[0] > 0.0)) throw ZeroPower("2-45 Hz power is zero");
  return {powers[0] / denom[0], powers[1] / denom[0], powers[2] / denom[0]};
}

}  // namespace

ChannelBandPowers extract_channel_band_powers(
    const corpus::EegEpoch& epoch, const std::vector<std::string>& channels,
    const FeatureParams& params) {
  const double fs = epoch.sample_rate_hz;
  const auto onset =
      static_cast<std::size_t>(std::lround(params.music_onset_s * fs));
  const auto min_window =
      static_cast<std::size_t>(std::lround(params.welch.window_s * fs));
  if (epoch.n_samples <= onset + min_window)
    throw SignalTooShort("epoch ends " + std::to_string(epoch.duration_s()) +
                         " s after start; need onset + " +
                         std::to_string(params.welch.window_s) + " s");

  std::vector<std::string> names = channels;
  if (names.empty()) {
    for (std::size_t i = 0; i < epoch.n_channels(); ++i)
      if (!epoch.is_eog(i)) names.push_back(epoch.channel_names[i]);
  }

  ChannelBandPowers out;
  out.channel_names = names;
  out.relative.reserve(names.size());
  out.analysis_window_s =
      static_cast<double>(epoch.n_samples - onset) / fs;

  for (const auto& name : names) {
    std::size_t idx = epoch.n_channels();
    for (std::size_t i = 0; i < epoch.n_channels(); ++i) {
      if (epoch.channel_names[i] == name) {
        idx = i;
        break;
      }
    }
    if (idx == epoch.n_channels())
      throw ChannelMismatch("channel '" + name + "' not present in epoch");
    auto full = epoch.channel(idx);
    out.relative.push_back(
        analyze_channel(full.subspan(onset), fs, params));
  }
  return out;
}

SpectralFeatures extract_features(const corpus::EegEpoch& epoch,
                                  const RegionSpec& region,
                                  const FeatureParams& params) {
  ChannelBandPowers powers =
      extract_channel_band_powers(epoch, region.channels, params);

  SpectralFeatures out;
  out.analysis_window_s = powers.analysis_window_s;
  std::array<double, 3> sum{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < powers.channel_names.size(); ++i) {
    out.per_channel[powers.channel_names[i]] = powers.relative[i];
    for (int b = 0; b < 3; ++b) sum[b] += powers.relative[i][b];
  }
  const double n = static_cast<double>(powers.channel_names.size());
  for (int b = 0; b < 3; ++b) out.region_mean[b] = sum[b] / n;
  return out;
}

int FeatureTable::channel_index(const std::string& name) const {
  for (std::size_t i = 0; i < channels.size(); ++i)
    if (channels[i] == name) return static_cast<int>(i);
  return -1;
}

std::array<double, 3> FeatureTable::region_mean(const TrialFeatures& trial,
                                                const RegionSpec& region) const {
  std::array<double, 3> sum{0.0, 0.0, 0.0};
  for (const auto& name : region.channels) {
    int idx = channel_index(name);
    if (idx < 0)
      throw ChannelMismatch("feature table lacks channel '" + name + "'");
    for (int b = 0; b < 3; ++b)
      sum[b] += trial.bands[static_cast<std::size_t>(idx)][b];
  }
  const double n = static_cast<double>(region.channels.size());
  return {sum[0] / n, sum[1] / n, sum[2] / n};
}

namespace {

const char* kBandNames[3] = {"theta", "alpha", "beta"};

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 17);
  (void)ec;
  return std::string(buf, ptr);
}

double parse_double_or_throw(const std::string& s, const std::string& what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw MalformedManifest("bad numeric field in " + what + ": '" + s + "'");
  return v;
}

}  // namespace

void write_feature_csv(const std::string& path, const FeatureTable& table) {
  csv::Table out;
  out.header = {"participant_id", "music_id",    "music_type",
                "label",          "familiarity", "response_rate"};
  for (const auto& ch : table.channels)
    for (const auto* band : kBandNames) out.header.push_back(ch + "_" + band);

  for (const auto& trial : table.trials) {
    std::vector<std::string> row = {
        trial.participant_id,
        trial.music_id,
        corpus::to_string(trial.music_type),
        corpus::to_string(trial.label),
        format_double(trial.familiarity),
        format_double(trial.response_rate)};
    for (const auto& bands : trial.bands)
      for (int b = 0; b < 3; ++b) row.push_back(format_double(bands[b]));
    out.rows.push_back(std::move(row));
  }
  csv::write_file(path, out);
}

FeatureTable read_feature_csv(const std::string& path) {
  csv::Table in = csv::read_file(path);
  FeatureTable table;

  constexpr std::size_t kMetaCols = 6;
  if (in.header.size() < kMetaCols || (in.header.size() - kMetaCols) % 3 != 0)
    throw MalformedManifest("feature CSV header malformed: " + path);
  for (std::size_t c = kMetaCols; c < in.header.size(); c += 3) {
    const std::string& col = in.header[c];
    auto pos = col.rfind("_theta");
    if (pos == std::string::npos)
      throw MalformedManifest("expected <channel>_theta column, got " + col);
    table.channels.push_back(col.substr(0, pos));
  }

  for (const auto& row : in.rows) {
    if (row.size() != in.header.size())
      throw MalformedManifest("feature CSV row width mismatch in " + path);
    TrialFeatures t;
    t.participant_id = row[0];
    t.music_id = row[1];
    t.music_type = corpus::music_type_from_string(row[2]);
    if (row[3] == "Favored")
      t.label = corpus::PreferenceLabel::Favored;
    else if (row[3] == "NonFavored")
      t.label = corpus::PreferenceLabel::NonFavored;
    else
      t.label = corpus::PreferenceLabel::Undecided;
    t.familiarity = parse_double_or_throw(row[4], path);
    t.response_rate = parse_double_or_throw(row[5], path);
    t.bands.reserve(table.channels.size());
    for (std::size_t c = kMetaCols; c < row.size(); c += 3) {
      t.bands.push_back({parse_double_or_throw(row[c], path),
                         parse_double_or_throw(row[c + 1], path),
                         parse_double_or_throw(row[c + 2], path)});
    }
    table.trials.push_back(std::move(t));
  }
  return table;
}

}  // namespace musepref::spectral
