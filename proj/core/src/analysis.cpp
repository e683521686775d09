#include "musepref/stats/analysis.hpp"

#include <cmath>
#include <cstdio>

#include "musepref/common/csv.hpp"
#include "musepref/common/error.hpp"

namespace musepref::stats {

namespace {

const char* kBandNames[3] = {"theta", "alpha", "beta"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double variable_value(const spectral::FeatureTable& table,
                      const spectral::TrialFeatures& trial, const Variable& v) {
  switch (v.kind) {
    case VariableKind::Familiarity:
      return trial.familiarity;
    case VariableKind::ResponseRate:
      return trial.response_rate;
    case VariableKind::BandPower: {
      auto mean = table.region_mean(trial, spectral::region_lookup(v.region));
      return mean[static_cast<std::size_t>(v.band)];
    }
  }
  return 0.0;
}

}  // namespace

std::string GroupSelector::name() const {
  return corpus::to_string(label) + "-" + corpus::to_string(music_type);
}

std::string Variable::name() const {
  switch (kind) {
    case VariableKind::Familiarity: return "familiarity";
    case VariableKind::ResponseRate: return "response_rate";
    case VariableKind::BandPower: return "band_power";
  }
  return "?";
}

ComparisonRow compare_groups(const spectral::FeatureTable& table,
                             const GroupSelector& group_a,
                             const GroupSelector& group_b,
                             const Variable& variable, double alpha) {
  std::vector<double> a, b;
  for (const auto& trial : table.trials) {
    if (trial.label == corpus::PreferenceLabel::Undecided) continue;
    if (trial.label == group_a.label && trial.music_type == group_a.music_type)
      a.push_back(variable_value(table, trial, variable));
    if (trial.label == group_b.label && trial.music_type == group_b.music_type)
      b.push_back(variable_value(table, trial, variable));
  }
  if (a.empty() || b.empty())
    throw EmptySample("grouping " + group_a.name() + " vs " + group_b.name() +
                      " selected an empty group");

  ComparisonRow row;
  row.comparison = group_a.name() + " vs " + group_b.name();
  row.variable = variable.name();
  if (variable.kind == VariableKind::BandPower) {
    row.region = spectral::region_lookup(variable.region).name;
    row.band = kBandNames[variable.band];
  }
  row.result = mann_whitney_u(a, b, alpha);
  return row;
}

std::vector<ComparisonRow> standard_comparisons(const spectral::FeatureTable& table,
                                                double alpha) {
  using corpus::MusicType;
  using corpus::PreferenceLabel;
  const GroupSelector fav_mel{PreferenceLabel::Favored, MusicType::Melody};
  const GroupSelector fav_song{PreferenceLabel::Favored, MusicType::Song};
  const GroupSelector non_mel{PreferenceLabel::NonFavored, MusicType::Melody};
  const GroupSelector non_song{PreferenceLabel::NonFavored, MusicType::Song};

  std::vector<ComparisonRow> rows;
  for (auto kind : {VariableKind::Familiarity, VariableKind::ResponseRate}) {
    Variable v{kind};
    rows.push_back(compare_groups(table, fav_mel, non_mel, v, alpha));
    rows.push_back(compare_groups(table, fav_song, non_song, v, alpha));
    rows.push_back(compare_groups(table, fav_mel, fav_song, v, alpha));
    rows.push_back(compare_groups(table, non_mel, non_song, v, alpha));
  }

  // band-power comparisons for every lateral region fully covered by the
  // feature table's channels (reduced montages skip the rest)
  std::vector<spectral::Region> regions;
  for (auto region :
       {spectral::Region::HemisphereLeft, spectral::Region::HemisphereRight,
        spectral::Region::FrontalLeft, spectral::Region::FrontalRight}) {
    bool covered = true;
    for (const auto& ch : spectral::region_lookup(region).channels)
      if (table.channel_index(ch) < 0) covered = false;
    if (covered) regions.push_back(region);
  }

  for (auto type : {MusicType::Melody, MusicType::Song}) {
    const GroupSelector fav{PreferenceLabel::Favored, type};
    const GroupSelector non{PreferenceLabel::NonFavored, type};
    for (auto region : regions) {
      for (int band = 0; band < 3; ++band) {
        Variable v{VariableKind::BandPower, region, band};
        rows.push_back(compare_groups(table, fav, non, v, alpha));
      }
    }
  }
  return rows;
}

void write_significance_csv(const std::string& path,
                            const std::vector<ComparisonRow>& rows) {
  csv::Table out;
  out.header = {"comparison", "variable", "region",   "band", "n_a", "n_b",
                "median_a",   "median_b", "U",        "p",    "significant"};
  for (const auto& row : rows) {
    out.rows.push_back({row.comparison, row.variable, row.region, row.band,
                        std::to_string(row.result.n_a),
                        std::to_string(row.result.n_b), fmt(row.result.median_a),
                        fmt(row.result.median_b), fmt(row.result.u_statistic),
                        fmt(row.result.p_value),
                        row.result.significant ? "1" : "0"});
  }
  csv::write_file(path, out);
}

std::vector<TrendBin> median_trend(std::span<const double> familiarity,
                                   std::span<const double> response_rate,
                                   std::span<const corpus::PreferenceLabel> labels,
                                   int n_bins, double alpha) {
  if (familiarity.size() != response_rate.size() ||
      familiarity.size() != labels.size())
    throw LengthMismatch("median_trend inputs must be aligned");
  if (n_bins < 2) throw std::invalid_argument("median_trend: n_bins must be >= 2");

  const double width = 2.0 / n_bins;
  std::vector<TrendBin> bins(static_cast<std::size_t>(n_bins));
  for (int i = 0; i < n_bins; ++i) {
    bins[static_cast<std::size_t>(i)].lo = -1.0 + i * width;
    bins[static_cast<std::size_t>(i)].hi = -1.0 + (i + 1) * width;
  }
  bins.back().hi = 1.0;

  std::vector<std::vector<double>> fav(bins.size()), non(bins.size());
  for (std::size_t i = 0; i < familiarity.size(); ++i) {
    if (labels[i] == corpus::PreferenceLabel::Undecided) continue;
    int idx = static_cast<int>(std::floor((familiarity[i] + 1.0) / width));
    idx = std::clamp(idx, 0, n_bins - 1);
    auto& bucket = labels[i] == corpus::PreferenceLabel::Favored
                       ? fav[static_cast<std::size_t>(idx)]
                       : non[static_cast<std::size_t>(idx)];
    bucket.push_back(response_rate[i]);
  }

  for (std::size_t i = 0; i < bins.size(); ++i) {
    bins[i].n_favored = fav[i].size();
    bins[i].n_nonfavored = non[i].size();
    if (fav[i].size() >= 3) bins[i].median_favored = median(fav[i]);
    if (non[i].size() >= 3) bins[i].median_nonfavored = median(non[i]);
  }
  if (!fav.back().empty() && !non.back().empty())
    bins.back().top_bin_test = mann_whitney_u(fav.back(), non.back(), alpha);
  return bins;
}

void write_trend_csv(const std::string& path, const std::vector<TrendBin>& bins) {
  csv::Table out;
  out.header = {"bin_lo",        "bin_hi",          "n_favored",
                "n_nonfavored",  "median_favored",  "median_nonfavored",
                "top_bin_p",     "top_bin_significant"};
  for (const auto& bin : bins) {
    out.rows.push_back(
        {fmt(bin.lo), fmt(bin.hi), std::to_string(bin.n_favored),
         std::to_string(bin.n_nonfavored),
         bin.median_favored ? fmt(*bin.median_favored) : "",
         bin.median_nonfavored ? fmt(*bin.median_nonfavored) : "",
         bin.top_bin_test ? fmt(bin.top_bin_test->p_value) : "",
         bin.top_bin_test ? (bin.top_bin_test->significant ? "1" : "0") : ""});
  }
  csv::write_file(path, out);
}

}  // namespace musepref::stats
