#pragma once

#include <optional>
#include <string>
#include <vector>

#include "musepref/corpus/types.hpp"
#include "musepref/spectral/features.hpp"
#include "musepref/stats/mann_whitney.hpp"

namespace musepref::stats {

struct GroupSelector {
  corpus::PreferenceLabel label = corpus::PreferenceLabel::Favored;
  corpus::MusicType music_type = corpus::MusicType::Melody;

  std::string name() const;
};

enum class VariableKind { Familiarity, ResponseRate, BandPower };

struct Variable {
  VariableKind kind = VariableKind::Familiarity;
  spectral::Region region = spectral::Region::HemisphereLeft;  // BandPower only
  int band = 0;  // 0 theta, 1 alpha, 2 beta

  std::string name() const;
};

struct ComparisonRow {
  std::string comparison;
  std::string variable;
  std::string region;  // empty for behavioral variables
  std::string band;
  TestResult result;
};

ComparisonRow compare_groups(const spectral::FeatureTable& table,
                             const GroupSelector& group_a,
                             const GroupSelector& group_b,
                             const Variable& variable, double alpha = 0.05);

// The full pairwise battery reported by the toolkit: familiarity and
// response rate across the four label x type group pairs, and the
// favored-vs-non-favored band-power comparison for every lateral region and
// band within each music type. Trials pool across participants.
std::vector<ComparisonRow> standard_comparisons(const spectral::FeatureTable& table,
                                                double alpha = 0.05);

void write_significance_csv(const std::string& path,
                            const std::vector<ComparisonRow>& rows);

struct TrendBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n_favored = 0;
  std::size_t n_nonfavored = 0;
  std::optional<double> median_favored;     // reported when n >= 3
  std::optional<double> median_nonfavored;  // reported when n >= 3
  std::optional<TestResult> top_bin_test;   // set on the last bin only
};

// Equal-width familiarity bins over [-1, 1] with per-group median response
// rates; the top bin carries a favored-vs-non-favored comparison.
std::vector<TrendBin> median_trend(std::span<const double> familiarity,
                                   std::span<const double> response_rate,
                                   std::span<const corpus::PreferenceLabel> labels,
                                   int n_bins = 10, double alpha = 0.05);

void write_trend_csv(const std::string& path, const std::vector<TrendBin>& bins);

}  // namespace musepref::stats
