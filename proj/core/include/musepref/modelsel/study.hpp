#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "musepref/modelsel/cv.hpp"

namespace musepref::modelsel {

struct GridSet {
  Grid svm;
  Grid rf;
  Grid knn;

  const Grid& for_family(ModelFamily family) const;
  static GridSet defaults(bool gamma_fix = false);
  static GridSet quick();
};

struct StudyOptions {
  std::vector<ModelFamily> families = {ModelFamily::Svm, ModelFamily::Rf,
                                       ModelFamily::Knn};
  std::vector<spectral::Region> regions = {
      spectral::Region::HemisphereLeft, spectral::Region::HemisphereRight,
      spectral::Region::FrontalLeft,    spectral::Region::FrontalRight,
      spectral::Region::FrontalLR,      spectral::Region::HemisphereLR};
  // (familiarity, response rate): none, fam, resr, fam+resr
  std::vector<std::pair<bool, bool>> behavior_variants = {
      {false, false}, {true, false}, {false, true}, {true, true}};
  std::vector<corpus::MusicType> music_types = {corpus::MusicType::Melody,
                                                corpus::MusicType::Song};
  CvOptions cv;
  GridSet grids = GridSet::defaults();
};

struct StudyCell {
  ModelFamily family = ModelFamily::Svm;
  FeatureConfig config;
  std::optional<CvReport> report;
  std::string error;          // populated when the cell failed
  bool best_for_model = false;  // highest mean F1 for (family, music type)
};

struct StudyTable {
  std::vector<StudyCell> cells;
  // majority-class accuracy per music type, the no-information baseline
  std::map<corpus::MusicType, double> baseline_accuracy;
  nlohmann::json configuration;  // pinned choices echoed into every export
};

// The full factorial over families x regions x behavior variants x music
// types. Cell failures are recorded, not fatal.
StudyTable run_study(const spectral::FeatureTable& table,
                     const StudyOptions& options);

void write_study_csv(const std::string& path, const StudyTable& table);
nlohmann::json study_to_json(const StudyTable& table);
StudyTable study_from_json(const nlohmann::json& j);

enum class BestMetric { F1, Accuracy };

// Markdown summary: per model x music type, the best cell without behaviors
// and the best with behaviors, formatted "value ± se ^region-code", plus the
// baseline row and the configuration notes.
std::string render_best_markdown(const StudyTable& table);

}  // namespace musepref::modelsel
