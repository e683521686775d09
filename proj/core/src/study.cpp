#include "musepref/modelsel/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "musepref/common/csv.hpp"
#include "musepref/common/error.hpp"

using nlohmann::json;

namespace musepref::modelsel {

const Grid& GridSet::for_family(ModelFamily family) const {
  switch (family) {
    case ModelFamily::Svm: return svm;
    case ModelFamily::Rf: return rf;
    case ModelFamily::Knn: return knn;
  }
  return svm;
}

GridSet GridSet::defaults(bool gamma_fix) {
  return {default_svm_grid(gamma_fix), default_forest_grid(), default_knn_grid()};
}

GridSet GridSet::quick() {
  return {quick_grid(ModelFamily::Svm), quick_grid(ModelFamily::Rf),
          quick_grid(ModelFamily::Knn)};
}

namespace {

double majority_accuracy(const spectral::FeatureTable& table,
                         corpus::MusicType type) {
  std::size_t pos = 0, total = 0;
  for (const auto& t : table.trials) {
    if (t.music_type != type) continue;
    if (t.label == corpus::PreferenceLabel::Undecided) continue;
    ++total;
    if (t.label == corpus::PreferenceLabel::Favored) ++pos;
  }
  if (total == 0) return 0.0;
  const std::size_t maj = std::max(pos, total - pos);
  return static_cast<double>(maj) / static_cast<double>(total);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

StudyTable run_study(const spectral::FeatureTable& table,
                     const StudyOptions& options) {
  StudyTable out;
  for (auto type : options.music_types)
    out.baseline_accuracy[type] = majority_accuracy(table, type);

  out.configuration = {
      {"cv_k", options.cv.k},
      {"cv_seed", options.cv.seed},
      {"f1_average", to_string(options.cv.f1_average)},
      {"retrain_with_validation", options.cv.retrain_with_validation},
      {"validation_fold_rule", "(test_fold + 1) mod k"},
      {"grid_sizes",
       {{"svm", options.grids.svm.size()},
        {"rf", options.grids.rf.size()},
        {"knn", options.grids.knn.size()}}},
  };

  for (auto family : options.families) {
    for (auto type : options.music_types) {
      for (auto region : options.regions) {
        for (auto [fam, resr] : options.behavior_variants) {
          StudyCell cell;
          cell.family = family;
          cell.config.region = region;
          cell.config.music_type = type;
          cell.config.use_familiarity = fam;
          cell.config.use_response_rate = resr;
          try {
            learn::Dataset data = assemble_features(table, cell.config);
            CvReport report =
                nested_cv(data, options.grids.for_family(family), options.cv);
            report.family = family;
            report.config = cell.config;
            cell.report = std::move(report);
          } catch (const DomainError& e) {
            cell.error = e.what();
          }
          out.cells.push_back(std::move(cell));
        }
      }
    }
  }

  // mark the winner per (family, music type)
  for (auto family : options.families) {
    for (auto type : options.music_types) {
      double best = -1.0;
      StudyCell* winner = nullptr;
      for (auto& cell : out.cells) {
        if (cell.family != family || cell.config.music_type != type ||
            !cell.report)
          continue;
        if (cell.report->mean_f1 > best) {
          best = cell.report->mean_f1;
          winner = &cell;
        }
      }
      if (winner) winner->best_for_model = true;
    }
  }
  return out;
}

void write_study_csv(const std::string& path, const StudyTable& table) {
  csv::Table out;
  out.header = {"model",  "music_type", "region",   "behaviors", "mean_f1",
                "se_f1",  "mean_acc",   "se_acc",   "params_json", "fold_scores"};
  for (const auto& cell : table.cells) {
    const auto& region = spectral::region_lookup(cell.config.region);
    std::string params = "[]", scores = "[]";
    std::string mean_f1, se_f1, mean_acc, se_acc;
    if (cell.report) {
      json jp = json::array(), js = json::array();
      for (const auto& fold : cell.report->per_fold) {
        jp.push_back(fold.chosen_params);
        js.push_back(fold.f1);
      }
      params = jp.dump();
      scores = js.dump();
      mean_f1 = fmt(cell.report->mean_f1);
      se_f1 = fmt(cell.report->se_f1);
      mean_acc = fmt(cell.report->mean_accuracy);
      se_acc = fmt(cell.report->se_accuracy);
    } else {
      params = json{{"error", cell.error}}.dump();
    }
    out.rows.push_back({to_string(cell.family),
                        corpus::to_string(cell.config.music_type), region.name,
                        cell.config.behaviors_name(), mean_f1, se_f1, mean_acc,
                        se_acc, params, scores});
  }
  csv::write_file(path, out);
}

json study_to_json(const StudyTable& table) {
  json cells = json::array();
  for (const auto& cell : table.cells) {
    const auto& region = spectral::region_lookup(cell.config.region);
    json jc = {{"model", to_string(cell.family)},
               {"music_type", corpus::to_string(cell.config.music_type)},
               {"region", region.name},
               {"behaviors", cell.config.behaviors_name()},
               {"best_for_model", cell.best_for_model}};
    if (cell.report) {
      json folds = json::array();
      for (const auto& fold : cell.report->per_fold) {
        folds.push_back({{"fold", fold.fold},
                         {"f1", fold.f1},
                         {"accuracy", fold.accuracy},
                         {"params", fold.chosen_params},
                         {"failed_points", fold.failed_points}});
      }
      jc["mean_f1"] = cell.report->mean_f1;
      jc["se_f1"] = cell.report->se_f1;
      jc["mean_accuracy"] = cell.report->mean_accuracy;
      jc["se_accuracy"] = cell.report->se_accuracy;
      jc["folds"] = std::move(folds);
    } else {
      jc["error"] = cell.error;
    }
    cells.push_back(std::move(jc));
  }
  json baselines;
  for (const auto& [type, acc] : table.baseline_accuracy)
    baselines[corpus::to_string(type)] = acc;
  return {{"format", "musepref-study"},
          {"version", 1},
          {"configuration", table.configuration},
          {"baseline_accuracy", baselines},
          {"cells", cells}};
}

StudyTable study_from_json(const json& j) {
  if (j.value("format", "") != "musepref-study")
    throw MalformedManifest("not a musepref-study document");
  StudyTable table;
  table.configuration = j.value("configuration", json::object());
  if (j.contains("baseline_accuracy")) {
    for (auto& [key, value] : j["baseline_accuracy"].items())
      table.baseline_accuracy[corpus::music_type_from_string(key)] =
          value.get<double>();
  }
  for (const auto& jc : j["cells"]) {
    StudyCell cell;
    cell.family = model_family_from_string(jc["model"].get<std::string>());
    cell.config.music_type =
        corpus::music_type_from_string(jc["music_type"].get<std::string>());
    cell.config.region =
        spectral::region_lookup(jc["region"].get<std::string>()).region;
    const std::string behaviors = jc["behaviors"].get<std::string>();
    cell.config.use_familiarity = behaviors == "fam" || behaviors == "fam+resr";
    cell.config.use_response_rate = behaviors == "resr" || behaviors == "fam+resr";
    cell.best_for_model = jc.value("best_for_model", false);
    if (jc.contains("mean_f1")) {
      CvReport report;
      report.family = cell.family;
      report.config = cell.config;
      report.mean_f1 = jc["mean_f1"].get<double>();
      report.se_f1 = jc["se_f1"].get<double>();
      report.mean_accuracy = jc["mean_accuracy"].get<double>();
      report.se_accuracy = jc["se_accuracy"].get<double>();
      if (jc.contains("folds")) {
        for (const auto& jf : jc["folds"]) {
          FoldOutcome fold;
          fold.fold = jf["fold"].get<int>();
          fold.f1 = jf["f1"].get<double>();
          fold.accuracy = jf["accuracy"].get<double>();
          fold.chosen_params = jf.value("params", "");
          report.per_fold.push_back(std::move(fold));
        }
      }
      cell.report = std::move(report);
    } else {
      cell.error = jc.value("error", "");
    }
    table.cells.push_back(std::move(cell));
  }
  return table;
}

namespace {

struct BestCell {
  const StudyCell* cell = nullptr;
  double value = -1.0;
};

std::string format_cell(const StudyCell* cell, BestMetric metric) {
  if (!cell || !cell->report) return "-";
  const auto& r = *cell->report;
  const double mean = metric == BestMetric::F1 ? r.mean_f1 : r.mean_accuracy;
  const double se = metric == BestMetric::F1 ? r.se_f1 : r.se_accuracy;
  const auto& region = spectral::region_lookup(cell->config.region);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.2f ± %.2f ^%s (%s)", 100.0 * mean,
                100.0 * se, region.code.c_str(),
                cell->config.behaviors_name().c_str());
  return buf;
}

const StudyCell* best_cell(const StudyTable& table, ModelFamily family,
                           corpus::MusicType type, bool with_behaviors,
                           BestMetric metric) {
  BestCell best;
  for (const auto& cell : table.cells) {
    if (cell.family != family || cell.config.music_type != type || !cell.report)
      continue;
    const bool has_behaviors = cell.config.behavior_count() > 0;
    if (has_behaviors != with_behaviors) continue;
    const double v = metric == BestMetric::F1 ? cell.report->mean_f1
                                              : cell.report->mean_accuracy;
    if (v > best.value) {
      best.value = v;
      best.cell = &cell;
    }
  }
  return best.cell;
}

void render_metric_tables(std::ostringstream& out, const StudyTable& table,
                          BestMetric metric, const char* metric_name) {
  const std::vector<ModelFamily> families = {ModelFamily::Svm, ModelFamily::Rf,
                                             ModelFamily::Knn};
  const std::vector<corpus::MusicType> types = {corpus::MusicType::Melody,
                                                corpus::MusicType::Song};
  for (bool with_behaviors : {false, true}) {
    out << "### Best " << metric_name << " (%) — "
        << (with_behaviors ? "with behaviors" : "without behaviors") << "\n\n";
    out << "| Models | Melody | Song |\n|---|---|---|\n";
    for (auto family : families) {
      out << "| " << to_string(family);
      for (auto type : types)
        out << " | "
            << format_cell(best_cell(table, family, type, with_behaviors, metric),
                           metric);
      out << " |\n";
    }
    out << "| baseline (majority class)";
    for (auto type : types) {
      auto it = table.baseline_accuracy.find(type);
      if (metric == BestMetric::Accuracy && it != table.baseline_accuracy.end()) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * it->second);
        out << " | " << buf;
      } else {
        out << " | " << (metric == BestMetric::F1 ? "0.00" : "-");
      }
    }
    out << " |\n\n";
  }
}

}  // namespace

std::string render_best_markdown(const StudyTable& table) {
  std::ostringstream out;
  out << "# Classification summary\n\n";
  out << "Region codes: fr=Frontal_Right, fl=Frontal_Left, hr=Hemisphere_Right, "
         "hl=Hemisphere_Left, flr=Frontal_LR, hlr=Hemisphere_LR.\n\n";
  render_metric_tables(out, table, BestMetric::F1, "F1");
  render_metric_tables(out, table, BestMetric::Accuracy, "accuracy");
  if (!table.configuration.empty()) {
    out << "### Configuration\n\n```json\n" << table.configuration.dump(2)
        << "\n```\n";
  }
  return out.str();
}

}  // namespace musepref::modelsel
