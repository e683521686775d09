#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "musepref/learn/dataset.hpp"
#include "musepref/modelsel/feature_config.hpp"
#include "musepref/modelsel/grids.hpp"
#include "musepref/modelsel/metrics.hpp"

namespace musepref::modelsel {

struct FoldAssignment {
  std::vector<std::vector<std::size_t>> folds;

  std::size_t k() const { return folds.size(); }
};

// Class-ratio-preserving partition: per class, a seeded shuffle dealt
// round-robin, so every fold's class count is within one of the ideal
// ratio. Deterministic given the seed.
FoldAssignment stratified_folds(std::span<const int> labels, int k,
                                std::uint64_t seed);

// Grouped variant: all trials of one group (participant) land in the same
// fold, assigned greedily to balance class counts. Offered for
// leakage-aware analysis; not the default protocol.
FoldAssignment grouped_folds(std::span<const int> labels,
                             std::span<const std::string> groups, int k,
                             std::uint64_t seed);

struct CvOptions {
  int k = 10;
  std::uint64_t seed = 0;
  F1Average f1_average = F1Average::Binary;
  // The protocol holds the validation fold out of the final refit; this
  // switch refits on train+validation instead.
  bool retrain_with_validation = false;
  // Assign whole participants to folds (needs Dataset::row_groups).
  bool group_by_participant = false;
};

struct FoldOutcome {
  int fold = -1;
  double f1 = 0.0;
  double accuracy = 0.0;
  int chosen_grid_index = -1;
  std::string chosen_params;
  std::vector<std::string> failed_points;
};

struct CvReport {
  ModelFamily family = ModelFamily::Svm;
  FeatureConfig config;
  std::vector<FoldOutcome> per_fold;
  double mean_f1 = 0.0;
  double se_f1 = 0.0;
  double mean_accuracy = 0.0;
  double se_accuracy = 0.0;
};

// Train on scaled features, predict labels of eval rows. model_seed feeds
// the stochastic learners.
std::vector<int> fit_predict(const learn::Dataset& train, const Mat& eval_x,
                             const GridPoint& point, std::uint64_t model_seed);

// Per-fold hyperparameter choice using only the train and validation folds
// (the test fold never participates). Exposed separately so tests can
// verify that corrupting a test fold cannot move the selection.
std::vector<int> select_hyperparams(const learn::Dataset& data, const Grid& grid,
                                    const FoldAssignment& folds,
                                    const CvOptions& options);

// Stratified nested cross-validation: test fold i, validation fold
// (i+1) mod k, grid search on validation F1 (ties break to the first grid
// point), refit with the winner, evaluate on the test fold.
CvReport nested_cv(const learn::Dataset& data, const Grid& grid,
                   const CvOptions& options);
CvReport nested_cv(const learn::Dataset& data, const Grid& grid,
                   const FoldAssignment& folds, const CvOptions& options);

}  // namespace musepref::modelsel
