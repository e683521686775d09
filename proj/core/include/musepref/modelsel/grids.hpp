#pragma once

#include <string>
#include <vector>

#include "musepref/learn/forest.hpp"
#include "musepref/learn/knn.hpp"
#include "musepref/learn/svm.hpp"

namespace musepref::modelsel {

enum class ModelFamily { Svm, Rf, Knn };

std::string to_string(ModelFamily family);
ModelFamily model_family_from_string(const std::string& s);

// One hyperparameter setting; only the member matching `family` is live.
struct GridPoint {
  ModelFamily family = ModelFamily::Svm;
  learn::SvmParams svm;
  learn::ForestParams forest;
  learn::KnnParams knn;

  std::string describe() const;  // compact JSON of the live parameters
};

using Grid = std::vector<GridPoint>;

// Exhaustive tuning surfaces, in canonical (tie-breaking) order.
// SVM: kernels {linear, rbf, poly}, C in {0.001..100}, gamma in
// {0.001, 0.01, 0.11, 1, 10} (the 0.11 is deliberate; gamma_fix swaps in 0.1),
// degree {2,3,4} for poly. RF: estimators {100,300,500}, depth 5..17/3,
// leaf and split 2..14/3. kNN: k 10..49, both weightings, three metrics.
Grid default_svm_grid(bool gamma_fix = false);
Grid default_forest_grid();
Grid default_knn_grid();
Grid default_grid(ModelFamily family, bool gamma_fix = false);

// Small surfaces for smoke runs and fixtures.
Grid quick_grid(ModelFamily family);

}  // namespace musepref::modelsel
