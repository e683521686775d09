#include "musepref/modelsel/grids.hpp"

#include <cstdio>
#include <stdexcept>

namespace musepref::modelsel {

std::string to_string(ModelFamily family) {
  switch (family) {
    case ModelFamily::Svm: return "svm";
    case ModelFamily::Rf: return "rf";
    case ModelFamily::Knn: return "knn";
  }
  return "?";
}

ModelFamily model_family_from_string(const std::string& s) {
  if (s == "svm") return ModelFamily::Svm;
  if (s == "rf") return ModelFamily::Rf;
  if (s == "knn") return ModelFamily::Knn;
  throw std::invalid_argument("unknown model family: " + s);
}

std::string GridPoint::describe() const {
  char buf[160];
  switch (family) {
    case ModelFamily::Svm:
      if (svm.kernel == learn::Kernel::Linear)
        std::snprintf(buf, sizeof(buf), R"({"kernel":"linear","C":%g})", svm.c);
      else if (svm.kernel == learn::Kernel::Rbf)
        std::snprintf(buf, sizeof(buf), R"({"kernel":"rbf","C":%g,"gamma":%g})",
                      svm.c, svm.gamma);
      else
        std::snprintf(buf, sizeof(buf),
                      R"({"kernel":"poly","C":%g,"gamma":%g,"degree":%d})",
                      svm.c, svm.gamma, svm.degree);
      break;
    case ModelFamily::Rf:
      std::snprintf(buf, sizeof(buf),
                    R"({"estimators":%d,"max_depth":%d,"min_leaf":%d,"min_split":%d})",
                    forest.n_estimators, forest.max_depth,
                    forest.min_samples_leaf, forest.min_samples_split);
      break;
    case ModelFamily::Knn:
      std::snprintf(buf, sizeof(buf), R"({"k":%d,"weights":"%s","metric":"%s"})",
                    knn.k, learn::to_string(knn.weights).c_str(),
                    learn::to_string(knn.metric).c_str());
      break;
  }
  return buf;
}

Grid default_svm_grid(bool gamma_fix) {
  const double cs[] = {0.001, 0.01, 0.1, 1, 10, 100};
  const double gammas[] = {0.001, 0.01, gamma_fix ? 0.1 : 0.11, 1, 10};
  const int degrees[] = {2, 3, 4};

  Grid grid;
  for (auto kernel : {learn::Kernel::Linear, learn::Kernel::Rbf, learn::Kernel::Poly}) {
    for (double c : cs) {
      if (kernel == learn::Kernel::Linear) {
        GridPoint p;
        p.family = ModelFamily::Svm;
        p.svm.kernel = kernel;
        p.svm.c = c;
        grid.push_back(p);
        continue;
      }
      for (double gamma : gammas) {
        if (kernel == learn::Kernel::Rbf) {
          GridPoint p;
          p.family = ModelFamily::Svm;
          p.svm.kernel = kernel;
          p.svm.c = c;
          p.svm.gamma = gamma;
          grid.push_back(p);
          continue;
        }
        for (int d : degrees) {
          GridPoint p;
          p.family = ModelFamily::Svm;
          p.svm.kernel = kernel;
          p.svm.c = c;
          p.svm.gamma = gamma;
          p.svm.degree = d;
          grid.push_back(p);
        }
      }
    }
  }
  return grid;
}

Grid default_forest_grid() {
  Grid grid;
  for (int estimators : {100, 300, 500})
    for (int depth = 5; depth <= 17; depth += 3)
      for (int leaf = 2; leaf <= 14; leaf += 3)
        for (int split = 2; split <= 14; split += 3) {
          GridPoint p;
          p.family = ModelFamily::Rf;
          p.forest.n_estimators = estimators;
          p.forest.max_depth = depth;
          p.forest.min_samples_leaf = leaf;
          p.forest.min_samples_split = split;
          grid.push_back(p);
        }
  return grid;
}

Grid default_knn_grid() {
  Grid grid;
  for (int k = 10; k <= 49; ++k)
    for (auto weights : {learn::KnnWeights::Uniform, learn::KnnWeights::Distance})
      for (auto metric : {learn::KnnMetric::Euclidean, learn::KnnMetric::Manhattan,
                          learn::KnnMetric::Minkowski}) {
        GridPoint p;
        p.family = ModelFamily::Knn;
        p.knn.k = k;
        p.knn.weights = weights;
        p.knn.metric = metric;
        grid.push_back(p);
      }
  return grid;
}

Grid default_grid(ModelFamily family, bool gamma_fix) {
  switch (family) {
    case ModelFamily::Svm: return default_svm_grid(gamma_fix);
    case ModelFamily::Rf: return default_forest_grid();
    case ModelFamily::Knn: return default_knn_grid();
  }
  return {};
}

Grid quick_grid(ModelFamily family) {
  Grid grid;
  switch (family) {
    case ModelFamily::Svm: {
      for (double c : {1.0, 10.0}) {
        GridPoint p;
        p.family = ModelFamily::Svm;
        p.svm.kernel = learn::Kernel::Linear;
        p.svm.c = c;
        grid.push_back(p);
      }
      for (double c : {1.0, 10.0})
        for (double gamma : {0.01, 0.1}) {
          GridPoint p;
          p.family = ModelFamily::Svm;
          p.svm.kernel = learn::Kernel::Rbf;
          p.svm.c = c;
          p.svm.gamma = gamma;
          grid.push_back(p);
        }
      break;
    }
    case ModelFamily::Rf: {
      for (int depth : {5, 11}) {
        GridPoint p;
        p.family = ModelFamily::Rf;
        p.forest.n_estimators = 60;
        p.forest.max_depth = depth;
        grid.push_back(p);
      }
      break;
    }
    case ModelFamily::Knn: {
      for (int k : {10, 25})
        for (auto weights : {learn::KnnWeights::Uniform, learn::KnnWeights::Distance}) {
          GridPoint p;
          p.family = ModelFamily::Knn;
          p.knn.k = k;
          p.knn.weights = weights;
          grid.push_back(p);
        }
      break;
    }
  }
  return grid;
}

}  // namespace musepref::modelsel
