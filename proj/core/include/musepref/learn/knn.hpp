#pragma once

#include <span>
#include <string>

#include <json.hpp>

#include "musepref/learn/dataset.hpp"

namespace musepref::learn {

enum class KnnWeights { Uniform, Distance };
enum class KnnMetric { Euclidean, Manhattan, Minkowski };

std::string to_string(KnnWeights w);
std::string to_string(KnnMetric m);

struct KnnParams {
  int k = 10;
  KnnWeights weights = KnnWeights::Uniform;
  KnnMetric metric = KnnMetric::Euclidean;
  double minkowski_p = 3.0;  // p = 2 would duplicate Euclidean
};

struct KnnPrediction {
  int label = 0;
  double score_positive = 0.0;
  double score_negative = 0.0;
};

double knn_distance(const KnnParams& params, std::span<const double> a,
                    std::span<const double> b);

// Brute-force k nearest neighbors. Uniform weighting takes a majority vote;
// Distance weighting votes with 1/d, where an exact match (d = 0) dominates.
// Equidistant neighbors admit lower training indices first; tied scores
// resolve to the lower label.
KnnPrediction knn_predict(const Dataset& train, const KnnParams& params,
                          std::span<const double> query);

// The lazy learner's "model" is its parameters plus the reference set;
// bundled for the audit serialization shared by all three families.
struct KnnModel {
  KnnParams params;
  Dataset train;

  KnnPrediction predict(std::span<const double> query) const {
    return knn_predict(train, params, query);
  }

  nlohmann::json to_json() const;
  static KnnModel from_json(const nlohmann::json& j);
};

}  // namespace musepref::learn
