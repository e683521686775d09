#include "musepref/learn/knn.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "musepref/common/error.hpp"

namespace musepref::learn {

std::string to_string(KnnWeights w) {
  return w == KnnWeights::Uniform ? "uniform" : "distance";
}

std::string to_string(KnnMetric m) {
  switch (m) {
    case KnnMetric::Euclidean: return "euclidean";
    case KnnMetric::Manhattan: return "manhattan";
    case KnnMetric::Minkowski: return "minkowski";
  }
  return "?";
}

double knn_distance(const KnnParams& params, std::span<const double> a,
                    std::span<const double> b) {
  double acc = 0.0;
  switch (params.metric) {
    case KnnMetric::Euclidean:
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
      }
      return std::sqrt(acc);
    case KnnMetric::Manhattan:
      for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
      return acc;
    case KnnMetric::Minkowski:
      for (std::size_t i = 0; i < a.size(); ++i)
        acc += std::pow(std::abs(a[i] - b[i]), params.minkowski_p);
      return std::pow(acc, 1.0 / params.minkowski_p);
  }
  return 0.0;
}

KnnPrediction knn_predict(const Dataset& train, const KnnParams& params,
                          std::span<const double> query) {
  if (params.k < 1) throw std::invalid_argument("knn: k must be >= 1");
  if (static_cast<std::size_t>(params.k) > train.n())
    throw KTooLarge("k=" + std::to_string(params.k) + " exceeds training size " +
                    std::to_string(train.n()));

  std::vector<std::pair<double, std::size_t>> dist(train.n());
  for (std::size_t i = 0; i < train.n(); ++i) {
    auto row = std::span<const double>(train.x.row_ptr(i), train.dim());
    dist[i] = {knn_distance(params, row, query), i};
  }
  const auto k = static_cast<std::size_t>(params.k);
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k),
                    dist.end());

  KnnPrediction out;
  bool any_exact = false;
  for (std::size_t i = 0; i < k; ++i)
    if (dist[i].first == 0.0) any_exact = true;

  for (std::size_t i = 0; i < k; ++i) {
    const auto [d, idx] = dist[i];
    double w = 1.0;
    if (params.weights == KnnWeights::Distance) {
      if (any_exact)
        w = d == 0.0 ? 1.0 : 0.0;  // exact matches dominate
      else
        w = 1.0 / d;
    }
    (train.y[idx] == 1 ? out.score_positive : out.score_negative) += w;
  }
  out.label = out.score_positive > out.score_negative ? 1 : 0;
  return out;
}

nlohmann::json KnnModel::to_json() const {
  nlohmann::json j;
  j["format"] = "musepref-knn";
  j["version"] = 1;
  j["k"] = params.k;
  j["weights"] = to_string(params.weights);
  j["metric"] = to_string(params.metric);
  j["minkowski_p"] = params.minkowski_p;
  j["dim"] = train.dim();
  j["x"] = train.x.v;
  j["y"] = train.y;
  j["feature_names"] = train.feature_names;
  return j;
}

KnnModel KnnModel::from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "musepref-knn" || j.value("version", 0) != 1)
    throw std::invalid_argument("not a musepref-knn v1 document");
  KnnModel m;
  m.params.k = j["k"].get<int>();
  const auto weights = j["weights"].get<std::string>();
  m.params.weights =
      weights == "uniform" ? KnnWeights::Uniform : KnnWeights::Distance;
  const auto metric = j["metric"].get<std::string>();
  if (metric == "euclidean")
    m.params.metric = KnnMetric::Euclidean;
  else if (metric == "manhattan")
    m.params.metric = KnnMetric::Manhattan;
  else
    m.params.metric = KnnMetric::Minkowski;
  m.params.minkowski_p = j["minkowski_p"].get<double>();
  m.train.y = j["y"].get<std::vector<int>>();
  m.train.feature_names = j["feature_names"].get<std::vector<std::string>>();
  const auto dim = j["dim"].get<std::size_t>();
  m.train.x = Mat(m.train.y.size(), dim);
  m.train.x.v = j["x"].get<std::vector<double>>();
  return m;
}

}  // namespace musepref::learn
