#include <benchmark/benchmark.h>

#include "musepref/common/rng.hpp"
#include "musepref/learn/forest.hpp"
#include "musepref/learn/knn.hpp"
#include "musepref/learn/svm.hpp"

using namespace musepref;

namespace {

learn::Dataset blobs(std::size_t n, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  learn::Dataset data;
  data.x = Mat(n, dim);
  data.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int label = i % 4 == 0 ? 1 : 0;  // ~25% positives
    data.y[i] = label;
    for (std::size_t c = 0; c < dim; ++c)
      data.x.at(i, c) = rng.normal() + (label ? 1.0 : -1.0);
  }
  return data;
}

void BM_SvmTrainRbf(benchmark::State& state) {
  auto data = blobs(static_cast<std::size_t>(state.range(0)), 33, 3);
  learn::SvmParams params;
  params.kernel = learn::Kernel::Rbf;
  params.c = 10.0;
  params.gamma = 0.1;
  for (auto _ : state) {
    auto model = learn::svm_train(data, params);
    benchmark::DoNotOptimize(model.bias);
  }
}
BENCHMARK(BM_SvmTrainRbf)->Arg(128)->Arg(352);

void BM_ForestTrain(benchmark::State& state) {
  auto data = blobs(352, 33, 4);
  learn::ForestParams params;
  params.n_estimators = static_cast<int>(state.range(0));
  params.max_depth = 8;
  for (auto _ : state) {
    auto model = learn::forest_train(data, params);
    benchmark::DoNotOptimize(model.trees.size());
  }
}
BENCHMARK(BM_ForestTrain)->Arg(100)->Arg(300);

void BM_KnnPredict(benchmark::State& state) {
  auto data = blobs(352, 33, 5);
  learn::KnnParams params;
  params.k = 25;
  params.weights = learn::KnnWeights::Distance;
  std::vector<double> query(33, 0.25);
  for (auto _ : state) {
    auto pred = learn::knn_predict(data, params, query);
    benchmark::DoNotOptimize(pred.label);
  }
}
BENCHMARK(BM_KnnPredict);

}  // namespace
