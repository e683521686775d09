#include <benchmark/benchmark.h>

#include <vector>

#include "musepref/common/rng.hpp"
#include "musepref/dsp/filter.hpp"
#include "musepref/spectral/welch.hpp"

using namespace musepref;

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n);
  for (auto& v : x) v = rng.normal();
  return x;
}

void BM_FiltfiltBandpass(benchmark::State& state) {
  const double fs = 300.0;
  const std::array<double, 2> cutoffs = {2.0, 45.0};
  auto sos = dsp::design_butterworth(4, dsp::FilterKind::BandPass, cutoffs, fs);
  auto x = noise(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    auto y = dsp::filtfilt(sos, x);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FiltfiltBandpass)->Arg(9000)->Arg(60000);

void BM_WelchPsd(benchmark::State& state) {
  const double fs = 300.0;
  auto x = noise(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) {
    auto psd = spectral::welch_psd(x, fs);
    benchmark::DoNotOptimize(psd.density.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_WelchPsd)->Arg(9000)->Arg(60000);

}  // namespace
