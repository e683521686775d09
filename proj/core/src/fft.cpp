#include "musepref/spectral/fft.hpp"

#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace musepref::spectral {

namespace {

std::mutex planner_mutex;  // FFTW plan creation is not thread-safe

struct PlanEntry {
  fftw_plan plan = nullptr;
  double* in = nullptr;
  fftw_complex* out = nullptr;
  std::size_t n = 0;

  PlanEntry() = default;
  PlanEntry(const PlanEntry&) = delete;
  PlanEntry& operator=(const PlanEntry&) = delete;

  void create(std::size_t size) {
    n = size;
    in = fftw_alloc_real(size);
    out = fftw_alloc_complex(size / 2 + 1);
    std::lock_guard lock(planner_mutex);
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(size), in, out, FFTW_ESTIMATE);
  }

  ~PlanEntry() {
    if (plan) {
      std::lock_guard lock(planner_mutex);
      fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);
  }
};

}  // namespace

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void rfft(std::span<const double> in, std::vector<std::complex<double>>& out) {
  if (in.empty()) throw std::invalid_argument("rfft: empty input");
  thread_local std::map<std::size_t, PlanEntry> plans;
  PlanEntry& entry = plans[in.size()];
  if (!entry.plan) entry.create(in.size());

  std::memcpy(entry.in, in.data(), in.size() * sizeof(double));
  fftw_execute(entry.plan);

  const std::size_t bins = in.size() / 2 + 1;
  out.resize(bins);
  for (std::size_t i = 0; i < bins; ++i)
    out[i] = {entry.out[i][0], entry.out[i][1]};
}

}  // namespace musepref::spectral
