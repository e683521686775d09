#include "musepref/dsp/car.hpp"

#include <vector>

namespace musepref::dsp {

void common_average_reference_inplace(corpus::EegEpoch& epoch) {
  const auto eeg = epoch.eeg_channel_indices();
  if (eeg.size() < 2) return;

  std::vector<double> mean(epoch.n_samples, 0.0);
  for (auto c : eeg) {
    auto ch = epoch.channel(c);
    for (std::size_t i = 0; i < ch.size(); ++i) mean[i] += ch[i];
  }
  const double inv = 1.0 / static_cast<double>(eeg.size());
  for (auto& v : mean) v *= inv;
  for (auto c : eeg) {
    auto ch = epoch.channel(c);
    for (std::size_t i = 0; i < ch.size(); ++i) ch[i] -= mean[i];
  }
}

corpus::EegEpoch common_average_reference(const corpus::EegEpoch& epoch) {
  corpus::EegEpoch out = epoch;
  common_average_reference_inplace(out);
  return out;
}

}  // namespace musepref::dsp
