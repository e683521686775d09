#pragma once

#include <string>
#include <vector>

#include "musepref/corpus/types.hpp"

namespace musepref::corpus {

// Binary epoch file, bit-exact layout (little-endian):
//   magic "EEGT", u32 version=1, u32 n_channels, u64 n_samples,
//   f64 sample_rate, per channel { u16 name_len, UTF-8 name },
//   then f32 samples in channel-major order.
inline constexpr char kEpochMagic[4] = {'E', 'E', 'G', 'T'};
inline constexpr std::uint32_t kEpochVersion = 1;

struct EpochHeader {
  std::uint32_t version = kEpochVersion;
  std::vector<std::string> channel_names;
  std::uint64_t n_samples = 0;
  double sample_rate_hz = 0.0;
};

void write_epoch(const std::string& path, const EegEpoch& epoch);

EpochHeader read_epoch_header(const std::string& path);

// Full read; eog_indices are filled from `eog_channels` by name.
// Rejects NaN/Inf samples.
EegEpoch read_epoch(const std::string& path,
                    const std::vector<std::string>& eog_channels = {});

}  // namespace musepref::corpus
