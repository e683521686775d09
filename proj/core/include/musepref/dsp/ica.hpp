#pragma once

#include <cstdint>
#include <vector>

#include "musepref/common/mat.hpp"
#include "musepref/corpus/types.hpp"

namespace musepref::dsp {

// Result of a symmetric fixed-point FastICA run (log-cosh contrast).
// `unmixing` and `mixing` relate centered observations x_c to sources s:
//     s = unmixing * x_c,   x_c ~= mixing * s
// `whitening` maps centered observations to the unit-covariance space.
struct IcaDecomposition {
  Mat unmixing;   // components x channels
  Mat mixing;     // channels x components
  Mat sources;    // components x time (for the data that was decomposed)
  Mat whitening;  // components x channels
  std::vector<double> channel_means;
  bool converged = false;
  int iterations = 0;
};

struct FastIcaOptions {
  int max_iterations = 500;
  double tolerance = 1e-6;
  // When set, a run that hits max_iterations raises NotConverged. The
  // preprocessing chain clears it and records the outcome in provenance
  // instead, since near-Gaussian epochs legitimately stall the fixed point.
  bool require_convergence = true;
};

// data is channels x time; rows are centered internally.
IcaDecomposition fastica(const Mat& data, std::size_t n_components,
                         std::uint64_t seed, const FastIcaOptions& options = {});

// Convenience: run on the EEG (non-EOG) channels of an epoch.
IcaDecomposition fastica(const corpus::EegEpoch& epoch, std::size_t n_components,
                         std::uint64_t seed, const FastIcaOptions& options = {});

struct OcularRemovalResult {
  corpus::EegEpoch epoch;
  std::vector<std::size_t> removed_components;
};

// Zeroes sources whose |Pearson correlation| with any EOG channel exceeds
// threshold, then rebuilds the EEG channels from the remaining components.
// Channel means are not restored: the chain runs this on high-passed data
// where they are zero, and the degenerate threshold=0 case must produce an
// all-zero reconstruction.
OcularRemovalResult remove_ocular_components(const corpus::EegEpoch& epoch,
                                             const IcaDecomposition& ica,
                                             double threshold);

double pearson(std::span<const double> a, std::span<const double> b);

}  // namespace musepref::dsp
