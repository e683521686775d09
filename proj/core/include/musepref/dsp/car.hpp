#pragma once

#include "musepref/corpus/types.hpp"

namespace musepref::dsp {

// Common average reference: subtracts the instantaneous mean over EEG
// channels from every EEG channel. EOG channels are excluded from the
// average and pass through untouched.
corpus::EegEpoch common_average_reference(const corpus::EegEpoch& epoch);

void common_average_reference_inplace(corpus::EegEpoch& epoch);

}  // namespace musepref::dsp
