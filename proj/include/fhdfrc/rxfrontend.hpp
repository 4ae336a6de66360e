// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "fhdfrc/channel.hpp"
#include "fhdfrc/config.hpp"

namespace fhdfrc {

struct DetectOptions {
    double margin_db = 6.0;      // peaks must exceed the median off-grid bin power by this much
    bool full_spectrum = false;  // search every bin instead of the K sub-band bins
};

struct HopSpectrum {
    CVec Y;                      // L-point DFT
    std::vector<int> peak_bins;  // ascending
    std::vector<int> k_hat;      // ascending sub-band indices, antenna order
    CVec Ym;                     // Y at the bin of k_hat[m]
    double floor_power = 0.0;    // median off-grid |Y|^2
};

CVec hop_dft(const SampledFrame& frame, int h);

/// Pick the M strongest sub-band bins, order them by sub-band index and pair them with antennas.
HopSpectrum detect_and_pair(CVec Y, const ValidatedConfig& cfg, const DetectOptions& opt = {});

/// sum_{i < L/2} y_h(i) e^{-j 2 pi i l / L}.
Complex half_hop_dft(const SampledFrame& frame, int h, int l);

/// Median |Y|^2 over bins that hold no sub-band.
double offgrid_floor(std::span<const Complex> Y, const ValidatedConfig& cfg);

}  // namespace fhdfrc
