// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "fhdfrc/channel.hpp"
#include "fhdfrc/config.hpp"
#include "fhdfrc/waveform.hpp"

namespace fhdfrc {

/// rho_m = L sum_p beta_p e^{-j pi m sin(phi_p)}, the per-antenna gain seen on a k = 0 tone.
struct CompositeEstimate {
    CVec rho_hat;
    std::vector<int> source_hops;  // hop each rho_hat[m] came from
    std::vector<bool> valid;
};

/// Throws ProbeMissing or NullingViolated if the schedule cannot support rho estimation.
void check_probe_schedule(const HopSchedule& sched, const ValidatedConfig& cfg);

/// rho_0 from the k = 0 bin of pilot hop 0; rho_m from twice the half-hop bin-0 DFT of hop m + 2.
CompositeEstimate rho_from_frame(const SampledFrame& frame, const ValidatedConfig& cfg);
CompositeEstimate estimate_rho(const SampledFrame& frame, const HopSchedule& sched, const ValidatedConfig& cfg);

struct Normalized {
    CVec Y;
    std::vector<bool> usable;
    int dropped = 0;
};

/// Y_m / rho_m. Antennas with |rho_m| <= floor are marked unusable (floor 0 keeps every non-zero one).
Normalized normalize(std::span<const Complex> Ym, const CompositeEstimate& rho, double floor = 0.0);

}  // namespace fhdfrc
