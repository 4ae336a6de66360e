// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fhdfrc/chanest.hpp"
#include "fhdfrc/channel.hpp"
#include "fhdfrc/comms.hpp"
#include "fhdfrc/config.hpp"
#include "fhdfrc/multipath.hpp"
#include "fhdfrc/rxfrontend.hpp"
#include "fhdfrc/seqdesign.hpp"
#include "fhdfrc/timing.hpp"

namespace fhdfrc {

struct ReceiverOptions {
    double gamma_db = 30.0;     // operating SNR used for estimator selection
    double gamma_T_db = 18.0;   // CAE/CRE switch point
    std::optional<Estimator> force;
    bool probe = false;         // frame carries probe hops; normalise by rho before timing
    bool guard = true;          // drop antennas whose |rho| is below 10 sigma_bin
    std::vector<int> cae_subset;  // if non-empty, CAE uses only these second-difference indices
    bool resolve = true;        // run the timing-ambiguity search over data hops
    DetectOptions detect;
};

struct EstimationReport {
    std::vector<int> k_hat;       // pilot sub-bands, antenna order
    CVec Ym;                      // pilot amplitudes
    CVec Ybar;
    KappaProfile profile;
    Estimator estimator = Estimator::CAE;
    double angle_omega = 0.0;
    bool cre_consistent = true;
    std::vector<EtaCandidate> candidates;
    int d_star = 0;
    int L_eta = 0;
    double eta_hat = 0.0;
    std::optional<ChannelEstimate> channel;  // line-of-sight estimate
    std::optional<CompositeEstimate> rho;
    std::vector<bool> usable;
    double sigma_bin = 0.0;       // noise std of one DFT bin, from the pilot's off-grid bins
    bool pilot_fallback = false;  // detection disagreed with the known pilot
};

/// Full pilot-based estimation chain: detection, optional rho normalisation, CAE/CRE,
/// eta candidates and their resolution, then u and beta.
EstimationReport estimate_link(const SampledFrame& frame, const ValidatedConfig& cfg, std::span<const int> pilot,
                               const ReceiverOptions& opt = {});

/// Demodulator inputs taken from a report.
LinkState link_state(const EstimationReport& r);

/// Demodulator inputs built from the channel truth, for ideal-knowledge baselines.
LinkState ideal_link_state(const SampledFrame& frame, const ValidatedConfig& cfg, bool probe);

}  // namespace fhdfrc
