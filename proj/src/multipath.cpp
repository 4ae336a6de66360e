// SPDX-License-Identifier: Apache-2.0
#include "fhdfrc/multipath.hpp"

#include <cmath>

#include "fhdfrc/rxfrontend.hpp"

namespace fhdfrc {

void check_probe_schedule(const HopSchedule& sched, const ValidatedConfig& cfg) {
    const int M = sched.M;
    if (sched.H < M + 2) throw Error(Errc::ProbeMissing, "frame is too short to hold probe hops");
    if (sched.at(0, 0) != 0 || sched.mod(0, 0) != Complex{1.0, 0.0})
        throw Error(Errc::ProbeMissing, "pilot does not put antenna 0 on sub-band 0");
    for (int m = 1; m < M; ++m) {
        const int h = m + 2;
        if (sched.at(h, m) != 0 || sched.mod(h, m) != Complex{1.0, 0.0})
            throw Error(Errc::ProbeMissing, "hop m+2 does not probe antenna m");
        for (int j = 0; j < M; ++j) {
            if (j == m) continue;
            const int k = sched.at(h, j);
            if (k == 0 || (k * cfg.L_sub()) % 2 != 0)
                throw Error(Errc::NullingViolated, "co-hop sub-band is not nulled by the half-hop DFT");
        }
    }
}

CompositeEstimate rho_from_frame(const SampledFrame& frame, const ValidatedConfig& cfg) {
    const int M = cfg.M();
    if (frame.H < M + 2) throw Error(Errc::ProbeMissing, "frame is too short to hold probe hops");
    CompositeEstimate c;
    c.rho_hat.resize(static_cast<size_t>(M));
    c.source_hops.resize(static_cast<size_t>(M));
    c.valid.assign(static_cast<size_t>(M), true);
    // The full-hop pilot bin carries gain L; the half-hop bin carries L/2, hence the factor 2.
    c.rho_hat[0] = hop_dft(frame, 0)[0];
    c.source_hops[0] = 0;
    for (int m = 1; m < M; ++m) {
        c.rho_hat[static_cast<size_t>(m)] = 2.0 * half_hop_dft(frame, m + 2, 0);
        c.source_hops[static_cast<size_t>(m)] = m + 2;
    }
    for (size_t m = 0; m < c.rho_hat.size(); ++m) c.valid[m] = std::isfinite(std::abs(c.rho_hat[m]));
    return c;
}

CompositeEstimate estimate_rho(const SampledFrame& frame, const HopSchedule& sched, const ValidatedConfig& cfg) {
    check_probe_schedule(sched, cfg);
    return rho_from_frame(frame, cfg);
}

Normalized normalize(std::span<const Complex> Ym, const CompositeEstimate& rho, double floor) {
    if (Ym.size() != rho.rho_hat.size()) throw Error(Errc::InvalidConfig, "Y and rho lengths differ");
    Normalized n;
    n.Y.resize(Ym.size());
    n.usable.assign(Ym.size(), true);
    for (size_t m = 0; m < Ym.size(); ++m) {
        const double a = std::abs(rho.rho_hat[m]);
        if (!rho.valid[m] || !(a > floor) || a == 0.0) {
            n.usable[m] = false;
            n.Y[m] = Ym[m];
            ++n.dropped;
            continue;
        }
        n.Y[m] = Ym[m] / rho.rho_hat[m];
    }
    return n;
}

}  // namespace fhdfrc
