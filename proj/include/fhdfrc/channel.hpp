// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fhdfrc/config.hpp"
#include "fhdfrc/rng.hpp"
#include "fhdfrc/waveform.hpp"

namespace fhdfrc {

struct Path {
    Complex beta{1.0, 0.0};
    double phi_deg = 0.0;
};

/// A second, unsynchronized FH-MIMO radar heard by the receiver.
struct Interferer {
    double rel_power_db = -5.0;  // total interferer power (all M tones) relative to |beta_0|^2
    double delay = 0.0;          // seconds in [0, T)
    Complex phase{1.0, 0.0};     // unit-modulus path phase
    double phi_deg = 0.0;
    HopSchedule sched;           // H + 1 hops, covering the receiver's straddle into the next pulse hop
};

struct ChannelConfig {
    double eta = 0.0;                 // seconds, 0 <= eta < T
    std::vector<Path> paths{Path{}};  // paths[0] is the LoS path
    double noise_var = 0.0;           // per-sample E|xi|^2
    std::optional<Interferer> interferer;
};

/// One received pulse on the receiver's hop grid.
struct SampledFrame {
    CVec samples;  // H * L
    int L = 0;
    int H = 0;
    int L_eta = 0;
    ChannelConfig truth;

    std::span<const Complex> hop(int h) const {
        return {samples.data() + static_cast<size_t>(h) * static_cast<size_t>(L), static_cast<size_t>(L)};
    }
};

/// Transmit steering e^{-j pi m sin(phi)}.
Complex steering(int m, double phi_deg);

/// sum_p beta_p e^{-j pi m sin(phi_p)} for m = 0..M-1.
CVec path_composite(std::span<const Path> paths, int M);

void check_channel(const ChannelConfig& chan, const ValidatedConfig& cfg);

/// Received frame: paths and interferer superposed, then AWGN of variance noise_var.
SampledFrame synth_rx(const HopSchedule& sched, const ValidatedConfig& cfg, const ChannelConfig& chan, Rng& rng);

/// Noise-free contribution of a schedule seen through `composite` with receiver offset eta.
void add_tones(CVec& out, const HopSchedule& sched, const ValidatedConfig& cfg, std::span<const Complex> composite,
               double eta, Complex gain, int hops);

// Random channel draws used by the sweeps.
double draw_eta(Rng& rng, double lo = 0.05e-6, double hi = 0.35e-6);
std::vector<Path> draw_los(Rng& rng, double phi0_deg = 20.0);
std::vector<Path> draw_rician(Rng& rng, int nlos = 4, double nlos_power_db = -5.0, double phi0_deg = 20.0);
Interferer draw_interferer(const ValidatedConfig& cfg, Rng& rng, double rel_power_db = -5.0,
                           std::span<const int> clean = {});

}  // namespace fhdfrc
