// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "fhdfrc/types.hpp"

namespace fhdfrc {

/// Radar and sampling constants. Frequencies in Hz, durations in seconds.
struct RadarConfig {
    int M = 10;          // transmit antennas
    int K = 20;          // sub-bands
    double B = 100e6;    // bandwidth
    double f_L = 8e9;    // lower RF edge
    double T = 0.8e-6;   // hop duration
    int H = 15;          // hops per pulse
    double fs = 200e6;   // sampling rate
    int N = 10;          // radar receive antennas
};

/// A RadarConfig that passed validate(), together with the dimensions derived from it.
///
/// Only validate() constructs one, so every instance satisfies M < K, BT/K in Z+,
/// L = T fs even and fs >= 2B.
class ValidatedConfig {
public:
    const RadarConfig& radar() const { return radar_; }
    int M() const { return radar_.M; }
    int K() const { return radar_.K; }
    int H() const { return radar_.H; }
    int N() const { return radar_.N; }
    double B() const { return radar_.B; }
    double T() const { return radar_.T; }
    double fs() const { return radar_.fs; }
    double f_L() const { return radar_.f_L; }
    double Ts() const { return 1.0 / radar_.fs; }

    /// Samples per hop.
    int L() const { return L_; }
    /// B T / K: DFT bins between adjacent sub-bands.
    int L_sub() const { return L_sub_; }
    /// B / K in Hz.
    double subband_spacing() const { return radar_.B / radar_.K; }
    /// Baseband frequency of sub-band k.
    double subband_freq(int k) const { return k * subband_spacing(); }

    /// DFT bin holding sub-band k: (L - k L_sub) mod L.
    int bin_of(int k) const { return ((L_ - k * L_sub_) % L_ + L_) % L_; }
    /// Inverse of bin_of on the sub-band grid.
    std::optional<int> k_of_bin(int bin) const;

    /// round(eta / Ts).
    int samples_of(double eta) const;

    friend ValidatedConfig validate(const RadarConfig& cfg);

private:
    ValidatedConfig() = default;
    RadarConfig radar_{};
    int L_ = 0;
    int L_sub_ = 0;
};

ValidatedConfig validate(const RadarConfig& cfg);
inline ValidatedConfig validate(const ValidatedConfig& cfg) { return validate(cfg.radar()); }

/// sigma_n^2 = |beta_0|^2 10^(-gamma_db / 10).
double snr_to_noise(double gamma_db, double beta0_mag = 1.0);

}  // namespace fhdfrc
