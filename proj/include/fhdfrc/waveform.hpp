// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "fhdfrc/config.hpp"
#include "fhdfrc/rng.hpp"

namespace fhdfrc {

/// Sub-band indices k(h, m) and modulation terms F(h, m) of one pulse, row-major by hop.
struct HopSchedule {
    int H = 0;
    int M = 0;
    std::vector<int> k;
    CVec F;

    HopSchedule() = default;
    HopSchedule(int hops, int antennas)
        : H(hops), M(antennas), k(static_cast<size_t>(hops * antennas), 0),
          F(static_cast<size_t>(hops * antennas), Complex{1.0, 0.0}) {}

    int& at(int h, int m) { return k[index(h, m)]; }
    int at(int h, int m) const { return k[index(h, m)]; }
    Complex& mod(int h, int m) { return F[index(h, m)]; }
    Complex mod(int h, int m) const { return F[index(h, m)]; }
    std::span<const int> row(int h) const { return {k.data() + index(h, 0), static_cast<size_t>(M)}; }
    std::span<int> row(int h) { return {k.data() + index(h, 0), static_cast<size_t>(M)}; }

private:
    size_t index(int h, int m) const { return static_cast<size_t>(h) * static_cast<size_t>(M) + static_cast<size_t>(m); }
};

/// Throws InvalidSchedule on out-of-range or repeated sub-bands within a hop.
void check_schedule(const HopSchedule& s, int K);

/// H rows of uniform M-subsets of [0, K-1] in random order; `avoid` lists forbidden sub-bands.
HopSchedule random_schedule(int H, int M, int K, Rng& rng, std::span<const int> avoid = {});
HopSchedule random_schedule(const ValidatedConfig& cfg, Rng& rng);

/// Sort each row ascending, carrying the modulation terms with their sub-bands.
HopSchedule order_schedule(const HopSchedule& s);

/// Hops holding a probe: hop m+2 for antenna m = 1..M-1 (antenna 0 is served by the pilot).
std::vector<int> probe_hops(int M);
bool is_probe_hop(int h, int M, bool probe);

/// Sub-bands a co-hop antenna may use during a probe hop: k L_sub / 2 must be an integer.
std::vector<int> nulling_allowed(const ValidatedConfig& cfg);

/// Rows 0 and 1 set to the pilot; with `probe`, hop m+2 puts antenna m at sub-band 0 and the
/// other antennas on distinct nulling-compatible sub-bands, all with F = 1.
HopSchedule frame_schedule(const HopSchedule& s, std::span<const int> pilot, bool probe,
                           const ValidatedConfig& cfg);

/// Baseband samples, one row of H*L per antenna: F(h,m) e^{-j 2 pi k(h,m) (B/K) t_local}.
std::vector<CVec> synth_baseband(const HopSchedule& s, const ValidatedConfig& cfg);

/// Unit phasors e^{-j 2 pi n / L}, n = 0..L-1; tone samples on the hop grid are lookups into it.
CVec hop_phasors(int L);

/// |R(tau)| from the closed-form rectangular-pulse ambiguity. With use_modulation the
/// F terms enter as F(h,m) conj(F(h',m')).
std::vector<double> ambiguity_function(const HopSchedule& s, const ValidatedConfig& cfg,
                                       std::span<const double> tau, bool use_modulation = false);

/// n points spanning [-span_hops T, span_hops T].
std::vector<double> tau_grid(const ValidatedConfig& cfg, int n = 4096, double span_hops = 2.0);

}  // namespace fhdfrc
