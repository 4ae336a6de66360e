// SPDX-License-Identifier: Apache-2.0
#include "fhdfrc/rxfrontend.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fhdfrc/dsp.hpp"

namespace fhdfrc {

CVec hop_dft(const SampledFrame& frame, int h) {
    if (h < 0 || h >= frame.H) throw Error(Errc::OutOfRange, "hop index outside the frame");
    return dsp::fft(frame.hop(h));
}

double offgrid_floor(std::span<const Complex> Y, const ValidatedConfig& cfg) {
    std::vector<double> p;
    p.reserve(Y.size());
    for (int l = 0; l < static_cast<int>(Y.size()); ++l)
        if (!cfg.k_of_bin(l)) p.push_back(std::norm(Y[static_cast<size_t>(l)]));
    return dsp::median(std::move(p));
}

HopSpectrum detect_and_pair(CVec Y, const ValidatedConfig& cfg, const DetectOptions& opt) {
    const int M = cfg.M();
    if (static_cast<int>(Y.size()) != cfg.L()) throw Error(Errc::InvalidConfig, "spectrum length differs from L");
    HopSpectrum hs;
    hs.floor_power = offgrid_floor(Y, cfg);

    std::vector<int> cand;
    if (opt.full_spectrum) {
        cand.resize(Y.size());
        std::iota(cand.begin(), cand.end(), 0);
    } else {
        for (int k = 0; k < cfg.K(); ++k) cand.push_back(cfg.bin_of(k));
    }
    std::partial_sort(cand.begin(), cand.begin() + M, cand.end(), [&](int a, int b) {
        return std::norm(Y[static_cast<size_t>(a)]) > std::norm(Y[static_cast<size_t>(b)]);
    });
    cand.resize(static_cast<size_t>(M));

    const double threshold = hs.floor_power * std::pow(10.0, opt.margin_db / 10.0);
    std::vector<int> ks;
    for (int l : cand) {
        auto k = cfg.k_of_bin(l);
        if (!k) throw Error(Errc::PeakCollision, "a detected peak lies off the sub-band grid");
        if (!(std::norm(Y[static_cast<size_t>(l)]) > threshold))
            throw Error(Errc::PeakCollision, "fewer than M sub-band bins rise above the noise floor");
        ks.push_back(*k);
    }
    // Sorting in k rather than in bin order keeps k = 0 (bin 0) first.
    std::sort(ks.begin(), ks.end());
    hs.k_hat = ks;
    for (int k : ks) {
        hs.peak_bins.push_back(cfg.bin_of(k));
        hs.Ym.push_back(Y[static_cast<size_t>(cfg.bin_of(k))]);
    }
    std::sort(hs.peak_bins.begin(), hs.peak_bins.end());
    hs.Y = std::move(Y);
    return hs;
}

Complex half_hop_dft(const SampledFrame& frame, int h, int l) {
    if (frame.L % 2 != 0) throw Error(Errc::OddL, "half-hop DFT needs an even L");
    auto y = frame.hop(h);
    Complex acc{0.0, 0.0};
    for (int i = 0; i < frame.L / 2; ++i)
        acc += y[static_cast<size_t>(i)] * dsp::expj(-kTwoPi * static_cast<double>((static_cast<long>(i) * l) % frame.L) / frame.L);
    return acc;
}

}  // namespace fhdfrc
